#include "fractalcomp/channel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace fractalcomp {

double gamma_cdf_untruncated(double alpha, const PathLossLaw& law) {
    if (alpha <= 0.0) return 0.0;
    return boost::math::gamma_p(law.shape, alpha / law.scale);
}

double truncation_keep_mass(const PathLossLaw& law) {
    return boost::math::gamma_q(law.shape, law.alpha_min / law.scale);
}

double gamma_pdf(double alpha, const PathLossLaw& law) {
    if (alpha <= law.alpha_min) return 0.0;
    double lg = (law.shape - 1.0) * std::log(alpha) - alpha / law.scale
              - std::lgamma(law.shape) - law.shape * std::log(law.scale);
    return std::exp(lg) / truncation_keep_mass(law);
}

double sample_alpha(const PathLossLaw& law, rng::Stream& stream) {
    for (;;) {
        double a = stream.gamma(law.shape, law.scale);
        if (a > law.alpha_min) return a;
    }
}

double sample_fading(rng::Stream& stream) {
    return stream.exponential();
}

std::vector<Link> make_links(const Deployment& d, const NetworkConfig& config,
                             const PathLossLaw& law, rng::Stream& stream) {
    std::vector<double> rs = ordered_distances(d);
    std::vector<Link> links;
    links.reserve(rs.size());
    for (double r : rs) {
        Link l;
        l.distance = r;
        l.fading = sample_fading(stream);
        l.alpha = sample_alpha(law, stream);
        l.rx_power = config.p_s * l.fading * std::pow(r, -l.alpha);
        links.push_back(l);
    }
    return links;
}

}  // namespace fractalcomp
