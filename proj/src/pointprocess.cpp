#include "fractalcomp/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fractalcomp {

Deployment sample_ppp(double lambda, double radius, rng::Stream& stream) {
    if (!(radius > 0.0))
        throw std::invalid_argument("sample_ppp: radius must be > 0");
    if (lambda < 0.0)
        throw std::invalid_argument("sample_ppp: lambda must be >= 0");
    double mean = lambda * std::numbers::pi * radius * radius;
    std::uint64_t n = stream.poisson(mean);
    Deployment d;
    d.window_radius = radius;
    d.sbs_points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        double r = radius * std::sqrt(stream.uniform01());
        double theta = 2.0 * std::numbers::pi * stream.uniform01();
        d.sbs_points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return d;
}

std::vector<double> ordered_distances(const Deployment& d) {
    std::vector<double> out;
    out.reserve(d.sbs_points.size());
    for (const Point& p : d.sbs_points) out.push_back(std::hypot(p.x, p.y));
    std::stable_sort(out.begin(), out.end());
    return out;
}

double joint_pdf_kth(double r_k, double r_k1, double lambda, int k) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("joint_pdf_kth: lambda must be > 0");
    if (k < 1)
        throw std::invalid_argument("joint_pdf_kth: k must be >= 1");
    if (r_k < 0.0 || r_k1 < r_k) return 0.0;
    if (r_k == 0.0) return 0.0;  // r_k^(2k-1) with 2k-1 >= 1
    double pl = std::numbers::pi * lambda;
    // log form keeps large k and extreme radii stable
    double lg = std::log(4.0) + (k + 1) * std::log(pl) - std::lgamma(k)
              + (2 * k - 1) * std::log(r_k) + std::log(r_k1) - pl * r_k1 * r_k1;
    return std::exp(lg);
}

double contact_cdf(double r, double lambda) {
    if (r <= 0.0) return 0.0;
    return -std::expm1(-lambda * std::numbers::pi * r * r);
}

}  // namespace fractalcomp
