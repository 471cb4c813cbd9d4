#include "fractalcomp/cooperation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fractalcomp {

Partition select_distance(const std::vector<Link>& links, int k) {
    if (k < 1) throw std::invalid_argument("select_distance: k must be >= 1");
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), links.size());
    Partition p;
    p.coop.assign(links.begin(), links.begin() + take);
    p.interf.assign(links.begin() + take, links.end());
    return p;
}

Partition select_power(const std::vector<Link>& links, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("select_power: t must be > 0");
    Partition p;
    for (const Link& l : links) {
        if (l.rx_power >= t)
            p.coop.push_back(l);
        else
            p.interf.push_back(l);
    }
    return p;
}

double sinr(const Partition& p, double sigma2) {
    if (p.coop.empty()) return 0.0;
    double pd = 0.0;
    for (const Link& l : p.coop) pd += l.rx_power;
    double ii = sigma2;
    for (const Link& l : p.interf) ii += l.rx_power;
    if (ii == 0.0) return std::numeric_limits<double>::infinity();
    return pd / ii;
}

double inst_rate(const Partition& p, const NetworkConfig& config) {
    if (p.coop.empty()) return 0.0;
    return config.w * std::log1p(sinr(p, config.sigma2));
}

std::size_t coop_count(const Partition& p) {
    return p.coop.size();
}

}  // namespace fractalcomp
