#include "fractalcomp/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fractalcomp {

NetworkConfig NetworkConfig::defaults() {
    NetworkConfig c;
    c.lambda_b = 1.0 / (50.0 * 50.0 * std::numbers::pi);
    c.lambda_u = 1.0 / (300.0 * std::numbers::pi);
    c.p_s = 0.13;
    c.w = 1.0;
    c.sigma2 = dbm_to_watt(-95.0);
    c.p0 = 2.5;
    c.delta_p = 4.0;
    c.area_s = 1.0;
    return c;
}

double dbm_to_watt(double x_dbm) {
    if (!std::isfinite(x_dbm))
        throw std::invalid_argument("dbm_to_watt: input must be finite");
    return std::pow(10.0, (x_dbm - 30.0) / 10.0);
}

std::vector<std::string> violations(const NetworkConfig& config, const PathLossLaw& law) {
    std::vector<std::string> out;
    auto require = [&out](bool ok, const char* msg) {
        if (!ok) out.emplace_back(msg);
    };
    require(config.lambda_b > 0.0, "lambda_b must be > 0");
    require(config.lambda_u > 0.0, "lambda_u must be > 0");
    require(config.p_s > 0.0, "p_s must be > 0");
    require(config.w > 0.0, "w must be > 0");
    require(config.sigma2 >= 0.0, "sigma2 must be >= 0");
    require(config.p0 >= 0.0, "p0 must be >= 0");
    require(config.delta_p >= 0.0, "delta_p must be >= 0");
    require(law.shape > 0.0, "shape must be > 0");
    require(law.scale > 0.0, "scale must be > 0");
    require(law.alpha_min >= 2.0, "alpha_min must be >= 2");
    return out;
}

std::variant<Validated, std::vector<std::string>> validate(const NetworkConfig& config,
                                                           const PathLossLaw& law) {
    std::vector<std::string> bad = violations(config, law);
    if (bad.empty()) return Validated{config, law};
    return bad;
}

std::vector<std::string> violations(const Strategy& strategy) {
    std::vector<std::string> out;
    if (const auto* d = std::get_if<DistanceK>(&strategy)) {
        if (d->k < 1) out.emplace_back("k must be >= 1");
    } else if (const auto* p = std::get_if<PowerThreshold>(&strategy)) {
        if (!(p->t > 0.0)) out.emplace_back("t must be > 0");
    }
    return out;
}

}  // namespace fractalcomp
