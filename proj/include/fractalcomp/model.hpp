#pragma once

// Domain types, unit conversions, and configuration validation shared by all
// other modules. Everything here is an immutable value type.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fractalcomp {

// Network-level parameters. Distances are meters, powers are watts, and path
// loss is r^(-alpha) against an implicit 1 m reference distance, so rates come
// out in nats per unit bandwidth when w = 1.
struct NetworkConfig {
    double lambda_b;  // SBS intensity, points per m^2
    double lambda_u;  // UE intensity, points per m^2
    double p_s;       // SBS transmit power, W
    double w;         // bandwidth weight multiplying the log-rate
    double sigma2;    // noise power, W
    double p0;        // SBS idle power, W
    double delta_p;   // load-dependent power slope
    double area_s;    // area of interest, m^2 (cancels wherever it appears)

    static NetworkConfig defaults();
};

// Truncated-Gamma law for the per-link path loss exponent: alpha follows
// Gamma(shape, scale) conditioned on alpha > alpha_min, renormalized.
struct PathLossLaw {
    double shape = 9.0;
    double scale = 0.5;
    double alpha_min = 2.0;
};

// Cooperation strategies: the K nearest SBSs, or every SBS whose instantaneous
// received power meets threshold t (watts).
struct DistanceK {
    int k = 1;
};
struct PowerThreshold {
    double t = 0.0;
};
using Strategy = std::variant<DistanceK, PowerThreshold>;

enum class Method { monte_carlo, quadrature };

// A point estimate with its uncertainty: 95% confidence half-width for Monte
// Carlo, quadrature error bound for analytic results (n_trials = 0).
struct Estimate {
    double value = 0.0;
    double half_width = 0.0;
    std::uint64_t n_trials = 0;
    Method method = Method::monte_carlo;
};

// dBm -> watts. Throws std::invalid_argument on non-finite input.
double dbm_to_watt(double x_dbm);

// Successful validation carries the inputs through unchanged.
struct Validated {
    NetworkConfig config;
    PathLossLaw law;
};

// Returns the configuration unchanged iff every invariant holds; otherwise the
// list of violated constraints, one message per offending field.
std::variant<Validated, std::vector<std::string>> validate(const NetworkConfig& config,
                                                           const PathLossLaw& law);

// Convenience wrapper: just the violation messages (empty means valid).
std::vector<std::string> violations(const NetworkConfig& config, const PathLossLaw& law);

// Empty when the strategy is well-formed (k >= 1 / t > 0).
std::vector<std::string> violations(const Strategy& strategy);

}  // namespace fractalcomp
