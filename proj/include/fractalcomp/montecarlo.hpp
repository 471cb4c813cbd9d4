#pragma once

// Monte Carlo estimators for every quantity the quadrature engine computes.
// Each trial seeds its own counter-based substream from (plan.seed, trial
// index), so results are bit-identical for a given seed regardless of how
// many worker threads run the trials. FRACTALCOMP_THREADS caps the worker
// count; confidence intervals come from batch means.

#include <cstdint>

#include "fractalcomp/model.hpp"

namespace fractalcomp {

struct McPlan {
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    double window_radius = 2000.0;  // meters; the simulated disk
    std::uint64_t batch_size = 0;   // 0 -> largest divisor of n_trials <= n_trials/100
};

// Per-run diagnostics. truncation_events counts trials where the distance
// rule asked for more SBSs than the window contained.
struct McDiag {
    std::uint64_t truncation_events = 0;
};

// How the threshold's mean cooperative-set size is rounded to the matched k.
enum class KRounding { half_up, half_even };

struct RateGain {
    Estimate rate_distance;  // matched k-nearest rate
    Estimate rate_power;     // threshold rate
    double gain = 0.0;       // (power - distance) / distance
    double gain_half_width = 0.0;
    int k_matched = 0;
};

struct TruncationCheck {
    Estimate base;     // rate at the plan's window
    Estimate doubled;  // rate with the window radius doubled
    double delta = 0.0;
    bool passed = false;  // delta within the base confidence half-width
};

// Number of worker threads: FRACTALCOMP_THREADS when set (>= 1), otherwise
// the hardware concurrency.
int worker_count();

// Average achievable rate under either cooperation strategy.
Estimate estimate_rate(const Strategy& strategy, const NetworkConfig& config,
                       const PathLossLaw& law, const McPlan& plan, McDiag* diag = nullptr);

// Mean cooperative-set size under the power threshold t, estimated from the
// full deployment pipeline (sample, build links, partition, count).
Estimate estimate_coop_count(double t, const NetworkConfig& config, const PathLossLaw& law,
                             const McPlan& plan);

// Mean users per SBS: direct sampling of pi lambda_u (p_s h / t)^(2/alpha)
// over (h, alpha) draws; no user process is simulated.
Estimate estimate_ue_per_sbs(double t, const NetworkConfig& config, const PathLossLaw& law,
                             const McPlan& plan);

// Threshold rate against the distance rate at the matched k (the rounded
// mean cooperative-set size). Throws std::domain_error when the matched k
// rounds to zero, because no comparison exists there.
RateGain estimate_rate_gain(double t, const NetworkConfig& config, const PathLossLaw& law,
                            const McPlan& plan, KRounding rounding = KRounding::half_up);

// eta = lambda_u * rate / (lambda_b * (p0 + ue_per_sbs * p_s * delta_p));
// half-width by first-order propagation of both estimates.
Estimate estimate_energy_efficiency(double t, const NetworkConfig& config,
                                    const PathLossLaw& law, const McPlan& plan);

// Re-estimates the rate with the window radius doubled and passes when the
// change stays within the base estimate's confidence half-width.
TruncationCheck truncation_check(const Strategy& strategy, const NetworkConfig& config,
                                 const PathLossLaw& law, const McPlan& plan);

}  // namespace fractalcomp
