#pragma once

// Numerical evaluation of the closed-form network expressions by adaptive
// quadrature: Laplace transforms of desired/interfering power under both
// cooperation rules, the rate integrals, mean cooperative-set sizes, and
// network energy efficiency.
//
// All evaluators return an Estimate with method = quadrature whose half_width
// is the reported numerical error bound (outer quadrature error plus exponent-
// law tail mass beyond alpha_max and propagated inner tolerances). The fixed
// exponent-expectation grid is spectrally accurate and validated against
// adaptive references in the test suite.
//
// Radial integrals run over the same finite disk the simulator samples
// (spec.r_max); with exponent mass arbitrarily close to 2 the infinite-plane
// interference functional diverges, so the window is part of the model, not a
// numerical shortcut, and both engines must use the same radius to be
// comparable. See README for the window-sensitivity discussion.

#include "fractalcomp/model.hpp"

namespace fractalcomp {

// Method for the distance-rule rate integral:
//  - exact: condition on the K-th nearest distance; the K-1 interior points
//    are i.i.d. uniform in the disk and the annulus interference is
//    independent, so the conditional transforms factor exactly.
//  - pgfl: the product-of-expectations form with the joint (r_K, r_{K+1})
//    density on a tensor grid; treats desired and interfering sums as
//    conditionally independent given the pair, which is an approximation
//    (a few percent at K = 1, shrinking with K).
enum class RateMethod { exact, pgfl };

struct QuadSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double s_max = 1e14;       // upper truncation of the Laplace variable
    double r_max = 2000.0;     // radial window, meters (match the MC window)
    double alpha_max = 30.0;   // upper truncation of exponent integrals
    RateMethod distance_method = RateMethod::exact;
};

// Laplace transform of the total power received from the K-nearest disk of
// radius r_k (probability generating functional over the disk).
Estimate laplace_pd(double s, double r_k, const NetworkConfig& config,
                    const PathLossLaw& law, const QuadSpec& spec);

// Laplace transform of the interference aggregated over the annulus from
// r_k1 out to spec.r_max.
Estimate laplace_id(double s, double r_k1, const NetworkConfig& config,
                    const PathLossLaw& law, const QuadSpec& spec);

// Radial kernel integrals splitting the plane at the threshold radius
// R_t = (p_s h / t)^(1/alpha):
//   kappa1 = integral_0^{R_t} (1 - exp(-s p_s h r^-alpha)) r dr
//   kappa2 = the same integrand from R_t to infinity (alpha > 2 required).
// Evaluated in closed form via incomplete gamma functions (exact; the test
// suite cross-checks against direct radial quadrature).
double kappa1(double s, double h, double alpha, double t, const NetworkConfig& config);
double kappa2(double s, double h, double alpha, double t, const NetworkConfig& config);

// Laplace transforms of desired power (above-threshold links) and
// interference (below-threshold links) under the power-threshold rule, with
// the fading expectation taken against the unit-mean exponential density
// e^(-h) and the exponent expectation against the truncated Gamma law.
Estimate laplace_pp(double s, double t, const NetworkConfig& config,
                    const PathLossLaw& law, const QuadSpec& spec);
Estimate laplace_ip(double s, double t, const NetworkConfig& config,
                    const PathLossLaw& law, const QuadSpec& spec);

// Average achievable rate with the K-nearest cooperation rule.
Estimate rate_distance(int k, const NetworkConfig& config, const PathLossLaw& law,
                       const QuadSpec& spec);

// Average achievable rate with the power-threshold rule.
Estimate rate_power(double t, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec);

// Mean cooperative-set size pi lambda_b E[(p_s h / t)^(2/alpha)] and the mean
// number of users served per SBS (same expectation against lambda_u).
Estimate mean_coop_count(double t, const NetworkConfig& config, const PathLossLaw& law,
                         const QuadSpec& spec);
Estimate mean_ue_per_sbs(double t, const NetworkConfig& config, const PathLossLaw& law,
                         const QuadSpec& spec);

// Network energy efficiency:
//   eta = lambda_u * rate_power(t) / (lambda_b * (p0 + mean_ue_per_sbs(t) * p_s * delta_p));
// the area of interest cancels between sum rate and total power and is never
// multiplied in.
Estimate energy_efficiency(double t, const NetworkConfig& config, const PathLossLaw& law,
                           const QuadSpec& spec);

}  // namespace fractalcomp
