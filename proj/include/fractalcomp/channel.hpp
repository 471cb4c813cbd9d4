#pragma once

// Per-link channel state: truncated-Gamma path loss exponents, Rayleigh
// fading power gains, and received powers.

#include <vector>

#include "fractalcomp/model.hpp"
#include "fractalcomp/pointprocess.hpp"
#include "fractalcomp/rng.hpp"

namespace fractalcomp {

struct Link {
    double distance = 0.0;  // meters
    double fading = 0.0;    // unit-mean exponential power gain h
    double alpha = 0.0;     // path loss exponent
    double rx_power = 0.0;  // p_s * fading * distance^(-alpha), W
};

// Truncated-renormalized Gamma density of the exponent; 0 at or below the
// truncation floor.
double gamma_pdf(double alpha, const PathLossLaw& law);

// CDF of the *untruncated* Gamma(shape, scale); exposed for distribution
// checks such as P(2 <= alpha <= 5.5).
double gamma_cdf_untruncated(double alpha, const PathLossLaw& law);

// Probability mass the truncation keeps, P(alpha > alpha_min) under the
// untruncated law. Callers report 1 - this as the discarded mass.
double truncation_keep_mass(const PathLossLaw& law);

// Draw from the truncated law by rejection against the untruncated sampler.
double sample_alpha(const PathLossLaw& law, rng::Stream& stream);

// Unit-mean exponential fading power gain.
double sample_fading(rng::Stream& stream);

// One Link per SBS point, sorted ascending by distance (ties keep the
// ordered_distances order); fading and exponent are drawn i.i.d. per link in
// sorted order, and rx_power follows the exact power law.
std::vector<Link> make_links(const Deployment& d, const NetworkConfig& config,
                             const PathLossLaw& law, rng::Stream& stream);

}  // namespace fractalcomp
