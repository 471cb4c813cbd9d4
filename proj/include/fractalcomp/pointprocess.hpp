#pragma once

// Homogeneous Poisson point processes in a disk around the typical user at
// the origin, plus ordered-distance statistics.

#include <vector>

#include "fractalcomp/model.hpp"
#include "fractalcomp/rng.hpp"

namespace fractalcomp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Deployment {
    std::vector<Point> sbs_points;
    double window_radius = 0.0;
};

// Draws a realization of a homogeneous PPP of the given intensity in the disk
// of the given radius: Poisson(lambda * pi * radius^2) points, i.i.d. uniform.
// Throws std::invalid_argument for radius <= 0 or lambda < 0.
Deployment sample_ppp(double lambda, double radius, rng::Stream& stream);

// Distances from the origin, sorted ascending; ties keep insertion order so
// cooperative-set membership is deterministic.
std::vector<double> ordered_distances(const Deployment& d);

// Joint density of the K-th and (K+1)-th nearest-point distances of a PPP:
//   f(r_k, r_k1) = 4 (pi lambda)^(k+1) / (k-1)! * r_k^(2k-1) * r_k1
//                  * exp(-pi lambda r_k1^2)   on 0 <= r_k <= r_k1.
// The constant is the exact order-statistics normalization (the factor 4
// restores a unit integral; see the normalization test). Zero off-support.
double joint_pdf_kth(double r_k, double r_k1, double lambda, int k);

// Nearest-point (contact) distance CDF, 1 - exp(-lambda pi r^2); test oracle.
double contact_cdf(double r, double lambda);

}  // namespace fractalcomp
