#include "fractalcomp/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace fractalcomp::quad {

namespace {

// Legendre nodes by Newton iteration from the Chebyshev initial guess;
// standard three-term recurrence for P_n and its derivative.
std::pair<std::vector<double>, std::vector<double>> compute_gl(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        double wi = 2.0 / ((1.0 - t * t) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return {std::move(x), std::move(w)};
}

std::mutex cache_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<double>>>& cache() {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> c;
    return c;
}

const std::pair<std::vector<double>, std::vector<double>>& cached(int n) {
    if (n < 1) throw std::invalid_argument("gauss-legendre order must be >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache().find(n);
    if (it == cache().end()) it = cache().emplace(n, compute_gl(n)).first;
    return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int n) { return cached(n).first; }
const std::vector<double>& gl_weights(int n) { return cached(n).second; }

void gl_on(double a, double b, int n, std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& [x, w] = cached(n);
    nodes.resize(n);
    weights.resize(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = c + h * x[i];
        weights[i] = h * w[i];
    }
}

}  // namespace fractalcomp::quad
