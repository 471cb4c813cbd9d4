#pragma once

// Small deterministic quadrature kit: an adaptive Gauss-Kronrod 7/15 rule and
// cached Gauss-Legendre nodes. The refinement sequence depends only on the
// integrand and tolerances, never on threads or global state.

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractalcomp::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
};

// Raised when the requested tolerance cannot be met within the evaluation
// budget; carries the error estimate that was achieved.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved(achieved_error) {}
    double achieved;
};

namespace detail {
// Positive abscissae of the 15-point Kronrod extension of 7-point Gauss
// (index 7 is the center point).
inline constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss-7 weights, matching Kronrod abscissae 1, 3, 5, 7.
inline constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};
}  // namespace detail

// One Gauss-Kronrod 7/15 panel over [a, b]; error is the (conservative)
// difference between the two embedded rules.
template <class F>
Result gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk[8][2];
    for (int i = 0; i < 7; ++i) {
        fk[i][0] = f(c - h * detail::kron_x[i]);
        fk[i][1] = f(c + h * detail::kron_x[i]);
    }
    fk[7][0] = f(c);
    fk[7][1] = 0.0;
    double kron = detail::kron_w[7] * fk[7][0];
    for (int i = 0; i < 7; ++i) kron += detail::kron_w[i] * (fk[i][0] + fk[i][1]);
    double gauss = detail::gauss_w[3] * fk[7][0];
    for (int j = 0; j < 3; ++j) {
        int i = 2 * j + 1;
        gauss += detail::gauss_w[j] * (fk[i][0] + fk[i][1]);
    }
    return {kron * h, std::abs((kron - gauss) * h), 15};
}

// Globally adaptive bisection: repeatedly split the segment with the largest
// error until sum(errors) <= max(abs_tol, rel_tol * |integral|). Throws
// ToleranceError when the evaluation budget runs out first.
template <class F>
Result adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                long max_evals = 2000000) {
    struct Seg {
        double a, b, value, error;
    };
    auto worse = [](const Seg& s, const Seg& t) {
        if (s.error != t.error) return s.error < t.error;
        return s.a > t.a;  // deterministic tie-break
    };
    std::priority_queue<Seg, std::vector<Seg>, decltype(worse)> heap(worse);

    Result first = gk15(f, a, b);
    long evals = first.evals;
    heap.push({a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;

    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (evals + 30 > max_evals)
            throw ToleranceError("quadrature: evaluation budget exhausted", total_error);
        Seg s = heap.top();
        heap.pop();
        if (s.error <= 0.0)  // even the worst segment is exact: stuck on drift
            throw ToleranceError("quadrature: tolerance unreachable", total_error);
        double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) {
            // Interval at floating-point resolution; freeze it so other
            // segments can refine.
            total_error -= s.error;
            s.error = 0.0;
            heap.push(s);
            continue;
        }
        Result left = gk15(f, s.a, m);
        Result right = gk15(f, m, s.b);
        evals += left.evals + right.evals;
        total_value += left.value + right.value - s.value;
        total_error += left.error + right.error - s.error;
        heap.push({s.a, m, left.value, left.error});
        heap.push({m, s.b, right.value, right.error});
    }

    // Re-sum segments in position order: deterministic and well conditioned.
    std::vector<Seg> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) { return s.a < t.a; });
    double value = 0.0, error = 0.0;
    for (const Seg& s : segs) {
        value += s.value;
        error += s.error;
    }
    return {value, error, evals};
}

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

// Convenience: nodes/weights mapped to [a, b].
void gl_on(double a, double b, int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fractalcomp::quad
