#include "fractalcomp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fractalcomp/channel.hpp"
#include "fractalcomp/quadrature.hpp"

namespace fractalcomp {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

void require_valid(const NetworkConfig& config, const PathLossLaw& law) {
    const auto v = violations(config, law);
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& s : v) os << ' ' << s << ';';
    throw std::invalid_argument(os.str());
}

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be nonnegative and finite");
}

void require_spec(const QuadSpec& spec) {
    require_positive(spec.rel_tol, "rel_tol");
    require_nonnegative(spec.abs_tol, "abs_tol");
    require_positive(spec.s_max, "s_max");
    require_positive(spec.r_max, "r_max");
    require_positive(spec.alpha_max, "alpha_max");
}

// Upper incomplete gamma Gamma(p, y), extended to p <= 0 (where the point
// y = 0 is singular but y > 0 is fine) by the downward recurrence
// Gamma(p, y) = (Gamma(p + 1, y) - y^p e^-y) / p.
double upper_gamma(double p, double y) {
    if (p > 0.0) return boost::math::tgamma(p, y);
    if (!(y > 0.0)) throw std::domain_error("upper incomplete gamma needs y > 0 when p <= 0");
    if (p == 0.0) return boost::math::expint(1, y);
    return (upper_gamma(p + 1.0, y) - std::pow(y, p) * std::exp(-y)) / p;
}

// Phi(y) = (1 - e^-y) y^-a + Gamma(1 - a, y), the threshold kernel shared by
// kappa1 and kappa2; continuous at y = 0 with value Gamma(1 - a) when a < 1.
double phi_kernel(double y, double a) {
    if (y <= 0.0) {
        if (a >= 1.0) throw std::domain_error("phi kernel diverges at y = 0 for a >= 1");
        return boost::math::tgamma(1.0 - a);
    }
    return -std::expm1(-y) * std::pow(y, -a) + upper_gamma(1.0 - a, y);
}

// One exponent node with its s-independent special-function values.
struct AlphaNode {
    double alpha = 0.0;
    double a = 0.0;       // 2 / alpha
    double weight = 0.0;  // Gauss-Legendre weight times the truncated density
    double g1pa = 0.0;    // Gamma(1 + a)
    double g1ma = 0.0;    // Gamma(1 - a)
    double bfull = 0.0;   // B(a, 1 - a) = pi / sin(pi a)
};

AlphaNode make_node(double alpha) {
    AlphaNode n;
    n.alpha = alpha;
    n.a = 2.0 / alpha;
    n.g1pa = boost::math::tgamma(1.0 + n.a);
    n.g1ma = boost::math::tgamma(1.0 - n.a);
    n.bfull = kPi / std::sin(kPi * n.a);
    return n;
}

// Fixed quadrature grid for expectations over the truncated exponent law.
// The first segments resolve the boundary layer above alpha_min where
// a = 2/alpha approaches 1 and the kernels vary fastest; the remaining mass
// beyond alpha_max is reported as tail_mass and charged to error estimates
// via the probe node at alpha_max.
struct AlphaGrid {
    std::vector<AlphaNode> nodes;
    double tail_mass = 0.0;
    AlphaNode probe;
};

std::shared_ptr<const AlphaGrid> alpha_grid(const PathLossLaw& law, double alpha_max) {
    using Key = std::tuple<double, double, double, double>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const AlphaGrid>> cache;
    const Key key{law.shape, law.scale, law.alpha_min, alpha_max};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    if (law.alpha_min < 2.0)
        throw std::invalid_argument("alpha_min below 2 leaves the interference field non-integrable");
    if (!(alpha_max > law.alpha_min + 0.5))
        throw std::invalid_argument("alpha_max must exceed alpha_min by at least 0.5");

    const double lo = law.alpha_min;
    const double raw[] = {lo, lo + 0.02, lo + 0.1, lo + 0.5, lo + 1.5, 6.0, 10.0, alpha_max};
    const int counts[] = {16, 16, 16, 24, 24, 16, 16};
    std::vector<double> edges;
    for (double e : raw) {
        const double c = std::min(e, alpha_max);
        if (edges.empty() || c > edges.back() + 1e-9) edges.push_back(c);
    }

    auto grid = std::make_shared<AlphaGrid>();
    std::vector<double> xs, ws;
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        quad::gl_on(edges[seg], edges[seg + 1], counts[std::min<std::size_t>(seg, 6)], xs, ws);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            AlphaNode node = make_node(xs[i]);
            node.weight = ws[i] * gamma_pdf(xs[i], law);
            grid->nodes.push_back(node);
        }
    }
    grid->tail_mass = boost::math::gamma_q(law.shape, alpha_max / law.scale) / truncation_keep_mass(law);
    grid->probe = make_node(alpha_max);

    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(grid));
    (void)inserted;
    return it->second;
}

// Radial kernel at one exponent node:
//   integral_0^R (1 - E_h e^(-s p_s h r^-alpha)) r dr = (c^a / alpha) B(x; a, 1-a),
// with c = s p_s and x = R^alpha / (R^alpha + c).
double psi_node(double s, double radius, const AlphaNode& n, double p_s) {
    if (s <= 0.0 || radius <= 0.0) return 0.0;
    const double lt = n.alpha * std::log(radius) - std::log(s * p_s);
    const double x = 1.0 / (1.0 + std::exp(-lt));
    if (x <= 0.0) return 0.0;
    const double binc = x >= 1.0 ? n.bfull : boost::math::beta(n.a, 1.0 - n.a, x);
    return std::pow(s * p_s, n.a) / n.alpha * binc;
}

// 2 pi lambda_b E_alpha[psi_node], the exponent of the disk PGFL.
double psi_disk(double s, double radius, double lambda_b, double p_s, const AlphaGrid& grid) {
    if (s <= 0.0 || radius <= 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& n : grid.nodes) acc += n.weight * psi_node(s, radius, n, p_s);
    return kTwoPi * lambda_b * acc;
}

struct KappaPair {
    double k1 = 0.0;
    double k2 = 0.0;
};

// Fading expectations of the threshold-split kernels at one exponent node,
// with the interference side cut off at the window radius r_max:
//   E_h kappa1       = (c^a / 2) Gamma(1+a) Phi(y0)
//   E_h kappa2(win)  = (c^a / 2) Gamma(1+a) (Gamma(1-a) - Phi(y0))
//                      - (c^a / alpha) (B(a,1-a) - B(x_w; a,1-a))
// where y0 = s t and x_w = r_max^alpha / (r_max^alpha + c).
KappaPair eh_kappa(double s, double t, const AlphaNode& n, double p_s, double r_max) {
    if (s <= 0.0) return {};
    const double c = s * p_s;
    const double ca = std::pow(c, n.a);
    const double phi0 = phi_kernel(s * t, n.a);
    KappaPair kp;
    kp.k1 = 0.5 * ca * n.g1pa * phi0;
    const double lt = n.alpha * std::log(r_max) - std::log(c);
    const double xw = 1.0 / (1.0 + std::exp(-lt));
    double btail;  // window-outside beta mass B(a,1-a) - B(x_w; a,1-a)
    if (xw >= 1.0) btail = 0.0;
    else if (xw <= 0.0) btail = n.bfull;
    else btail = n.bfull - boost::math::beta(n.a, 1.0 - n.a, xw);
    kp.k2 = std::max(0.5 * ca * n.g1pa * (n.g1ma - phi0) - ca / n.alpha * btail, 0.0);
    return kp;
}

struct LogIntResult {
    double value = 0.0;
    double error = 0.0;
};

// Integrate f(s) ds over (0, s_max) with the substitution u = ln s. The head
// interval starts at s = 1e-2 and extends downward in chunks until a chunk is
// negligible; the final chunk magnitude and the endpoint magnitude at s_max
// are charged to the error as truncation bounds.
template <class F>
LogIntResult integrate_log_s(F&& f, double s_max, double rel_tol, double abs_tol) {
    auto g = [&](double u) {
        const double s = std::exp(u);
        return f(s) * s;
    };
    const double u_hi = std::log(s_max);
    double u_lo = std::min(std::log(1e-2), u_hi - 1.0);
    const quad::Result head = quad::adaptive(g, u_lo, u_hi, rel_tol, abs_tol);
    LogIntResult out{head.value, head.error};
    for (int i = 0; i < 40; ++i) {
        const double next = u_lo - 4.0;
        const quad::Result chunk = quad::adaptive(g, next, u_lo, rel_tol, 0.25 * abs_tol);
        out.value += chunk.value;
        out.error += chunk.error;
        u_lo = next;
        if (std::abs(chunk.value) <= std::max(abs_tol, 0.25 * rel_tol * std::abs(out.value))) {
            out.error += std::abs(chunk.value);
            break;
        }
    }
    out.error += std::abs(g(u_hi));
    return out;
}

Estimate quad_estimate(double value, double error) {
    Estimate e;
    e.value = value;
    e.half_width = error;
    e.n_trials = 0;
    e.method = Method::quadrature;
    return e;
}

Estimate rate_distance_pgfl(int k, const NetworkConfig& config, const PathLossLaw& law,
                            const QuadSpec& spec) {
    const auto grid = alpha_grid(law, spec.alpha_max);
    const double lam = config.lambda_b;

    // Tensor grid over the joint law of the k-th and (k+1)-th nearest
    // normalized areas: b ~ Gamma(k+1, 1) via its quantile transform and
    // a = b u^(1/k) for the inner point.
    const int nv = 32, nw = 16;
    std::vector<double> xv, wv, xw, ww;
    quad::gl_on(0.0, 1.0, nv, xv, wv);
    quad::gl_on(0.0, 1.0, nw, xw, ww);
    std::vector<double> r_out(nv), r_in(static_cast<std::size_t>(nv) * nw);
    for (int i = 0; i < nv; ++i) {
        const double b = boost::math::gamma_p_inv(static_cast<double>(k + 1), xv[i]);
        r_out[i] = std::sqrt(b / (kPi * lam));
        for (int j = 0; j < nw; ++j)
            r_in[static_cast<std::size_t>(i) * nw + j] =
                std::sqrt(b * std::pow(xw[j], 1.0 / k) / (kPi * lam));
    }

    auto f = [&](double s) {
        const double psi_w = psi_disk(s, spec.r_max, lam, config.p_s, *grid);
        double acc = 0.0;
        for (int i = 0; i < nv; ++i) {
            const double psi_b = psi_disk(s, r_out[i], lam, config.p_s, *grid);
            double inner = 0.0;
            for (int j = 0; j < nw; ++j) {
                const double psi_a =
                    psi_disk(s, r_in[static_cast<std::size_t>(i) * nw + j], lam, config.p_s, *grid);
                inner += ww[j] * -std::expm1(-psi_a);
            }
            acc += wv[i] * std::exp(-std::max(psi_w - psi_b, 0.0)) * inner;
        }
        return std::exp(-config.sigma2 * s) * acc / s;
    };

    const LogIntResult li = integrate_log_s(f, spec.s_max, spec.rel_tol, spec.abs_tol);
    const double value = config.w * li.value;
    const double err = config.w * li.error + (grid->tail_mass + 1e-14) * std::abs(value);
    return quad_estimate(value, err);
}

}  // namespace

Estimate laplace_pd(double s, double r_k, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_nonnegative(s, "s");
    require_nonnegative(r_k, "r_k");
    const auto grid = alpha_grid(law, spec.alpha_max);
    const double psi = psi_disk(s, r_k, config.lambda_b, config.p_s, *grid);
    const double probe = kTwoPi * config.lambda_b * psi_node(s, r_k, grid->probe, config.p_s);
    const double value = std::exp(-psi);
    return quad_estimate(value, value * (grid->tail_mass * probe + 1e-14 * (1.0 + psi)));
}

Estimate laplace_id(double s, double r_k1, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_nonnegative(s, "s");
    require_nonnegative(r_k1, "r_k1");
    const auto grid = alpha_grid(law, spec.alpha_max);
    const double r_in = std::min(r_k1, spec.r_max);
    double acc = 0.0;
    for (const auto& n : grid->nodes)
        acc += n.weight *
               std::max(psi_node(s, spec.r_max, n, config.p_s) - psi_node(s, r_in, n, config.p_s), 0.0);
    const double psi = kTwoPi * config.lambda_b * acc;
    const double probe =
        kTwoPi * config.lambda_b *
        std::max(psi_node(s, spec.r_max, grid->probe, config.p_s) -
                     psi_node(s, r_in, grid->probe, config.p_s),
                 0.0);
    const double value = std::exp(-psi);
    return quad_estimate(value, value * (grid->tail_mass * probe + 1e-14 * (1.0 + psi)));
}

double kappa1(double s, double h, double alpha, double t, const NetworkConfig& config) {
    require_nonnegative(s, "s");
    require_nonnegative(h, "h");
    require_positive(alpha, "alpha");
    require_positive(t, "t");
    require_positive(config.p_s, "p_s");
    if (s == 0.0 || h == 0.0) return 0.0;
    const double a = 2.0 / alpha;
    const double b = s * config.p_s * h;
    return 0.5 * std::pow(b, a) * phi_kernel(s * t, a);
}

double kappa2(double s, double h, double alpha, double t, const NetworkConfig& config) {
    require_nonnegative(s, "s");
    require_nonnegative(h, "h");
    require_positive(t, "t");
    require_positive(config.p_s, "p_s");
    if (!(alpha > 2.0))
        throw std::domain_error("kappa2 requires alpha > 2: the outside integral diverges otherwise");
    if (s == 0.0 || h == 0.0) return 0.0;
    const double a = 2.0 / alpha;
    const double b = s * config.p_s * h;
    return 0.5 * std::pow(b, a) * (boost::math::tgamma(1.0 - a) - phi_kernel(s * t, a));
}

Estimate laplace_pp(double s, double t, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_nonnegative(s, "s");
    require_positive(t, "t");
    const auto grid = alpha_grid(law, spec.alpha_max);
    double acc = 0.0;
    for (const auto& n : grid->nodes) acc += n.weight * eh_kappa(s, t, n, config.p_s, spec.r_max).k1;
    const double psi = kTwoPi * config.lambda_b * std::max(acc, 0.0);
    const double probe =
        kTwoPi * config.lambda_b * std::abs(eh_kappa(s, t, grid->probe, config.p_s, spec.r_max).k1);
    const double value = std::exp(-psi);
    return quad_estimate(value, value * (grid->tail_mass * probe + 1e-14 * (1.0 + psi)));
}

Estimate laplace_ip(double s, double t, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_nonnegative(s, "s");
    require_positive(t, "t");
    const auto grid = alpha_grid(law, spec.alpha_max);
    double acc = 0.0;
    for (const auto& n : grid->nodes) acc += n.weight * eh_kappa(s, t, n, config.p_s, spec.r_max).k2;
    const double psi = kTwoPi * config.lambda_b * std::max(acc, 0.0);
    const double probe =
        kTwoPi * config.lambda_b * std::abs(eh_kappa(s, t, grid->probe, config.p_s, spec.r_max).k2);
    const double value = std::exp(-psi);
    return quad_estimate(value, value * (grid->tail_mass * probe + 1e-14 * (1.0 + psi)));
}

Estimate rate_power(double t, const NetworkConfig& config, const PathLossLaw& law,
                    const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_positive(t, "t");
    const auto grid = alpha_grid(law, spec.alpha_max);
    const double lam = config.lambda_b;

    auto f = [&](double s) {
        double acc1 = 0.0, acc2 = 0.0;
        for (const auto& n : grid->nodes) {
            const KappaPair kp = eh_kappa(s, t, n, config.p_s, spec.r_max);
            acc1 += n.weight * kp.k1;
            acc2 += n.weight * kp.k2;
        }
        const double psi1 = kTwoPi * lam * std::max(acc1, 0.0);
        const double psi2 = kTwoPi * lam * std::max(acc2, 0.0);
        return std::exp(-config.sigma2 * s - psi2) * -std::expm1(-psi1) / s;
    };

    const LogIntResult li = integrate_log_s(f, spec.s_max, spec.rel_tol, spec.abs_tol);
    const double value = config.w * li.value;
    const double err = config.w * li.error + (grid->tail_mass + 1e-14) * std::abs(value);
    return quad_estimate(value, err);
}

Estimate rate_distance(int k, const NetworkConfig& config, const PathLossLaw& law,
                       const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (spec.distance_method == RateMethod::pgfl) return rate_distance_pgfl(k, config, law, spec);

    const auto grid = alpha_grid(law, spec.alpha_max);
    const double lam = config.lambda_b;
    const double lgk = std::lgamma(static_cast<double>(k));
    // Outer variable: the normalized area A = pi lambda_b r_k^2 ~ Gamma(k, 1).
    const double a_hi = boost::math::gamma_p_inv(static_cast<double>(k), 1.0 - 1e-12);

    auto outer = [&](double area) {
        const double r = std::sqrt(area / (kPi * lam));
        auto f = [&](double s) {
            const double logc = std::log(s * config.p_s);
            const double logr = std::log(r);
            const double logrw = std::log(spec.r_max);
            double pw = 0.0, pr = 0.0, dd = 0.0;
            for (const auto& n : grid->nodes) {
                const double ca = std::pow(s * config.p_s, n.a) / n.alpha;
                const double x_w = 1.0 / (1.0 + std::exp(logc - n.alpha * logrw));
                const double x_r = 1.0 / (1.0 + std::exp(logc - n.alpha * logr));
                const double b_w =
                    x_w <= 0.0 ? 0.0
                               : (x_w >= 1.0 ? n.bfull : boost::math::beta(n.a, 1.0 - n.a, x_w));
                const double b_r =
                    x_r <= 0.0 ? 0.0
                               : (x_r >= 1.0 ? n.bfull : boost::math::beta(n.a, 1.0 - n.a, x_r));
                pw += n.weight * ca * b_w;
                pr += n.weight * ca * b_r;
                dd += n.weight * x_r;  // x_r doubles as the link Laplace factor
            }
            const double psi_w = kTwoPi * lam * pw;
            const double psi_r = kTwoPi * lam * pr;
            // Interior points are i.i.d. uniform in the disk given r_k: each
            // contributes the mean factor 1 - psi_r / area; the k-th point
            // itself contributes the link factor at r exactly.
            const double q = std::clamp(psi_r / area, 0.0, 1.0);
            const double lp = (k == 1 ? 1.0 : std::pow(1.0 - q, k - 1)) * dd;
            return std::exp(-config.sigma2 * s - std::max(psi_w - psi_r, 0.0)) * (1.0 - lp) / s;
        };
        const LogIntResult li =
            integrate_log_s(f, spec.s_max, 0.125 * spec.rel_tol, 0.125 * spec.abs_tol);
        const double pdf =
            k == 1 ? std::exp(-area) : std::exp((k - 1) * std::log(area) - area - lgk);
        return pdf * li.value;
    };

    const quad::Result out = quad::adaptive(outer, 0.0, a_hi, spec.rel_tol, spec.abs_tol, 6000);
    const double value = config.w * out.value;
    const double err = config.w * (out.error + 0.25 * spec.rel_tol * std::abs(out.value) + spec.abs_tol) +
                       (grid->tail_mass + 1e-12) * std::abs(value);
    return quad_estimate(value, err);
}

Estimate mean_coop_count(double t, const NetworkConfig& config, const PathLossLaw& law,
                         const QuadSpec& spec) {
    require_valid(config, law);
    require_spec(spec);
    require_positive(t, "t");
    const auto grid = alpha_grid(law, spec.alpha_max);
    double acc = 0.0;
    for (const auto& n : grid->nodes) acc += n.weight * std::pow(config.p_s / t, n.a) * n.g1pa;
    const double value = kPi * config.lambda_b * acc;
    const double probe =
        kPi * config.lambda_b * std::pow(config.p_s / t, grid->probe.a) * grid->probe.g1pa;
    return quad_estimate(value, grid->tail_mass * probe + 1e-14 * value);
}

Estimate mean_ue_per_sbs(double t, const NetworkConfig& config, const PathLossLaw& law,
                         const QuadSpec& spec) {
    Estimate e = mean_coop_count(t, config, law, spec);
    const double ratio = config.lambda_u / config.lambda_b;
    e.value *= ratio;
    e.half_width *= ratio;
    return e;
}

Estimate energy_efficiency(double t, const NetworkConfig& config, const PathLossLaw& law,
                           const QuadSpec& spec) {
    const Estimate tau = rate_power(t, config, law, spec);
    const Estimate nue = mean_ue_per_sbs(t, config, law, spec);
    const double p_total = config.p0 + nue.value * config.p_s * config.delta_p;
    const double value = config.lambda_u * tau.value / (config.lambda_b * p_total);
    const double dtau = config.lambda_u / (config.lambda_b * p_total);
    const double dn = std::abs(value) * config.p_s * config.delta_p / p_total;
    return quad_estimate(value, dtau * tau.half_width + dn * nue.half_width);
}

}  // namespace fractalcomp
