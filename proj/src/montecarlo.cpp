#include "fractalcomp/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "fractalcomp/channel.hpp"
#include "fractalcomp/cooperation.hpp"
#include "fractalcomp/pointprocess.hpp"
#include "fractalcomp/rng.hpp"

namespace fractalcomp {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_valid(const NetworkConfig& config, const PathLossLaw& law) {
    const auto v = violations(config, law);
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& s : v) os << ' ' << s << ';';
    throw std::invalid_argument(os.str());
}

void require_plan(const McPlan& plan) {
    if (plan.n_trials < 100) throw std::invalid_argument("n_trials must be at least 100");
    if (!(plan.window_radius > 0.0) || !std::isfinite(plan.window_radius))
        throw std::invalid_argument("window_radius must be positive and finite");
}

std::uint64_t resolve_batch(const McPlan& plan) {
    require_plan(plan);
    std::uint64_t b = plan.batch_size;
    if (b == 0) {
        b = plan.n_trials / 100;
        while (plan.n_trials % b != 0) --b;
    } else if (plan.n_trials % b != 0) {
        throw std::invalid_argument("batch_size must divide n_trials");
    }
    if (plan.n_trials / b < 2)
        throw std::invalid_argument("batch_size must leave at least two batches");
    return b;
}

// Evaluate trial(i) for i in [0, n); slot i depends only on i, so the result
// is identical for any worker count.
template <class Fn>
std::vector<double> run_trials(std::uint64_t n, Fn&& trial) {
    std::vector<double> out(n);
    const int workers = worker_count();
    if (workers <= 1 || n < 4 * static_cast<std::uint64_t>(workers)) {
        for (std::uint64_t i = 0; i < n; ++i) out[i] = trial(i);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            out[i] = trial(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    return out;
}

// Sequential batch-means fold: mean of batch means with a normal 95% interval
// on their spread. The summation order is fixed by the trial index, never by
// the thread schedule.
Estimate batch_means(const std::vector<double>& samples, std::uint64_t batch) {
    const std::uint64_t nb = samples.size() / batch;
    std::vector<double> means(nb, 0.0);
    for (std::uint64_t b = 0; b < nb; ++b) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < batch; ++i) acc += samples[b * batch + i];
        means[b] = acc / static_cast<double>(batch);
    }
    double m = 0.0;
    for (double v : means) m += v;
    m /= static_cast<double>(nb);
    double ss = 0.0;
    for (double v : means) ss += (v - m) * (v - m);
    const double var = ss / static_cast<double>(nb - 1);
    Estimate e;
    e.value = m;
    e.half_width = 1.96 * std::sqrt(var / static_cast<double>(nb));
    e.n_trials = samples.size();
    e.method = Method::monte_carlo;
    return e;
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("FRACTALCOMP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

Estimate estimate_rate(const Strategy& strategy, const NetworkConfig& config,
                       const PathLossLaw& law, const McPlan& plan, McDiag* diag) {
    require_valid(config, law);
    if (const auto sv = violations(strategy); !sv.empty())
        throw std::invalid_argument("invalid strategy: " + sv.front());
    const std::uint64_t batch = resolve_batch(plan);

    std::atomic<std::uint64_t> truncated{0};
    auto trial = [&](std::uint64_t i) {
        rng::Stream st(plan.seed, rng::substream::tag(rng::substream::rate_trial, i));
        const Deployment d = sample_ppp(config.lambda_b, plan.window_radius, st);
        const std::vector<Link> links = make_links(d, config, law, st);
        Partition part;
        if (const auto* dk = std::get_if<DistanceK>(&strategy)) {
            if (links.size() < static_cast<std::size_t>(dk->k))
                truncated.fetch_add(1, std::memory_order_relaxed);
            part = select_distance(links, dk->k);
        } else {
            part = select_power(links, std::get<PowerThreshold>(strategy).t);
        }
        return inst_rate(part, config);
    };

    const std::vector<double> samples = run_trials(plan.n_trials, trial);
    Estimate e = batch_means(samples, batch);
    if (diag) diag->truncation_events = truncated.load();
    return e;
}

Estimate estimate_coop_count(double t, const NetworkConfig& config, const PathLossLaw& law,
                             const McPlan& plan) {
    require_valid(config, law);
    if (const auto sv = violations(Strategy{PowerThreshold{t}}); !sv.empty())
        throw std::invalid_argument("invalid strategy: " + sv.front());
    const std::uint64_t batch = resolve_batch(plan);

    auto trial = [&](std::uint64_t i) {
        rng::Stream st(plan.seed, rng::substream::tag(rng::substream::coop_trial, i));
        const Deployment d = sample_ppp(config.lambda_b, plan.window_radius, st);
        const std::vector<Link> links = make_links(d, config, law, st);
        return static_cast<double>(coop_count(select_power(links, t)));
    };

    return batch_means(run_trials(plan.n_trials, trial), batch);
}

Estimate estimate_ue_per_sbs(double t, const NetworkConfig& config, const PathLossLaw& law,
                             const McPlan& plan) {
    require_valid(config, law);
    if (const auto sv = violations(Strategy{PowerThreshold{t}}); !sv.empty())
        throw std::invalid_argument("invalid strategy: " + sv.front());
    const std::uint64_t batch = resolve_batch(plan);

    auto trial = [&](std::uint64_t i) {
        rng::Stream st(plan.seed, rng::substream::tag(rng::substream::ue_draw, i));
        const double h = sample_fading(st);
        const double alpha = sample_alpha(law, st);
        return kPi * config.lambda_u * std::pow(config.p_s * h / t, 2.0 / alpha);
    };

    return batch_means(run_trials(plan.n_trials, trial), batch);
}

RateGain estimate_rate_gain(double t, const NetworkConfig& config, const PathLossLaw& law,
                            const McPlan& plan, KRounding rounding) {
    const Estimate nc = estimate_coop_count(t, config, law, plan);
    const double fl = std::floor(nc.value);
    const double frac = nc.value - fl;
    int k;
    if (rounding == KRounding::half_up) {
        k = static_cast<int>(frac >= 0.5 ? fl + 1.0 : fl);
    } else if (frac > 0.5) {
        k = static_cast<int>(fl + 1.0);
    } else if (frac < 0.5) {
        k = static_cast<int>(fl);
    } else {
        k = static_cast<int>(std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0);
    }
    if (k < 1)
        throw std::domain_error(
            "mean cooperative-set size rounds to zero; no distance-matched comparison exists");

    RateGain g;
    g.k_matched = k;
    g.rate_distance = estimate_rate(Strategy{DistanceK{k}}, config, law, plan);
    g.rate_power = estimate_rate(Strategy{PowerThreshold{t}}, config, law, plan);
    const double d = g.rate_distance.value;
    g.gain = (g.rate_power.value - d) / d;
    g.gain_half_width = g.rate_power.half_width / std::abs(d) +
                        std::abs(g.rate_power.value / (d * d)) * g.rate_distance.half_width;
    return g;
}

Estimate estimate_energy_efficiency(double t, const NetworkConfig& config,
                                    const PathLossLaw& law, const McPlan& plan) {
    const Estimate tau = estimate_rate(Strategy{PowerThreshold{t}}, config, law, plan);
    const Estimate nue = estimate_ue_per_sbs(t, config, law, plan);
    const double p_total = config.p0 + nue.value * config.p_s * config.delta_p;
    Estimate e;
    e.value = config.lambda_u * tau.value / (config.lambda_b * p_total);
    const double dtau = config.lambda_u / (config.lambda_b * p_total);
    const double dn = std::abs(e.value) * config.p_s * config.delta_p / p_total;
    e.half_width = dtau * tau.half_width + dn * nue.half_width;
    e.n_trials = plan.n_trials;
    e.method = Method::monte_carlo;
    return e;
}

TruncationCheck truncation_check(const Strategy& strategy, const NetworkConfig& config,
                                 const PathLossLaw& law, const McPlan& plan) {
    TruncationCheck tc;
    tc.base = estimate_rate(strategy, config, law, plan);
    McPlan wide = plan;
    wide.window_radius = 2.0 * plan.window_radius;
    tc.doubled = estimate_rate(strategy, config, law, wide);
    tc.delta = std::abs(tc.doubled.value - tc.base.value);
    tc.passed = tc.delta <= tc.base.half_width;
    return tc;
}

}  // namespace fractalcomp
