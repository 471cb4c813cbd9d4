#include <doctest.h>

#include "fractalcomp/model.hpp"
#include "fractalcomp/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

using namespace fractalcomp;

namespace {

const NetworkConfig kConfig = NetworkConfig::defaults();
const PathLossLaw kLaw{};

McPlan plan_of(std::uint64_t n, std::uint64_t seed = 1) {
    McPlan p;
    p.n_trials = n;
    p.seed = seed;
    return p;
}

// Keeps FRACTALCOMP_THREADS restored no matter how a test exits.
class ThreadsGuard {
public:
    ThreadsGuard() {
        if (const char* v = std::getenv("FRACTALCOMP_THREADS")) saved_ = v;
    }
    ~ThreadsGuard() {
        if (saved_.empty())
            unsetenv("FRACTALCOMP_THREADS");
        else
            setenv("FRACTALCOMP_THREADS", saved_.c_str(), 1);
    }
    void set(const char* v) { setenv("FRACTALCOMP_THREADS", v, 1); }

private:
    std::string saved_;
};

}  // namespace

TEST_CASE("worker_count follows the environment cap") {
    ThreadsGuard guard;
    guard.set("7");
    CHECK(worker_count() == 7);
    guard.set("1");
    CHECK(worker_count() == 1);
    guard.set("not a number");
    CHECK(worker_count() >= 1);  // falls back to hardware concurrency
    guard.set("0");
    CHECK(worker_count() >= 1);
}

TEST_CASE("results are bit-identical across worker counts") {
    ThreadsGuard guard;
    const double t32 = dbm_to_watt(-32.0);
    McPlan plan = plan_of(1000, 17);

    guard.set("1");
    Estimate serial = estimate_rate(Strategy{PowerThreshold{t32}}, kConfig, kLaw, plan);
    guard.set("5");
    Estimate parallel = estimate_rate(Strategy{PowerThreshold{t32}}, kConfig, kLaw, plan);

    CHECK(serial.value == parallel.value);
    CHECK(serial.half_width == parallel.half_width);

    // And identical on a straight re-run.
    Estimate again = estimate_rate(Strategy{PowerThreshold{t32}}, kConfig, kLaw, plan);
    CHECK(serial.value == again.value);
}

TEST_CASE("plan validation") {
    const double t32 = dbm_to_watt(-32.0);
    McPlan p = plan_of(1000);

    SUBCASE("too few trials") {
        p.n_trials = 99;
        CHECK_THROWS_AS(estimate_coop_count(t32, kConfig, kLaw, p), std::invalid_argument);
    }
    SUBCASE("batch must divide the trial count") {
        p.batch_size = 3;
        CHECK_THROWS_AS(estimate_coop_count(t32, kConfig, kLaw, p), std::invalid_argument);
    }
    SUBCASE("at least two batches") {
        p.batch_size = 1000;
        CHECK_THROWS_AS(estimate_coop_count(t32, kConfig, kLaw, p), std::invalid_argument);
        p.batch_size = 500;  // two batches: legal
        CHECK_NOTHROW(estimate_coop_count(t32, kConfig, kLaw, p));
    }
    SUBCASE("window must be positive") {
        p.window_radius = 0.0;
        CHECK_THROWS_AS(estimate_coop_count(t32, kConfig, kLaw, p), std::invalid_argument);
    }
    SUBCASE("bad strategy and bad config") {
        CHECK_THROWS_AS(estimate_rate(Strategy{DistanceK{0}}, kConfig, kLaw, p),
                        std::invalid_argument);
        NetworkConfig bad = kConfig;
        bad.p_s = -1.0;
        CHECK_THROWS_AS(estimate_rate(Strategy{DistanceK{1}}, bad, kLaw, p),
                        std::invalid_argument);
    }
}

TEST_CASE("estimates agree with the quadrature references") {
    const double t32 = dbm_to_watt(-32.0);

    SUBCASE("mean cooperative-set size") {
        Estimate e = estimate_coop_count(t32, kConfig, kLaw, plan_of(2500));
        CHECK(e.method == Method::monte_carlo);
        CHECK(e.n_trials == 2500);
        CHECK(e.half_width > 0.0);
        CHECK(std::abs(e.value - 1.5229) < 4.0 * e.half_width);
    }
    SUBCASE("threshold rate") {
        Estimate e = estimate_rate(Strategy{PowerThreshold{t32}}, kConfig, kLaw, plan_of(2000));
        CHECK(std::abs(e.value - 0.9412) < 4.0 * e.half_width);
    }
    SUBCASE("nearest-SBS rate") {
        McDiag diag;
        Estimate e = estimate_rate(Strategy{DistanceK{1}}, kConfig, kLaw, plan_of(2000), &diag);
        CHECK(std::abs(e.value - 0.3005) < 4.0 * e.half_width);
        CHECK(diag.truncation_events == 0);  // the window always holds one SBS
    }
    SUBCASE("users per SBS") {
        Estimate e = estimate_ue_per_sbs(t32, kConfig, kLaw, plan_of(20000));
        CHECK(std::abs(e.value - 12.6908) < 4.0 * e.half_width);
    }
    SUBCASE("energy efficiency") {
        Estimate e = estimate_energy_efficiency(dbm_to_watt(-26.0), kConfig, kLaw, plan_of(2000));
        CHECK(std::abs(e.value - 1.076) < 4.0 * e.half_width);
        CHECK(e.half_width > 0.0);
    }
}

TEST_CASE("confidence interval shrinks with more trials") {
    const double t32 = dbm_to_watt(-32.0);
    Estimate small = estimate_coop_count(t32, kConfig, kLaw, plan_of(400));
    Estimate large = estimate_coop_count(t32, kConfig, kLaw, plan_of(2500));
    CHECK(small.half_width > 1.5 * large.half_width);
}

TEST_CASE("an unreachable threshold yields exactly zero rate") {
    Estimate e = estimate_rate(Strategy{PowerThreshold{1e6}}, kConfig, kLaw, plan_of(200));
    CHECK(e.value == 0.0);
    CHECK(e.half_width == 0.0);
}

TEST_CASE("distance rule reports window truncation") {
    McPlan p = plan_of(200);
    p.window_radius = 300.0;  // ~36 SBSs on average, far fewer than k
    McDiag diag;
    Estimate e = estimate_rate(Strategy{DistanceK{50}}, kConfig, kLaw, p, &diag);
    CHECK(diag.truncation_events > 0);
    CHECK(e.value >= 0.0);
    CHECK(std::isfinite(e.value));
}

TEST_CASE("rate gain at the matched set size") {
    const double t32 = dbm_to_watt(-32.0);
    RateGain g = estimate_rate_gain(t32, kConfig, kLaw, plan_of(10000));
    // Mean set size 1.52 rounds to k = 2.
    CHECK(g.k_matched == 2);
    CHECK(g.rate_power.value > g.rate_distance.value);
    CHECK(g.gain == doctest::Approx((g.rate_power.value - g.rate_distance.value) /
                                    g.rate_distance.value));
    CHECK(g.gain > 0.0);
    CHECK(g.gain_half_width > 0.0);
    CHECK(std::abs(g.gain - 1.27) < 4.0 * g.gain_half_width);
}

TEST_CASE("rate gain refuses a threshold whose matched k is zero") {
    // Mean set size 0.22 at -22 dBm rounds down to zero.
    CHECK_THROWS_AS(estimate_rate_gain(dbm_to_watt(-22.0), kConfig, kLaw, plan_of(1000)),
                    std::domain_error);
}

TEST_CASE("truncation check wiring") {
    const double t32 = dbm_to_watt(-32.0);
    McPlan p = plan_of(500);
    p.window_radius = 500.0;
    TruncationCheck tc = truncation_check(Strategy{PowerThreshold{t32}}, kConfig, kLaw, p);
    CHECK(tc.delta == doctest::Approx(std::abs(tc.doubled.value - tc.base.value)));
    CHECK(tc.passed == (tc.delta <= tc.base.half_width));
    CHECK(tc.base.n_trials == 500);
    CHECK(tc.doubled.n_trials == 500);
}
