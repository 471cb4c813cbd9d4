#include <doctest.h>

#include "fractalcomp/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

using fractalcomp::rng::Stream;
using fractalcomp::rng::philox4x64;

namespace {

struct Moments {
    double mean;
    double var;
};

template <typename Draw>
Moments sample_moments(Draw&& draw, std::size_t n) {
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = draw();
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / static_cast<double>(n);
    double var = sumsq / static_cast<double>(n) - mean * mean;
    return {mean, var};
}

}  // namespace

TEST_CASE("philox4x64 known-answer vectors") {
    // Frozen outputs of the 10-round 4x64 bijection with the canonical
    // multipliers and Weyl constants.
    SUBCASE("zero key, zero counter") {
        auto out = philox4x64({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x16554d9eca36314cULL);
        CHECK(out[1] == 0xdb20fe9d672d0fdcULL);
        CHECK(out[2] == 0xd7e772cee186176bULL);
        CHECK(out[3] == 0x7e68b68aec7ba23bULL);
    }
    SUBCASE("small counter words") {
        auto out = philox4x64({1, 2, 3, 4}, {0xdeadbeefULL, 0xfaceb00cULL});
        CHECK(out[0] == 0xbc897d5b86ab760dULL);
        CHECK(out[1] == 0xce3d8ba0b25cdf60ULL);
        CHECK(out[2] == 0x6423c6a216052582ULL);
        CHECK(out[3] == 0xd4b42121e060fbe5ULL);
    }
    SUBCASE("all ones") {
        std::uint64_t f = ~0ULL;
        auto out = philox4x64({f, f, f, f}, {f, f});
        CHECK(out[0] == 0x87b092c3013fe90bULL);
        CHECK(out[1] == 0x438c3c67be8d0224ULL);
        CHECK(out[2] == 0x9cc7d7c69cd777b6ULL);
        CHECK(out[3] == 0xa09caebf594f0ba0ULL);
    }
    SUBCASE("mixed key and counter") {
        auto out = philox4x64({0x42, 0, 0x10, 0},
                              {0xa5a5a5a5a5a5a5a5ULL, 0x0123456789abcdefULL});
        CHECK(out[0] == 0xaddb4a45afdf708fULL);
        CHECK(out[1] == 0x4fd506222a516bbdULL);
        CHECK(out[2] == 0x9cdeca912deb27f7ULL);
        CHECK(out[3] == 0x5493305f7795c0f5ULL);
    }
}

TEST_CASE("stream output is the bijection applied to an incrementing counter") {
    Stream s(0, 0);
    auto b0 = philox4x64({0, 0, 0, 0}, {0, 0});
    auto b1 = philox4x64({1, 0, 0, 0}, {0, 0});
    for (int i = 0; i < 4; ++i) CHECK(s.next_u64() == b0[i]);
    for (int i = 0; i < 4; ++i) CHECK(s.next_u64() == b1[i]);
}

TEST_CASE("streams are pure functions of (seed, substream)") {
    Stream a(1234, 7), b(1234, 7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

    // Different substreams of the same seed diverge immediately.
    Stream c(1234, 8);
    Stream d(1235, 7);
    CHECK(Stream(1234, 7).next_u64() != c.next_u64());
    CHECK(Stream(1234, 7).next_u64() != d.next_u64());
}

TEST_CASE("substream tags separate domains from indices") {
    using namespace fractalcomp::rng::substream;
    CHECK(tag(rate_trial, 0) == (1ULL << 56));
    CHECK(tag(coop_trial, 5) == ((2ULL << 56) | 5));
    // Indices are masked into the low 56 bits so domains never collide.
    CHECK(tag(generic_trial, ~0ULL) == ((5ULL << 56) | 0x00ffffffffffffffULL));
    CHECK(tag(rate_trial, 3) != tag(laplace_trial, 3));
}

TEST_CASE("uniform01 stays in [0,1) and matches its moments") {
    Stream s(99, 1);
    const std::size_t n = 200000;
    double lo = 1.0, hi = 0.0;
    auto m = sample_moments(
        [&] {
            double u = s.uniform01();
            lo = std::min(lo, u);
            hi = std::max(hi, u);
            return u;
        },
        n);
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(m.mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(m.var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("exponential has unit mean and variance") {
    Stream s(99, 2);
    auto m = sample_moments([&] { return s.exponential(); }, 200000);
    CHECK(m.mean == doctest::Approx(1.0).epsilon(0.02));
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.04));
}

TEST_CASE("normal moments and symmetry") {
    Stream s(99, 3);
    double third = 0.0;
    const std::size_t n = 200000;
    auto m = sample_moments([&] { return s.normal(); }, n);
    Stream s2(99, 3);
    for (std::size_t i = 0; i < n; ++i) {
        double x = s2.normal();
        third += x * x * x;
    }
    CHECK(m.mean == doctest::Approx(0.0).epsilon(0.02));
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(m.var == doctest::Approx(1.0).epsilon(0.03));
    CHECK(std::abs(third / static_cast<double>(n)) < 0.05);
}

TEST_CASE("gamma moments for shape above and below one") {
    Stream s(99, 4);
    // shape 9, scale 0.5: mean 4.5, variance 2.25
    auto m1 = sample_moments([&] { return s.gamma(9.0, 0.5); }, 200000);
    CHECK(m1.mean == doctest::Approx(4.5).epsilon(0.01));
    CHECK(m1.var == doctest::Approx(2.25).epsilon(0.04));
    // shape 0.5 exercises the shape-boost branch: mean 1, variance 2
    auto m2 = sample_moments([&] { return s.gamma(0.5, 2.0); }, 200000);
    CHECK(m2.mean == doctest::Approx(1.0).epsilon(0.03));
    CHECK(m2.var == doctest::Approx(2.0).epsilon(0.06));
    CHECK_THROWS_AS(s.gamma(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.gamma(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("poisson matches mean and variance across the chunking cutoff") {
    Stream s(99, 5);
    auto small = sample_moments(
        [&] { return static_cast<double>(s.poisson(3.5)); }, 100000);
    CHECK(small.mean == doctest::Approx(3.5).epsilon(0.02));
    CHECK(small.var == doctest::Approx(3.5).epsilon(0.05));
    // Large means go through the additive chunk path.
    auto big = sample_moments(
        [&] { return static_cast<double>(s.poisson(1600.0)); }, 20000);
    CHECK(big.mean == doctest::Approx(1600.0).epsilon(0.002));
    CHECK(big.var == doctest::Approx(1600.0).epsilon(0.05));
    CHECK(s.poisson(0.0) == 0);
    CHECK_THROWS_AS(s.poisson(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.poisson(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}
