#pragma once

// Counter-based random streams for reproducible parallel Monte Carlo.
//
// The generator is Philox4x64-10. Every (seed, substream) pair names an
// independent stream whose output is a pure function of (seed, substream,
// draw index), so trial i of a simulation can be handed substream i and
// produce identical results no matter which worker executes it or in what
// order trials complete.

#include <array>
#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace fractalcomp::rng {

// One Philox 4x64 round-function application over a 256-bit counter with a
// 128-bit key, 10 rounds. Matches the reference algorithm (and numpy's
// implementation, whose stream equals this bijection with the counter's
// first word pre-incremented).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t substream)
        : key_{seed, substream}, counter_{0, 0, 0, 0}, pos_(4) {}

    std::uint64_t next_u64() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unit-mean exponential.
    double exponential() {
        return -std::log1p(-uniform01());
    }

    // Standard normal (Box-Muller; the spare is cached per stream).
    double normal();

    // Gamma with given shape and scale (Marsaglia-Tsang squeeze method).
    double gamma(double shape, double scale);

    // Exact Poisson draw by product inversion; large means are split into
    // chunks of mean <= 16 and summed (Poisson additivity keeps it exact).
    std::uint64_t poisson(double mean);

private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int pos_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Substream identifiers: high byte separates independent uses of the same
// seed so that, e.g., a rate trial and a Laplace-oracle trial with the same
// index never share draws.
namespace substream {
constexpr std::uint64_t tag(std::uint64_t domain, std::uint64_t index) {
    return (domain << 56) | (index & 0x00ff'ffff'ffff'ffffULL);
}
constexpr std::uint64_t rate_trial       = 1;
constexpr std::uint64_t coop_trial       = 2;
constexpr std::uint64_t ue_draw          = 3;
constexpr std::uint64_t laplace_trial    = 4;
constexpr std::uint64_t generic_trial    = 5;
}  // namespace substream

}  // namespace fractalcomp::rng
