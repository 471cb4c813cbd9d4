#include "fractalcomp/rng.hpp"

namespace fractalcomp::rng {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b,
                    std::uint64_t& hi, std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> c,
                                        std::array<std::uint64_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

void Stream::refill() {
    block_ = philox4x64(counter_, key_);
    pos_ = 0;
    // 256-bit counter increment; wrap-around is unreachable in practice.
    if (++counter_[0] == 0 && ++counter_[1] == 0 && ++counter_[2] == 0)
        ++counter_[3];
}

double Stream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1): 1 - uniform01() avoids log(0).
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

double Stream::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // Boost the shape by one and correct with a power of a uniform.
        double u = 1.0 - uniform01();  // (0,1]
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = 1.0 - uniform01();  // (0,1]
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

std::uint64_t Stream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be finite and nonnegative");
    std::uint64_t total = 0;
    while (mean > 16.0) {
        double chunk = 16.0;
        double limit = std::exp(-chunk);
        std::uint64_t n = 0;
        double prod = 1.0;
        for (;;) {
            prod *= 1.0 - uniform01();
            if (prod < limit) break;
            ++n;
        }
        total += n;
        mean -= chunk;
    }
    if (mean > 0.0) {
        double limit = std::exp(-mean);
        double prod = 1.0;
        for (;;) {
            prod *= 1.0 - uniform01();
            if (prod < limit) break;
            ++total;
        }
    }
    return total;
}

}  // namespace fractalcomp::rng
