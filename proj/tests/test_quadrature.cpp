#include <doctest.h>

#include "fractalcomp/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace fractalcomp;

TEST_CASE("gk15 panel exactness") {
    SUBCASE("low-degree polynomials are exact with near-zero error estimate") {
        auto r = quad::gk15([](double x) { return 3.0 * x * x - x + 2.0; }, -1.0, 3.0);
        // antiderivative x^3 - x^2/2 + 2x on [-1, 3]
        CHECK(r.value == doctest::Approx(32.0).epsilon(1e-14));
        CHECK(r.error < 1e-12);
        CHECK(r.evals == 15);
    }
    SUBCASE("degree 13 is exact for both embedded rules") {
        auto r = quad::gk15([](double x) { return std::pow(x, 13.0); }, 0.0, 1.0);
        CHECK(r.value == doctest::Approx(1.0 / 14.0).epsilon(1e-13));
        CHECK(r.error < 1e-10);
    }
    SUBCASE("degree 20 is exact for Kronrod but not Gauss") {
        auto r = quad::gk15([](double x) { return std::pow(x, 20.0); }, 0.0, 1.0);
        CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-12));
        CHECK(r.error > 1e-9);  // embedded difference sees the gap
    }
}

TEST_CASE("adaptive integration") {
    SUBCASE("smooth integrand") {
        auto r = quad::adaptive([](double x) { return std::sin(x); }, 0.0,
                                std::numbers::pi, 1e-12, 1e-15);
        CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r.error <= std::max(1e-15, 1e-12 * 2.0));
    }
    SUBCASE("integrable endpoint singularity") {
        auto r = quad::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                1.0, 1e-9, 1e-12);
        CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("narrow peak is found and resolved") {
        const double s = 1e-2;
        auto r = quad::adaptive(
            [&](double x) {
                double z = (x - 0.7) / s;
                return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
            },
            0.0, 1.0, 1e-10, 1e-13);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("polynomial converges on the first panel") {
        auto r = quad::adaptive([](double x) { return x * x * x; }, 0.0, 2.0,
                                1e-10, 1e-12);
        CHECK(r.value == doctest::Approx(4.0).epsilon(1e-13));
        CHECK(r.evals == 15);
    }
    SUBCASE("budget exhaustion raises with the achieved error") {
        bool threw = false;
        try {
            quad::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                           1e-14, 1e-16, 60);
        } catch (const quad::ToleranceError& e) {
            threw = true;
            CHECK(e.achieved > 0.0);
        }
        CHECK(threw);
    }
}

TEST_CASE("gauss-legendre nodes") {
    SUBCASE("order n integrates degree 2n-1 exactly") {
        const auto& x = quad::gl_nodes(8);
        const auto& w = quad::gl_weights(8);
        REQUIRE(x.size() == 8);
        REQUIRE(w.size() == 8);
        double m14 = 0.0, m15 = 0.0, total = 0.0;
        for (int i = 0; i < 8; ++i) {
            m14 += w[i] * std::pow(x[i], 14.0);
            m15 += w[i] * std::pow(x[i], 15.0);
            total += w[i];
        }
        CHECK(m14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
        CHECK(std::abs(m15) < 1e-14);  // odd moment, symmetric rule
        CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("nodes are symmetric and inside (-1, 1)") {
        const auto& x = quad::gl_nodes(16);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::abs(x[i]) < 1.0);
            CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]).epsilon(1e-14));
        }
    }
    SUBCASE("cache returns the same storage") {
        CHECK(&quad::gl_nodes(12) == &quad::gl_nodes(12));
        CHECK(&quad::gl_weights(12) == &quad::gl_weights(12));
    }
    SUBCASE("gl_on maps to an arbitrary interval") {
        std::vector<double> nodes, weights;
        quad::gl_on(2.0, 5.0, 4, nodes, weights);
        REQUIRE(nodes.size() == 4);
        double integral = 0.0, wsum = 0.0;
        for (int i = 0; i < 4; ++i) {
            integral += weights[i] * nodes[i] * nodes[i];
            wsum += weights[i];
            CHECK(nodes[i] > 2.0);
            CHECK(nodes[i] < 5.0);
        }
        CHECK(integral == doctest::Approx(39.0).epsilon(1e-13));
        CHECK(wsum == doctest::Approx(3.0).epsilon(1e-14));
    }
}
