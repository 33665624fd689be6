#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fsoris/hypergeometric.hpp"

using namespace fsoris;

TEST_CASE("pFq anchors against elementary closed forms") {
    // 0F0(z) = e^z
    HypergeometricResult e = gauss_hypergeometric_series({}, {}, 0.7);
    CHECK(e.value == doctest::Approx(2.013752707470477).epsilon(1e-14));

    // 1F0(a; z) = (1-z)^{-a}
    HypergeometricResult b = gauss_hypergeometric_series({2.0}, {}, 0.25);
    CHECK(b.value == doctest::Approx(1.777777777777778).epsilon(1e-14));

    // 2F1(1, 1; 2; z) = -log(1-z)/z
    HypergeometricResult g =
        gauss_hypergeometric_series({1.0, 1.0}, {2.0}, 0.5);
    CHECK(g.value == doctest::Approx(1.386294361119891).epsilon(1e-13));

    // 1F1 at negative argument exercises alternating cancellation
    HypergeometricResult k =
        gauss_hypergeometric_series({2.3}, {1.1}, -4.0);
    CHECK(k.value == doctest::Approx(-0.037168773834974).epsilon(1e-11));
}

TEST_CASE("terminating series are polynomials") {
    // a = -3 terminates after four terms regardless of |z|
    HypergeometricResult r =
        gauss_hypergeometric_series({-3.0, 2.0}, {1.5}, 7.0);
    CHECK(r.terms_used <= 4);
    // direct polynomial: sum_{t=0}^{3} (-3)_t (2)_t / (1.5)_t z^t / t!
    double expect = 1.0 + (-3.0 * 2.0 / 1.5) * 7.0 +
                    (-3.0 * -2.0) * (2.0 * 3.0) / (1.5 * 2.5) * 49.0 / 2.0 +
                    (-3.0 * -2.0 * -1.0) * (2.0 * 3.0 * 4.0) /
                        (1.5 * 2.5 * 3.5) * 343.0 / 6.0;
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("truncation bookkeeping") {
    HypergeometricResult r = gauss_hypergeometric_series({0.5}, {1.7}, 2.0);
    CHECK(r.terms_used > 3);
    CHECK(r.abs_sum >= std::abs(r.value));
    CHECK(r.truncation_bound < 1e-12 * r.abs_sum);
}

TEST_CASE("divergent regimes are rejected") {
    // p > q + 1 diverges for z != 0
    CHECK_THROWS_AS(
        gauss_hypergeometric_series({1.0, 1.0, 1.0}, {2.0}, 0.5),
        std::runtime_error);
    // 2F1 outside the unit disc
    CHECK_THROWS_AS(gauss_hypergeometric_series({1.0, 2.0}, {3.0}, 1.0),
                    std::runtime_error);
    CHECK_THROWS_AS(gauss_hypergeometric_series({1.0, 2.0}, {3.0}, -1.2),
                    std::runtime_error);
    // lower parameter hits a nonpositive integer before termination
    CHECK_THROWS_AS(gauss_hypergeometric_series({0.5}, {-2.0}, 0.3),
                    std::domain_error);
}
