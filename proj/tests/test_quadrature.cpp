#include <cmath>
#include <complex>

#include "doctest.h"
#include "fsoris/quadrature.hpp"

using namespace fsoris;

TEST_CASE("single Kronrod panel is exact for low-degree polynomials") {
    // K15 integrates degree <= 22 exactly; x^20 over [0,1] is well inside
    auto f = [](double x) { return std::pow(x, 20.0); };
    QuadratureResult r = integrate(f, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
}

TEST_CASE("adaptive bisection handles integrable endpoint behaviour") {
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    QuadratureResult r = integrate(f, 1e-12, 1.0, 1e-12, 1e-10);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0 * (1.0 - 1e-6)).epsilon(1e-9));
}

TEST_CASE("known definite integrals") {
    QuadratureResult r1 = integrate([](double x) { return std::exp(-x * x); },
                                    -8.0, 8.0, 1e-13, 1e-12);
    CHECK(r1.converged);
    CHECK(r1.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

    QuadratureResult r2 = integrate(
        [](double x) { return std::sin(x) / x; }, 1e-30, 50.0, 1e-12, 1e-11);
    CHECK(r2.converged);
    // Si(50)
    CHECK(r2.value == doctest::Approx(1.5516170724859358948).epsilon(1e-10));
}

TEST_CASE("interior split point improves sharply peaked integrands") {
    auto f = [](double x) { return std::exp(-std::abs(x - 0.3) * 2000.0); };
    QuadratureResult r = integrate_split(f, 0.0, 1.0, {0.3}, 1e-13, 1e-11);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 1000.0).epsilon(1e-8));
}

TEST_CASE("semi-infinite transform reproduces gamma-type tails") {
    QuadratureResult r = integrate_to_infinity(
        [](double x) { return std::exp(-x) * x * x * x; }, 0.0, 1e-12, 1e-11);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(6.0).epsilon(1e-10));

    QuadratureResult shifted = integrate_to_infinity(
        [](double x) { return std::exp(-(x - 2.0)); }, 2.0, 1e-12, 1e-11);
    CHECK(shifted.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("complex quadrature integrates oscillatory lines") {
    // int_{-T}^{T} e^{it} dt = 2 sin(T)
    auto f = [](double t) {
        return std::exp(std::complex<double>(0.0, t));
    };
    ComplexQuadratureResult r = integrate_complex(f, -10.0, 10.0, 1e-13, 1e-12);
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(2.0 * std::sin(10.0)).epsilon(1e-11));
    CHECK(std::abs(r.value.imag()) < 1e-12);
}
