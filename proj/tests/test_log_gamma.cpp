#include <cmath>
#include <complex>

#include "doctest.h"
#include "fsoris/log_gamma.hpp"

using namespace fsoris;
using cplx = std::complex<double>;

namespace {
void check_cplx(cplx got, double re, double im, double tol = 1e-13) {
    CHECK(got.real() == doctest::Approx(re).epsilon(tol));
    CHECK(got.imag() == doctest::Approx(im).epsilon(tol));
}
}  // namespace

TEST_CASE("real log gamma reference values") {
    CHECK(log_gamma(1.0) == 0.0);
    CHECK(log_gamma(2.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(log_gamma(0.5) ==
          doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-15));
    CHECK(log_gamma(0.001) ==
          doctest::Approx(6.90717888538385368).epsilon(1e-14));
    CHECK(log_gamma(10.3) ==
          doctest::Approx(13.482036786138357).epsilon(1e-14));
    CHECK(log_gamma(170.0) ==
          doctest::Approx(701.437263808737085).epsilon(1e-14));
}

TEST_CASE("recurrence consistency across the shift threshold") {
    // Gamma(x+1) = x Gamma(x) ties small arguments (series/shift regime) to
    // large ones (Stirling regime)
    for (double x : {0.3, 1.7, 4.9, 9.3, 12.6}) {
        CHECK(log_gamma(x + 1.0) ==
              doctest::Approx(log_gamma(x) + std::log(x)).epsilon(1e-14));
    }
}

TEST_CASE("zeta series oracle near 1") {
    // log Gamma(1+x) = -euler_gamma x + sum_{k>=2} (-1)^k zeta(k) x^k / k;
    // truncating at k = 10 leaves < 1e-15 at x = 0.05
    const double zeta[] = {1.6449340668482264365, 1.2020569031595942854,
                           1.0823232337111381915, 1.0369277551433699263,
                           1.0173430619844491397, 1.0083492773819228268,
                           1.0040773561979443394, 1.0020083928260822144,
                           1.0009945751278180853};
    const double x = 0.05;
    double series = -0.577215664901532860607 * x;
    double xk = x;
    double sign = 1.0;
    for (int k = 2; k <= 10; ++k) {
        xk *= x;
        series += sign * zeta[k - 2] * xk / k;
        sign = -sign;
    }
    CHECK(series == doctest::Approx(-0.02685307250226016808).epsilon(1e-13));
    CHECK(log_gamma(1.05) == doctest::Approx(series).epsilon(1e-13));
}

TEST_CASE("complex log gamma on the principal branch") {
    check_cplx(log_gamma(cplx(0.5, 10.0)), -14.7890247347442935,
               13.0300200349110899);
    check_cplx(log_gamma(cplx(-3.2, 0.7)), -2.34060789396326246,
               -10.713635915626587);
    check_cplx(log_gamma(cplx(2.0, -35.0)), -48.7255028156239237,
               -91.7624319672991713);
    check_cplx(log_gamma(cplx(0.001, 0.001)), 6.56060447383755264,
               -0.785973734929653435);
}

TEST_CASE("complex conjugate symmetry off the real axis") {
    for (double re : {-2.3, 0.4, 7.0}) {
        for (double im : {0.1, 3.0, 40.0}) {
            const cplx v = log_gamma(cplx(re, im));
            const cplx c = log_gamma(cplx(re, -im));
            CHECK(c.real() == doctest::Approx(v.real()).epsilon(1e-14));
            CHECK(c.imag() == doctest::Approx(-v.imag()).epsilon(1e-14));
        }
    }
}

TEST_CASE("signed log gamma covers the negative axis") {
    SignedLogGamma r1 = signed_log_gamma(-0.5);
    CHECK(r1.sign == -1);
    CHECK(r1.log_abs == doctest::Approx(1.2655121234846453965).epsilon(1e-14));

    SignedLogGamma r2 = signed_log_gamma(-1.5);
    CHECK(r2.sign == 1);
    CHECK(r2.log_abs == doctest::Approx(0.86004701537648101451).epsilon(1e-14));

    SignedLogGamma r3 = signed_log_gamma(-2.25);
    CHECK(r3.sign == -1);
    CHECK(r3.log_abs == doctest::Approx(0.55550154502064747059).epsilon(1e-14));

    SignedLogGamma r4 = signed_log_gamma(-6.7);
    CHECK(r4.sign == -1);
    CHECK(r4.log_abs == doctest::Approx(-6.569876114919262392).epsilon(1e-13));

    SignedLogGamma pos = signed_log_gamma(3.25);
    CHECK(pos.sign == 1);
    CHECK(pos.log_abs == doctest::Approx(log_gamma(3.25)).epsilon(1e-15));
}

TEST_CASE("poles raise domain errors") {
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);
    CHECK_THROWS_AS(signed_log_gamma(-2.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(cplx(-1.0, 0.0)), std::domain_error);
}

TEST_CASE("sin_pi folds large arguments exactly") {
    CHECK(sin_pi(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sin_pi(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(sin_pi(100.25) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(sin_pi(-0.5) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(sin_pi(1e8 + 0.5) == doctest::Approx(1.0).epsilon(1e-15));
}
