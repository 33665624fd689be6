#include "fsoris/log_gamma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsoris {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

// Stirling coefficients B_{2n} / (2n(2n-1)): series in 1/z^2 applied at
// |z| >= 10 with Re z >= 0, where the truncation error is below 1e-15.
constexpr double kStirling[8] = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0};

template <typename T>
T stirling_series(T z) {
    const T zinv2 = 1.0 / (z * z);
    T sum = kStirling[7] * zinv2;
    for (int i = 6; i >= 0; --i) sum = (sum + kStirling[i]) * (i ? zinv2 : 1.0);
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + sum / z;
}

[[noreturn]] void pole_error(double at) {
    throw std::domain_error("log_gamma: pole at non-positive integer " +
                            std::to_string(static_cast<long long>(at)));
}

}  // namespace

double sin_pi(double x) {
    double r = std::remainder(x, 2.0);  // r in [-1, 1], x = 2k + r exactly
    // fold onto [-1/2, 1/2] where sin(pi r) is well conditioned
    if (r > 0.5) return std::sin(kPi * (1.0 - r));
    if (r < -0.5) return -std::sin(kPi * (1.0 + r));
    return std::sin(kPi * r);
}

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        if (x <= 0.0 && x == std::floor(x)) pole_error(x);
        if (x < 0.0) {
            // reflection keeps the principal branch on the real axis:
            // log Gamma(x) = log(pi/|sin(pi x)|) - log Gamma(1-x) + i*pi*k,
            // with the imaginary part fixed by sign(Gamma(x)).
            SignedLogGamma s = signed_log_gamma(x);
            return {s.log_abs, s.sign > 0 ? 0.0 : kPi};
        }
    }
    // shift until the Stirling region; the recurrence
    // log Gamma(z) = log Gamma(z+n) - sum log(z+j) preserves the principal
    // branch off the cut (-inf, 0]
    std::complex<double> shift = 0.0;
    while (z.real() < 10.0 && !(z.real() >= 0.0 && std::abs(z) >= 10.0)) {
        if (z == 0.0) pole_error(0.0);
        shift += std::log(z);
        z += 1.0;
    }
    return stirling_series(z) - shift;
}

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma(real): requires x > 0, got " +
                                std::to_string(x));
    double shift = 0.0;
    while (x < 10.0) {
        shift += std::log(x);
        x += 1.0;
    }
    return stirling_series(x) - shift;
}

SignedLogGamma signed_log_gamma(double x) {
    if (x > 0.0) return {log_gamma(x), 1};
    if (x == std::floor(x)) pole_error(x);
    // Gamma(x) = pi / (sin(pi x) * Gamma(1-x)), and Gamma(1-x) > 0 here
    const double s = sin_pi(x);
    const double la = std::log(kPi) - std::log(std::abs(s)) - log_gamma(1.0 - x);
    return {la, s > 0.0 ? 1 : -1};
}

}  // namespace fsoris
