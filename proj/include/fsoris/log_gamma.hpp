#pragma once

#include <complex>

namespace fsoris {

// Principal-branch log Gamma on C minus the poles {0, -1, -2, ...}.
// Throws std::domain_error naming the pole when z hits one.
std::complex<double> log_gamma(std::complex<double> z);

// Real positive arguments only (throws std::domain_error otherwise).
double log_gamma(double x);

// log|Gamma(x)| with the sign of Gamma(x), valid for any non-pole real x.
// Negative non-integer arguments arise from the lambda - k continuation in
// the channel moments, so sign tracking is mandatory.
struct SignedLogGamma {
    double log_abs;
    int sign;  // +1 or -1
};
SignedLogGamma signed_log_gamma(double x);

// sin(pi*x) with argument reduction against the integer lattice; keeps the
// reflection formula accurate at large |x| where pi*x itself is inexact.
double sin_pi(double x);

}  // namespace fsoris
