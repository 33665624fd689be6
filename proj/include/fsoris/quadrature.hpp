#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace fsoris {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval. Converged when the
// summed per-interval error estimate drops below max(abs_tol, rel_tol*|I|).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-10,
                           double rel_tol = 1e-8, int max_intervals = 4000);

// Same rule with interior split points (density modes, kinks). Points outside
// (a, b) are ignored.
QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& interior,
                                 double abs_tol = 1e-10,
                                 double rel_tol = 1e-8,
                                 int max_intervals = 4000);

// [a, inf) via the rational map x = a + t/(1-t), t in [0,1). The integrand
// must decay fast enough that f(x)/(1-t)^2 stays integrable, true for every
// density handled here (exponential or power tail with exponent < -1).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f,
                                       double a, double abs_tol = 1e-10,
                                       double rel_tol = 1e-8,
                                       int max_intervals = 4000);

// Single non-adaptive K15 application to a complex integrand on [a, b];
// error_estimate is |K15 - G7|. Building block for contour panel walks.
struct ComplexPanel {
    std::complex<double> value;
    double error_estimate = 0.0;
};
ComplexPanel kronrod_panel(
    const std::function<std::complex<double>(double)>& f, double a, double b);

// Adaptive complex-valued integral on [a, b] (bisection on the K15-G7 gap).
struct ComplexQuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};
ComplexQuadratureResult integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol = 1e-12, double rel_tol = 1e-10, int max_intervals = 4000);

}  // namespace fsoris
