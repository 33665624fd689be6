#pragma once

namespace fsoris {

// Upper incomplete gamma Gamma(p, x) = int_x^inf t^{p-1} e^{-t} dt.
// Series branch below x = p+1, Lentz continued fraction above; relative
// error target 1e-12. Requires p > 0, x >= 0.
double upper_incomplete_gamma(double p, double x);

// Regularized forms P(p,x) = gamma(p,x)/Gamma(p) and Q = 1 - P.
double regularized_lower_gamma(double p, double x);
double regularized_upper_gamma(double p, double x);

}  // namespace fsoris
