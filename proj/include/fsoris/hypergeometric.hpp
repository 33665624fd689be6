#pragma once

#include <vector>

namespace fsoris {

struct HypergeometricResult {
    double value = 0.0;
    double truncation_bound = 0.0;  // |first omitted term| estimate
    int terms_used = 0;
    double abs_sum = 0.0;  // sum of |term|, cancellation diagnostic
};

// Generalized hypergeometric series pFq(a; b; z) by forward term recurrence.
// Terminates early when some a_i is a non-positive integer (polynomial case).
// Throws std::domain_error when a lower parameter hits a non-positive integer
// before termination, and EvalError-style std::runtime_error when the series
// diverges for the given z (p > q+1 non-terminating, or p = q+1 with |z| >= 1).
HypergeometricResult gauss_hypergeometric_series(const std::vector<double>& a,
                                                 const std::vector<double>& b,
                                                 double z, int max_terms = 20000);

}  // namespace fsoris
