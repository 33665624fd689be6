#include "fsoris/hypergeometric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsoris {
namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

HypergeometricResult gauss_hypergeometric_series(const std::vector<double>& a,
                                                 const std::vector<double>& b,
                                                 double z, int max_terms) {
    const int p = static_cast<int>(a.size());
    const int q = static_cast<int>(b.size());

    int terminates_at = -1;  // polynomial when some a_i is in {0,-1,-2,...}
    for (double ai : a)
        if (is_nonpositive_integer(ai)) {
            const int t = static_cast<int>(-ai);
            if (terminates_at < 0 || t < terminates_at) terminates_at = t;
        }
    if (terminates_at < 0) {
        if (p > q + 1)
            throw std::runtime_error(
                "pFq: divergent for p > q+1 (non-terminating); use the contour "
                "path");
        if (p == q + 1 && std::abs(z) >= 1.0)
            throw std::runtime_error(
                "pFq: |z| >= 1 outside the p = q+1 convergence disc; use the "
                "contour path");
    }

    HypergeometricResult r;
    double term = 1.0;
    double sum = 1.0;
    double abs_sum = 1.0;
    int small_streak = 0;
    for (int t = 0; t < max_terms; ++t) {
        if (terminates_at >= 0 && t >= terminates_at) {
            r.value = sum;
            r.truncation_bound = 0.0;
            r.terms_used = t + 1;
            r.abs_sum = abs_sum;
            return r;
        }
        double ratio = z / (t + 1.0);
        for (double ai : a) ratio *= ai + t;
        for (double bi : b) {
            const double d = bi + t;
            if (d == 0.0)
                throw std::domain_error(
                    "pFq: lower parameter " + std::to_string(bi) +
                    " hits a non-positive integer at term " + std::to_string(t));
            ratio /= d;
        }
        term *= ratio;
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) <= 1e-17 * std::abs(sum) + 1e-300) {
            if (++small_streak >= 3) {
                r.value = sum;
                r.truncation_bound = std::abs(term);
                r.terms_used = t + 2;
                r.abs_sum = abs_sum;
                return r;
            }
        } else {
            small_streak = 0;
        }
    }
    throw std::runtime_error("pFq: no convergence within " +
                             std::to_string(max_terms) + " terms");
}

}  // namespace fsoris
