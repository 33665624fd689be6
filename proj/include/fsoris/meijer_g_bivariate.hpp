#pragma once

#include <optional>
#include <string>

#include "fsoris/meijer_g.hpp"

namespace fsoris {

// Double Mellin-Barnes transform
//   (1/2pi i)^2 II K0(s+t) K1(s) K2(t) z1^s z2^t dt ds
// where each K is the Mellin kernel of its block (the blocks' z fields are
// ignored; the arguments live in z1, z2). The outer block couples the two
// integration variables; an empty outer block factorizes the value into the
// product of the two univariate transforms.
struct BivariateMeijerSpec {
    MeijerSpec outer;
    MeijerSpec inner1;
    MeijerSpec inner2;
    double z1 = 0.0;
    double z2 = 0.0;
};

// Evaluation can legitimately fail (infeasible contours, too many coupled
// pole crossings, quadrature exhaustion); callers fall back to their
// definitional quadrature path and surface the diagnostic.
struct BivariateResult {
    std::optional<double> value;
    std::string diagnostic;  // non-empty exactly when value is absent

    bool ok() const { return value.has_value(); }
};

// Straight double-contour quadrature on automatically placed vertical lines,
// plus residue-line corrections for outer-block poles the straight lines
// cannot avoid (the proper contour for u = s+t must separate the outer
// families; windows of the inner blocks often force a few crossings). At
// most three crossed rungs per outer pole ladder are corrected; beyond that
// the instance is reported unsupported. Target relative error 1e-4.
BivariateResult meijer_g_bivariate(const BivariateMeijerSpec& spec);

}  // namespace fsoris
