#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace fsoris {

// G^{m,n}_{p,q}(z | a; b) in the convention
//   G = (1/2pi i) int K(s) z^s ds,
//   K(s) = prod_{j<=m} Gamma(b_j - s) * prod_{k<=n} Gamma(1 - a_k + s)
//        / [prod_{j>m} Gamma(1 - b_j + s) * prod_{k>n} Gamma(a_k - s)],
// so the residue series runs over the right-family poles s = b_j + t.
struct MeijerSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;  // size p, first n entries are numerator-type
    std::vector<double> b;  // size q, first m entries are numerator-type
    double z = 0.0;

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }

    // Structural and separation invariants. The two pole families collide
    // exactly when a_k - b_j is a positive integer for some k <= n, j <= m
    // (then some right pole b_j + t equals some left pole a_k - 1 - t').
    // Throws std::invalid_argument.
    void validate() const;
};

// Right-family poles grouped by lattice coincidence: indices i, j < m fall in
// one group when b_i - b_j is within eps of an integer (their pole ladders
// overlap up to eps). separation_gap is the smallest distance-to-integer
// between members of different groups (infinity when fewer than two groups).
struct PoleClassification {
    std::vector<std::vector<int>> groups;
    double separation_gap = 0.0;
    bool degenerate = false;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PoleClassification classify_poles(const MeijerSpec& spec, double eps = 1e-4);

// G^{m,n}_{p,q}(z | a; b) = G^{n,m}_{q,p}(1/z | 1-b; 1-a); used to bring
// p > q (or p = q with z > 1) into the evaluator core's regime.
MeijerSpec invert_argument(const MeijerSpec& spec);

// Deterministic symmetric split of coincident right poles: each group of g
// lattice-colliding b's gets offsets (i - (g-1)/2) * 2 * shift in sorted
// order. Linear-order errors cancel by symmetry; callers verify against the
// contour path where available. The default shift keeps the split members
// 2*shift > eps apart so the result reclassifies as non-degenerate, while
// the O(shift^2) symmetric bias stays below 1e-7 relative.
MeijerSpec epsilon_split(const MeijerSpec& spec, double eps = 1e-4,
                         double shift = 6e-5);

// Auto-routed evaluation: argument inversion for p > q or p = q, z > 1;
// contour for coincident poles and for the p = q boundary band z in (0.9, 1];
// Slater residue series otherwise, rerouted to the contour when the series
// cancellation would spoil the 1e-8 target. Throws EvalError when no path
// applies.
double meijer_g(const MeijerSpec& spec);

// Residue-series path. Requires pairwise non-coincident right poles and, for
// p = q, z < 1. cancellation (optional out) is sum|terms| / |result|.
double meijer_g_slater(const MeijerSpec& spec, double* cancellation = nullptr);

// Mellin-Barnes path on an automatically placed vertical line. Requires a
// non-empty separating window and positive exponential decay rate
// c = m + n - (p+q)/2.
double meijer_g_contour(const MeijerSpec& spec);

// Line integral (1/2pi) int K(sigma+it) z^{sigma+it} dt on a caller-chosen
// contour. No separation validation: callers that regularize crossed poles
// (the secrecy-capacity closed form) manage their own bookkeeping. The
// imaginary part is returned for the caller's realness check.
std::complex<double> mellin_barnes_line(const MeijerSpec& spec, double sigma);

// Building blocks for composed-contour callers (the bivariate evaluator):
// log of the spec's Mellin kernel K at a complex point (spec.z ignored), and
// log|K(sigma)| on the real line with +inf at numerator-gamma poles and -inf
// at denominator zeros.
std::complex<double> log_mellin_kernel(const MeijerSpec& spec,
                                       std::complex<double> s);
double log_mellin_kernel_magnitude(const MeijerSpec& spec, double sigma);

}  // namespace fsoris
