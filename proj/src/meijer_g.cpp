#include "fsoris/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "fsoris/log_gamma.hpp"
#include "fsoris/quadrature.hpp"

namespace fsoris {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.28318530717958647692;

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

void structural_checks(const MeijerSpec& s) {
    if (s.m < 0 || s.n < 0 || s.m > s.q() || s.n > s.p())
        throw std::invalid_argument("MeijerSpec: need 0 <= m <= q, 0 <= n <= p");
    if (!(s.z > 0.0) || !std::isfinite(s.z))
        throw std::invalid_argument("MeijerSpec: argument must be positive");
    for (double v : s.a)
        if (!std::isfinite(v))
            throw std::invalid_argument("MeijerSpec: non-finite a parameter");
    for (double v : s.b)
        if (!std::isfinite(v))
            throw std::invalid_argument("MeijerSpec: non-finite b parameter");
}

std::complex<double> log_kernel(const MeijerSpec& s, std::complex<double> sv) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < s.m; ++j) acc += log_gamma(s.b[j] - sv);
    for (int k = 0; k < s.n; ++k) acc += log_gamma(1.0 - s.a[k] + sv);
    for (int j = s.m; j < s.q(); ++j) acc -= log_gamma(1.0 - s.b[j] + sv);
    for (int k = s.n; k < s.p(); ++k) acc -= log_gamma(s.a[k] - sv);
    return acc;
}

// log |K(sigma)| on the real line; +inf when a gamma factor sits on a pole
// (denominator poles give -inf, a legitimate zero of K, kept as is).
double log_kernel_mag(const MeijerSpec& s, double sigma) {
    double acc = 0.0;
    auto term = [](double x) -> double {
        if (x <= 0.0 && x == std::floor(x)) return kInf;
        return signed_log_gamma(x).log_abs;
    };
    for (int j = 0; j < s.m; ++j) acc += term(s.b[j] - sigma);
    for (int k = 0; k < s.n; ++k) acc += term(1.0 - s.a[k] + sigma);
    for (int j = s.m; j < s.q(); ++j) acc -= term(1.0 - s.b[j] + sigma);
    for (int k = s.n; k < s.p(); ++k) acc -= term(s.a[k] - sigma);
    return acc;
}

struct Window {
    double lo;  // sup of left-family poles (a_k - 1), -inf when n = 0
    double hi;  // inf of right-family poles (b_j), +inf when m = 0
};

Window separating_window(const MeijerSpec& s) {
    Window w{-kInf, kInf};
    for (int k = 0; k < s.n; ++k) w.lo = std::max(w.lo, s.a[k] - 1.0);
    for (int j = 0; j < s.m; ++j) w.hi = std::min(w.hi, s.b[j]);
    return w;
}

double decay_rate(const MeijerSpec& s) {
    return s.m + s.n - 0.5 * (s.p() + s.q());
}

// Minimize phi(sigma) = log|K(sigma)| + sigma*ln z inside the open window.
// phi blows up at both pole-family edges, so golden-section search on a
// bracket pulled slightly inside is enough; unbounded sides are expanded
// geometrically until phi turns upward.
double place_contour(const MeijerSpec& s, const Window& w) {
    const double lnz = std::log(s.z);
    auto phi = [&](double sig) {
        const double v = log_kernel_mag(s, sig) + sig * lnz;
        return std::isfinite(v) ? v : kInf;
    };
    double lo = w.lo, hi = w.hi;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
        lo = -8.0;
        hi = 8.0;
    } else if (!std::isfinite(lo)) {
        double step = 1.0;
        lo = hi - 1.0;
        while (step < 1e6 && phi(lo - step) < phi(lo)) {
            lo -= step;
            step *= 2.0;
        }
        lo -= step;
    } else if (!std::isfinite(hi)) {
        double step = 1.0;
        hi = lo + 1.0;
        while (step < 1e6 && phi(hi + step) < phi(hi)) {
            hi += step;
            step *= 2.0;
        }
        hi += step;
    }
    // shrink off the exact edges where phi = +inf
    const double width = hi - lo;
    double x0 = lo + 1e-3 * width;
    double x1 = hi - 1e-3 * width;
    const double gr = 0.61803398874989485;
    double m0 = x1 - gr * (x1 - x0);
    double m1 = x0 + gr * (x1 - x0);
    double f0 = phi(m0), f1 = phi(m1);
    for (int it = 0; it < 160 && (x1 - x0) > 1e-11 * std::max(1.0, width);
         ++it) {
        if (f0 <= f1) {
            x1 = m1;
            m1 = m0;
            f1 = f0;
            m0 = x1 - gr * (x1 - x0);
            f0 = phi(m0);
        } else {
            x0 = m0;
            m0 = m1;
            f0 = f1;
            m1 = x0 + gr * (x1 - x0);
            f1 = phi(m1);
        }
    }
    return 0.5 * (x0 + x1);
}

std::complex<double> line_integral(const MeijerSpec& s, double sigma) {
    const double lnz = std::log(s.z);
    double scale = log_kernel_mag(s, sigma) + sigma * lnz;
    if (!std::isfinite(scale)) scale = 0.0;

    auto log_f = [&](double t) {
        const std::complex<double> sv(sigma, t);
        return log_kernel(s, sv) + sv * lnz - scale;
    };
    // truncate where the magnitude falls 1e-16 below the running peak
    double peak = 0.0;
    double tmax = 1.0;
    const double floor_log = std::log(1e-16);
    for (int it = 0; it < 200; ++it) {
        const double g = log_f(tmax).real();
        peak = std::max(peak, g);
        if (g < peak + floor_log) break;
        tmax *= 1.5;
        if (tmax > 2e5)
            throw EvalError(
                "meijer_g contour: integrand not decayed by |t| = 2e5; "
                "decay rate too small");
    }
    auto f = [&](double t) { return std::exp(log_f(t)); };
    ComplexQuadratureResult r =
        integrate_complex(f, -tmax, tmax, 1e-16, 1e-12, 60000);
    if (!r.converged)
        throw EvalError("meijer_g contour: quadrature did not converge");
    return r.value * std::exp(scale) / kTwoPi;
}

}  // namespace

void MeijerSpec::validate() const {
    structural_checks(*this);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < m; ++j) {
            const double d = a[k] - b[j];
            const double rd = std::round(d);
            if (rd >= 1.0 && std::abs(d - rd) < 1e-12)
                throw std::invalid_argument(
                    "MeijerSpec: pole families collide, a[" + std::to_string(k) +
                    "] - b[" + std::to_string(j) + "] = " + std::to_string(d) +
                    " is a positive integer");
        }
}

PoleClassification classify_poles(const MeijerSpec& spec, double eps) {
    PoleClassification pc;
    const int m = spec.m;
    std::vector<int> root(m);
    std::iota(root.begin(), root.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (root[i] != i) i = root[i] = root[root[i]];
        return i;
    };
    pc.separation_gap = kInf;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            if (dist_to_integer(spec.b[i] - spec.b[j]) < eps)
                root[find(i)] = find(j);
        }
    std::vector<std::vector<int>> by_root(m);
    for (int i = 0; i < m; ++i) by_root[find(i)].push_back(i);
    for (auto& g : by_root)
        if (!g.empty()) pc.groups.push_back(std::move(g));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (find(i) != find(j))
                pc.separation_gap = std::min(
                    pc.separation_gap, dist_to_integer(spec.b[i] - spec.b[j]));
    for (const auto& g : pc.groups)
        if (g.size() > 1) pc.degenerate = true;
    return pc;
}

MeijerSpec invert_argument(const MeijerSpec& spec) {
    MeijerSpec r;
    r.m = spec.n;
    r.n = spec.m;
    r.a.reserve(spec.q());
    for (double bj : spec.b) r.a.push_back(1.0 - bj);
    r.b.reserve(spec.p());
    for (double ak : spec.a) r.b.push_back(1.0 - ak);
    r.z = 1.0 / spec.z;
    return r;
}

MeijerSpec epsilon_split(const MeijerSpec& spec, double eps, double shift) {
    PoleClassification pc = classify_poles(spec, eps);
    MeijerSpec r = spec;
    for (const auto& g : pc.groups) {
        if (g.size() < 2) continue;
        std::vector<int> order = g;
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            if (spec.b[i] != spec.b[j]) return spec.b[i] < spec.b[j];
            return i < j;
        });
        const double mid = 0.5 * (order.size() - 1);
        for (size_t i = 0; i < order.size(); ++i)
            r.b[order[i]] += (static_cast<double>(i) - mid) * 2.0 * shift;
    }
    return r;
}

double meijer_g_slater(const MeijerSpec& spec, double* cancellation) {
    structural_checks(spec);
    if (spec.m == 0) {
        // no right poles, so there is no residue series; such specs must go
        // through the contour instead
        throw EvalError("meijer_g_slater: m = 0 has no residue series");
    }
    if (spec.p() > spec.q())
        throw EvalError(
            "meijer_g_slater: series diverges for p > q; invert the argument "
            "first");
    if (spec.p() == spec.q() && spec.z >= 1.0)
        throw EvalError(
            "meijer_g_slater: p = q needs z < 1; invert the argument or use "
            "the contour path");
    // the series only breaks down when poles (near-)exactly coincide; split
    // specs with gaps ~1e-4 are legitimate input here
    if (classify_poles(spec, 1e-9).degenerate)
        throw EvalError(
            "meijer_g_slater: coincident right poles; epsilon-split the spec "
            "or use the contour path");

    const double lnz = std::log(spec.z);
    const int m = spec.m, n = spec.n, p = spec.p(), q = spec.q();

    // per-pole starting coefficients in log space, then a common scale so
    // that huge Gamma products cannot overflow before they cancel
    std::vector<double> log_c0(m), sign_c0(m);
    for (int h = 0; h < m; ++h) {
        double la = spec.b[h] * lnz;
        int sg = 1;
        auto mul = [&](double x) {
            SignedLogGamma s = signed_log_gamma(x);
            la += s.log_abs;
            sg *= s.sign;
        };
        auto div = [&](double x) {
            SignedLogGamma s = signed_log_gamma(x);
            la -= s.log_abs;
            sg *= s.sign;
        };
        for (int j = 0; j < m; ++j)
            if (j != h) mul(spec.b[j] - spec.b[h]);
        for (int k = 0; k < n; ++k) mul(1.0 - spec.a[k] + spec.b[h]);
        for (int j = m; j < q; ++j) div(1.0 - spec.b[j] + spec.b[h]);
        for (int k = n; k < p; ++k) div(spec.a[k] - spec.b[h]);
        log_c0[h] = la;
        sign_c0[h] = sg;
    }
    const double scale = *std::max_element(log_c0.begin(), log_c0.end());

    double total = 0.0;
    double abs_total = 0.0;
    const int max_terms = 100000;
    for (int h = 0; h < m; ++h) {
        double term = sign_c0[h] * std::exp(log_c0[h] - scale);
        double sum = 0.0;
        int small_streak = 0;
        for (int t = 0; t < max_terms; ++t) {
            sum += term;
            abs_total += std::abs(term);
            if (std::abs(term) <= 1e-17 * std::abs(sum) + 1e-300) {
                if (++small_streak >= 3) break;
            } else {
                small_streak = 0;
            }
            double ratio = -spec.z / (t + 1.0);
            for (int j = 0; j < m; ++j)
                if (j != h) ratio /= spec.b[j] - spec.b[h] - 1.0 - t;
            for (int k = 0; k < n; ++k) ratio *= 1.0 - spec.a[k] + spec.b[h] + t;
            for (int j = m; j < q; ++j) ratio /= 1.0 - spec.b[j] + spec.b[h] + t;
            for (int k = n; k < p; ++k) ratio *= spec.a[k] - spec.b[h] - 1.0 - t;
            term *= ratio;
            if (!std::isfinite(term))
                throw EvalError(
                    "meijer_g_slater: series overflowed before converging");
            if (t == max_terms - 1)
                throw EvalError("meijer_g_slater: series did not converge");
        }
        total += sum;
    }
    if (cancellation)
        *cancellation =
            abs_total / std::max(std::abs(total), 1e-300);
    return total * std::exp(scale);
}

double meijer_g_contour(const MeijerSpec& spec) {
    structural_checks(spec);
    const Window w = separating_window(spec);
    if (w.lo >= w.hi)
        throw EvalError(
            "meijer_g_contour: pole families leave no separating window");
    if (decay_rate(spec) <= 0.0)
        throw EvalError(
            "meijer_g_contour: non-positive decay rate m+n-(p+q)/2, the "
            "vertical-line integral does not converge");
    const double sigma = place_contour(spec, w);
    const std::complex<double> v = line_integral(spec, sigma);
    const double mag = std::abs(v);
    if (mag > 0.0 && std::abs(v.imag()) > 1e-8 * mag)
        throw EvalError(
            "meijer_g_contour: imaginary residue " + std::to_string(v.imag()) +
            " exceeds the realness tolerance");
    return v.real();
}

std::complex<double> mellin_barnes_line(const MeijerSpec& spec, double sigma) {
    structural_checks(spec);
    if (decay_rate(spec) <= 0.0)
        throw EvalError(
            "mellin_barnes_line: non-positive decay rate, integral divergent");
    return line_integral(spec, sigma);
}

std::complex<double> log_mellin_kernel(const MeijerSpec& spec,
                                       std::complex<double> s) {
    return log_kernel(spec, s);
}

double log_mellin_kernel_magnitude(const MeijerSpec& spec, double sigma) {
    return log_kernel_mag(spec, sigma);
}

double meijer_g(const MeijerSpec& spec) {
    spec.validate();
    MeijerSpec s = spec;
    if (s.p() > s.q() || (s.p() == s.q() && s.z > 1.0)) s = invert_argument(s);
    if (s.m == 0 && s.n == 0) return 0.0;

    const Window w = separating_window(s);
    const bool contour_ok = w.lo < w.hi && decay_rate(s) > 0.0;
    const PoleClassification pc = classify_poles(s);

    if (s.p() == s.q() && s.z > 0.9) {
        // boundary band (0.9, 1]: the series converges too slowly or not at
        // all, the contour handles it whenever the decay rate allows
        if (contour_ok) return meijer_g_contour(s);
        if (s.z >= 1.0)
            throw EvalError(
                "meijer_g: p = q at unit argument with no convergent contour");
        return meijer_g_slater(pc.degenerate ? epsilon_split(s) : s);
    }
    if (pc.degenerate) {
        if (contour_ok) return meijer_g_contour(s);
        return meijer_g_slater(epsilon_split(s));
    }
    if (s.m == 0) {
        if (contour_ok) return meijer_g_contour(s);
        throw EvalError(
            "meijer_g: no residue series (m = 0) and no convergent contour");
    }
    double cancel = 0.0;
    double v = 0.0;
    bool series_ok = true;
    try {
        v = meijer_g_slater(s, &cancel);
        if (!std::isfinite(v) || cancel > 1e6) series_ok = false;
    } catch (const EvalError&) {
        if (!contour_ok) throw;
        series_ok = false;
    }
    if (!series_ok) {
        if (contour_ok) return meijer_g_contour(s);
        throw EvalError(
            "meijer_g: residue series lost all precision and no convergent "
            "contour exists");
    }
    return v;
}

}  // namespace fsoris
