#include "fsoris/meijer_g_bivariate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "fsoris/log_gamma.hpp"
#include "fsoris/quadrature.hpp"

namespace fsoris {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.28318530717958647692;

using cplx = std::complex<double>;

struct Unsupported {
    std::string why;
};

void block_checks(const MeijerSpec& blk, const char* name) {
    if (blk.m < 0 || blk.n < 0 || blk.m > blk.q() || blk.n > blk.p())
        throw Unsupported{std::string(name) + ": need 0 <= m <= q, 0 <= n <= p"};
    for (double v : blk.a)
        if (!std::isfinite(v)) throw Unsupported{std::string(name) + ": non-finite a"};
    for (double v : blk.b)
        if (!std::isfinite(v)) throw Unsupported{std::string(name) + ": non-finite b"};
}

double decay_rate(const MeijerSpec& blk) {
    return blk.m + blk.n - 0.5 * (blk.p() + blk.q());
}

struct Window {
    double lo = -kInf;
    double hi = kInf;
};

Window block_window(const MeijerSpec& blk) {
    Window w;
    for (int k = 0; k < blk.n; ++k) w.lo = std::max(w.lo, blk.a[k] - 1.0);
    for (int j = 0; j < blk.m; ++j) w.hi = std::min(w.hi, blk.b[j]);
    return w;
}

// golden-section minimum of log|K(sigma)| + sigma*ln z inside the window,
// same placement rule as the univariate contour path
double place_line(const MeijerSpec& blk, double z) {
    const Window w = block_window(blk);
    const double lnz = std::log(z);
    auto phi = [&](double sig) {
        const double v = log_mellin_kernel_magnitude(blk, sig) + sig * lnz;
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
    const double width = hi - lo;
    double x0 = lo + 1e-3 * width;
    double x1 = hi - 1e-3 * width;
    const double gr = 0.61803398874989485;
    double m0 = x1 - gr * (x1 - x0);
    double m1 = x0 + gr * (x1 - x0);
    double f0 = phi(m0), f1 = phi(m1);
    for (int it = 0; it < 120 && (x1 - x0) > 1e-10 * std::max(1.0, width);
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

// distance from x to the nearest rung of the ladder {base + dir*t, t = 0,1,..}
double ladder_distance(double x, double base, double dir) {
    const double steps = (x - base) / dir;
    const double t = std::max(0.0, std::round(steps));
    return std::abs(x - (base + dir * t));
}

double nearest_outer_pole(const MeijerSpec& outer, double u) {
    double d = kInf;
    for (int j = 0; j < outer.m; ++j)
        d = std::min(d, ladder_distance(u, outer.b[j], 1.0));
    for (int k = 0; k < outer.n; ++k)
        d = std::min(d, ladder_distance(u, outer.a[k] - 1.0, -1.0));
    return d;
}

struct Crossing {
    double w;      // crossed pole location in u
    double coeff;  // residue-line weight
};

// outer-family rungs the straight u-line fails to separate; both families
// contribute with the same weight (-1)^t/t! * [remaining kernel factors](w)
std::vector<Crossing> find_crossings(const MeijerSpec& outer, double sigma_u) {
    std::vector<Crossing> out;
    auto rest_at = [&](double w, int skip_b, int skip_a) -> double {
        double log_abs = 0.0;
        int sign = 1;
        auto acc = [&](double x, bool numerator) {
            if (x <= 0.0 && x == std::floor(x))
                throw Unsupported{
                    "outer block pole is not simple at the crossing"};
            SignedLogGamma s = signed_log_gamma(x);
            log_abs += numerator ? s.log_abs : -s.log_abs;
            sign *= s.sign;
        };
        for (int j = 0; j < outer.m; ++j)
            if (j != skip_b) acc(outer.b[j] - w, true);
        for (int k = 0; k < outer.n; ++k)
            if (k != skip_a) acc(1.0 - outer.a[k] + w, true);
        for (int j = outer.m; j < outer.q(); ++j) acc(1.0 - outer.b[j] + w, false);
        for (int k = outer.n; k < outer.p(); ++k) acc(outer.a[k] - w, false);
        return sign * std::exp(log_abs);
    };
    for (int j = 0; j < outer.m; ++j) {
        int steps = 0;
        for (int t = 0; outer.b[j] + t < sigma_u; ++t, ++steps) {
            if (steps >= 3)
                throw Unsupported{
                    "more than three crossed rungs on an outer pole ladder"};
            const double w = outer.b[j] + t;
            const double fac = (t % 2 == 0 ? 1.0 : -1.0) / std::tgamma(t + 1.0);
            out.push_back({w, fac * rest_at(w, j, -1)});
        }
    }
    for (int k = 0; k < outer.n; ++k) {
        int steps = 0;
        for (int t = 0; outer.a[k] - 1.0 - t > sigma_u; ++t, ++steps) {
            if (steps >= 3)
                throw Unsupported{
                    "more than three crossed rungs on an outer pole ladder"};
            const double w = outer.a[k] - 1.0 - t;
            const double fac = (t % 2 == 0 ? 1.0 : -1.0) / std::tgamma(t + 1.0);
            out.push_back({w, fac * rest_at(w, -1, k)});
        }
    }
    return out;
}

// expand |t| until g(t) has dropped `drop` below its running peak
double walk_decay(const std::function<double(double)>& g, double drop) {
    double peak = g(0.0);
    double t = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double v = g(t);
        peak = std::max(peak, v);
        if (v < peak - drop) return t;
        t *= 1.5;
        if (t > 1e4)
            throw Unsupported{"integrand failed to decay along a contour"};
    }
    return t;
}

}  // namespace

BivariateResult meijer_g_bivariate(const BivariateMeijerSpec& spec) {
    try {
        block_checks(spec.outer, "outer block");
        block_checks(spec.inner1, "inner block 1");
        block_checks(spec.inner2, "inner block 2");
        if (!(spec.z1 > 0.0) || !std::isfinite(spec.z1) || !(spec.z2 > 0.0) ||
            !std::isfinite(spec.z2))
            throw Unsupported{"arguments must be positive and finite"};

        const double c0 = decay_rate(spec.outer);
        const double c1 = decay_rate(spec.inner1);
        const double c2 = decay_rate(spec.inner2);
        if (c1 <= 0.0 || c2 <= 0.0 || c0 < 0.0)
            throw Unsupported{
                "decay rates do not guarantee an absolutely convergent "
                "double contour"};

        const Window w1 = block_window(spec.inner1);
        const Window w2 = block_window(spec.inner2);
        if (w1.lo >= w1.hi || w2.lo >= w2.hi)
            throw Unsupported{"an inner block has no separating window"};

        const double lnz1 = std::log(spec.z1);
        const double lnz2 = std::log(spec.z2);
        const double base1 = place_line(spec.inner1, spec.z1);
        const double sigma2 = place_line(spec.inner2, spec.z2);

        // nudge the s-line until the u-line clears every outer pole and the
        // residue lines clear the kernels they evaluate
        const double room =
            std::isfinite(w1.hi - w1.lo) ? (w1.hi - w1.lo) : 2.0;
        const double margin = std::min(0.03, 0.1 * room);
        double sigma1 = base1;
        std::vector<Crossing> crossings;
        bool placed = false;
        for (int attempt = 0; attempt < 8 && !placed; ++attempt) {
            const double off = 0.12 * room * ((attempt + 1) / 2) *
                               (attempt % 2 == 1 ? 1.0 : -1.0);
            sigma1 = base1 + off;
            if (sigma1 <= w1.lo + 1e-3 * room || sigma1 >= w1.hi - 1e-3 * room)
                continue;
            const double su = sigma1 + sigma2;
            if (nearest_outer_pole(spec.outer, su) < margin) continue;
            crossings = find_crossings(spec.outer, su);
            bool safe = true;
            for (const Crossing& c : crossings) {
                // poles of K2(w - s) in s sit on reflected ladders
                for (int j = 0; j < spec.inner2.m && safe; ++j)
                    if (ladder_distance(sigma1, c.w - spec.inner2.b[j], -1.0) <
                        margin)
                        safe = false;
                for (int k = 0; k < spec.inner2.n && safe; ++k)
                    if (ladder_distance(sigma1,
                                        c.w - spec.inner2.a[k] + 1.0, 1.0) <
                        margin)
                        safe = false;
            }
            if (safe) placed = true;
        }
        if (!placed)
            throw Unsupported{
                "could not place contours clear of the coupled pole set"};

        const double sigma_u = sigma1 + sigma2;
        auto k0 = [&](cplx u) { return log_mellin_kernel(spec.outer, u); };
        auto k1 = [&](cplx s) { return log_mellin_kernel(spec.inner1, s); };
        auto k2 = [&](cplx t) { return log_mellin_kernel(spec.inner2, t); };

        const double scale_in =
            k0(cplx(sigma_u, 0.0)).real() + k2(cplx(sigma2, 0.0)).real() +
            sigma2 * lnz2;
        const double scale_out = k1(cplx(sigma1, 0.0)).real() + sigma1 * lnz1;

        const double drop = std::log(1e13);
        const double t_inner = walk_decay(
            [&](double t) {
                return k0(cplx(sigma_u, t)).real() + k2(cplx(sigma2, t)).real();
            },
            drop);
        const double t_couple = walk_decay(
            [&](double t) {
                return k0(cplx(sigma_u, t)).real() + k1(cplx(sigma1, t)).real();
            },
            drop);
        const double t_diag = walk_decay(
            [&](double t) {
                return k1(cplx(sigma1, t)).real() +
                       k2(cplx(sigma2, -t)).real();
            },
            drop);
        const double t_outer = std::max(t_couple, t_diag);

        auto inner = [&](double ts) -> cplx {
            const cplx s(sigma1, ts);
            auto f = [&](double tt) -> cplx {
                const cplx t(sigma2, tt);
                return std::exp(k0(s + t) + k2(t) + t * lnz2 - scale_in);
            };
            ComplexQuadratureResult r = integrate_complex(
                f, -t_inner - std::abs(ts), t_inner + std::abs(ts), 1e-10,
                1e-8, 1500);
            if (!r.converged)
                throw Unsupported{"inner contour quadrature did not converge"};
            return r.value;
        };
        // conjugate symmetry of the outer integrand halves the line
        auto outer_f = [&](double ts) -> double {
            const cplx s(sigma1, ts);
            const cplx pre = std::exp(k1(s) + s * lnz1 - scale_out);
            return 2.0 * (pre * inner(ts)).real();
        };
        QuadratureResult outer =
            integrate(outer_f, 0.0, t_outer, 1e-9, 3e-7, 3000);
        if (!outer.converged)
            throw Unsupported{"outer contour quadrature did not converge"};
        double total = std::exp(scale_in + scale_out) * outer.value /
                       (kTwoPi * kTwoPi);

        for (const Crossing& c : crossings) {
            // residue line: (1/2pi) int K1(s) z1^s K2(w-s) z2^{w-s} dt
            auto g = [&](double t) {
                return k1(cplx(sigma1, t)).real() +
                       k2(cplx(c.w - sigma1, -t)).real();
            };
            const double t_corr = walk_decay(g, drop);
            const double corr_scale = g(0.0) + sigma1 * lnz1 +
                                      (c.w - sigma1) * lnz2;
            auto f = [&](double t) -> cplx {
                const cplx s(sigma1, t);
                return std::exp(k1(s) + s * lnz1 + k2(cplx(c.w, 0.0) - s) +
                                (cplx(c.w, 0.0) - s) * lnz2 - corr_scale);
            };
            ComplexQuadratureResult r =
                integrate_complex(f, -t_corr, t_corr, 1e-12, 1e-10, 6000);
            if (!r.converged)
                throw Unsupported{
                    "residue-line quadrature did not converge"};
            total += c.coeff * std::exp(corr_scale) * r.value.real() / kTwoPi;
        }
        return BivariateResult{total, ""};
    } catch (const Unsupported& u) {
        return BivariateResult{std::nullopt, u.why};
    } catch (const std::exception& e) {
        return BivariateResult{std::nullopt, e.what()};
    }
}

}  // namespace fsoris
