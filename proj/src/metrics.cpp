#include "fsoris/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsoris/incomplete_gamma.hpp"
#include "fsoris/log_gamma.hpp"
#include "fsoris/meijer_g.hpp"
#include "fsoris/meijer_g_bivariate.hpp"
#include "fsoris/quadrature.hpp"

namespace fsoris {
namespace {

constexpr double kHalfLog2Inv = 0.7213475204444817036799623405010;  // 1/(2 ln 2)

// signed product of Gamma factors in log space (residue coefficients mix
// negative arguments)
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
    void mul(double x) {
        SignedLogGamma s = signed_log_gamma(x);
        log_abs += s.log_abs;
        sign *= s.sign;
    }
    void div(double x) {
        SignedLogGamma s = signed_log_gamma(x);
        log_abs -= s.log_abs;
        sign *= s.sign;
    }
    double value() const { return sign * std::exp(log_abs); }
};

// Per-link quantities every metric formula needs: l/r, the Meijer argument
// scale lambda4/mu, and lambda3 / (sqrt(r) mu^{l/r}).
struct LinkDerived {
    MatchedGamma mg;
    double mu = 0.0;
    double r = 1.0;
    double lr = 0.0;
    double c = 0.0;
    double tilde3 = 0.0;
};

LinkDerived derive(const LinkParams& link, bool allow_continuation) {
    link.validate();
    LinkDerived d;
    d.mg = match_gamma(link, allow_continuation);
    d.mu = link.mu_linear();
    d.r = static_cast<double>(link.detection);
    d.lr = d.mg.shape_l / d.r;
    d.c = d.mg.lambda4 / d.mu;
    d.tilde3 = d.mg.lambda3 / (std::sqrt(d.r) * std::pow(d.mu, d.lr));
    return d;
}

// {0, 1/r, ..., (r-1)/r}
std::vector<double> unit_ladder(int r) {
    std::vector<double> b(r);
    for (int j = 0; j < r; ++j) b[j] = static_cast<double>(j) / r;
    return b;
}

void check_scenario(const SecrecyScenario& sc) {
    sc.link_d.validate();
    sc.link_e.validate();
    if (sc.link_d.detection != sc.link_e.detection)
        throw std::invalid_argument(
            "SecrecyScenario: both links must use the same detection order");
    if (!(sc.psi >= 1.0))
        throw std::invalid_argument("SecrecyScenario: psi must be >= 1");
}

MeijerSpec cdf_spec(const LinkDerived& d, double gamma_th) {
    MeijerSpec s;
    s.m = static_cast<int>(d.r);
    s.n = 1;
    s.a = {1.0 - d.lr};
    s.b = unit_ladder(s.m);
    s.b.push_back(-d.lr);
    s.z = d.c * gamma_th;
    return s;
}

MeijerSpec ber_spec(const LinkDerived& d, const ModulationParams& mod) {
    MeijerSpec s;
    s.m = static_cast<int>(d.r);
    s.n = 2;
    s.a = {1.0 - mod.p - d.lr, 1.0 - d.lr};
    s.b = unit_ladder(s.m);
    s.b.push_back(-d.lr);
    s.z = d.c / mod.q;
    return s;
}

MeijerSpec capacity_spec(const LinkDerived& d) {
    const int r = static_cast<int>(d.r);
    MeijerSpec s;
    s.m = r + 2;
    s.n = 1;
    s.a = {-d.lr, 1.0 - d.lr};
    s.b = unit_ladder(r);
    s.b.push_back(-d.lr);
    s.b.push_back(-d.lr);  // coincident pair carries the log(mu) growth
    s.z = d.c;
    return s;
}

MeijerSpec sop_spec(const LinkDerived& dd, const LinkDerived& de, double psi) {
    const int r = static_cast<int>(dd.r);
    const double varpi = 1.0 - dd.lr - de.lr;
    MeijerSpec s;
    s.m = r + 1;
    s.n = r;
    for (int j = 0; j < r; ++j) s.a.push_back(varpi - static_cast<double>(j) / r);
    s.a.push_back(varpi + dd.lr);
    s.b = unit_ladder(r);
    s.b.push_back(-de.lr);
    s.z = de.c / (psi * dd.c);
    return s;
}

double sop_prefactor(const LinkDerived& dd, const LinkDerived& de, double psi) {
    return dd.tilde3 * de.tilde3 * std::pow(psi, -de.lr) *
           std::pow(dd.c, -(dd.lr + de.lr));
}

// t = 0 slice of the residue expansion: G ~ sum_{j<m} R_j z^{b_j} for z -> 0.
// Coincident right poles are epsilon-split first (the symmetric pair then
// reproduces the log z term to O(shift^2)).
double residue_slice(const MeijerSpec& s) {
    const double log_z = std::log(s.z);
    double total = 0.0;
    for (int j = 0; j < s.m; ++j) {
        SignedLog term;
        term.log_abs = s.b[j] * log_z;
        for (int i = 0; i < s.m; ++i) {
            if (i != j) term.mul(s.b[i] - s.b[j]);
        }
        for (int k = 0; k < s.n; ++k) term.mul(1.0 - s.a[k] + s.b[j]);
        for (int i = s.m; i < s.q(); ++i) term.div(1.0 - s.b[i] + s.b[j]);
        for (int k = s.n; k < s.p(); ++k) term.div(s.a[k] - s.b[j]);
        total += term.value();
    }
    return total;
}

double leading_residues(const MeijerSpec& spec) {
    if (!classify_poles(spec).degenerate) return residue_slice(spec);
    // the symmetric split carries an even-power bias in the shift (~1e-7
    // relative at the default); one Richardson step over shift and shift/2
    // cancels the quadratic term, leaving roundoff-level error
    const double coarse = residue_slice(epsilon_split(spec, 1e-4, 6e-5));
    const double fine = residue_slice(epsilon_split(spec, 1e-4, 3e-5));
    return (4.0 * fine - coarse) / 3.0;
}

// E[h(gamma)] under the matched law by direct quadrature. The gamma density
// in x = Lambda2 (gamma/mu)^{1/r} is x^{l-1} e^{-x} / Gamma(l); for l < 1 the
// substitution y = x^l flattens the origin singularity to a bounded density
// exp(-y^{1/l}) / Gamma(l+1).
template <typename H>
double matched_expectation(const LinkDerived& d, H&& h) {
    const double l = d.mg.shape_l;
    const auto gamma_of_x = [&](double x) {
        return d.mu * std::pow(x / d.mg.lambda2, d.r);
    };
    if (l < 1.0) {
        const double norm = std::exp(-log_gamma(l + 1.0));
        const auto f = [&](double y) {
            const double x = std::pow(y, 1.0 / l);
            return norm * std::exp(-x) * h(gamma_of_x(x));
        };
        return integrate(f, 0.0, 1.0, 1e-12, 1e-10, 8000).value +
               integrate_to_infinity(f, 1.0, 1e-12, 1e-10, 8000).value;
    }
    const double norm = std::exp(-log_gamma(l));
    const auto f = [&](double x) {
        return norm * std::pow(x, l - 1.0) * std::exp(-x) * h(gamma_of_x(x));
    };
    const double knee = l + 8.0 * std::sqrt(l);
    return integrate(f, 0.0, knee, 1e-12, 1e-10, 8000).value +
           integrate_to_infinity(f, knee, 1e-12, 1e-10, 8000).value;
}

// P(gamma <= gamma_th) via the same substitutions, avoiding the closed
// incomplete-gamma path so the reference stays independent.
double outage_quadrature(const LinkDerived& d, double gamma_th) {
    if (gamma_th <= 0.0) return 0.0;
    const double l = d.mg.shape_l;
    const double x_th = d.mg.lambda2 * std::pow(gamma_th / d.mu, 1.0 / d.r);
    if (l < 1.0) {
        const double norm = std::exp(-log_gamma(l + 1.0));
        const auto f = [&](double y) {
            return norm * std::exp(-std::pow(y, 1.0 / l));
        };
        return integrate(f, 0.0, std::pow(x_th, l), 1e-12, 1e-10, 8000).value;
    }
    const double norm = std::exp(-log_gamma(l));
    const auto f = [&](double x) {
        return norm * std::pow(x, l - 1.0) * std::exp(-x);
    };
    return integrate(f, 0.0, x_th, 1e-12, 1e-10, 8000).value;
}

double matched_cdf(const LinkDerived& d, double gamma) {
    if (gamma <= 0.0) return 0.0;
    return regularized_lower_gamma(d.mg.shape_l,
                                   d.mg.lambda2 * std::pow(gamma / d.mu, 1.0 / d.r));
}

double sop_quadrature(const LinkDerived& dd, const LinkDerived& de, double psi) {
    return matched_expectation(de, [&](double gamma_e) {
        return matched_cdf(dd, psi * gamma_e);
    });
}

// integral F_e(g) (1 - F_d(g)) / (1+g) dg; equals 2 ln 2 times the average
// secrecy capacity (shown by parts against E[max(0, Cs)])
double asc_raw_quadrature(const LinkDerived& dd, const LinkDerived& de) {
    const auto f = [&](double g) {
        return matched_cdf(de, g) * (1.0 - matched_cdf(dd, g)) / (1.0 + g);
    };
    std::vector<double> interior = {1.0, std::min(dd.mu, de.mu)};
    const double mid = std::max(dd.mu, de.mu);
    std::sort(interior.begin(), interior.end());
    return integrate_split(f, 0.0, mid, interior, 1e-12, 1e-10, 8000).value +
           integrate_to_infinity(f, mid, 1e-12, 1e-10, 8000).value;
}

// Eavesdropper-only term of the secrecy-capacity decomposition. The b-type
// pole at -l_e/r is regularized to the left of the line (the canonical
// separating window is empty for this kernel), which is part of the term's
// definition, not a numerical fallback.
double asc_t1_term(const LinkDerived& de) {
    const int r = static_cast<int>(de.r);
    MeijerSpec s;
    s.m = r + 1;
    s.n = 1;
    s.a = {1.0 - de.lr};
    s.b = unit_ladder(r);
    s.b.push_back(-de.lr);
    s.z = de.c;
    const double sigma = -de.lr + 0.5 * std::min(1.0, de.lr);
    return mellin_barnes_line(s, sigma).real();
}

MeijerSpec asc_inner_block(const LinkDerived& d) {
    const int r = static_cast<int>(d.r);
    MeijerSpec s;
    s.m = r;
    s.n = 1;
    s.a = {1.0 - d.lr};
    s.b = unit_ladder(r);
    s.b.push_back(-d.lr);
    return s;
}

BivariateResult asc_bivariate_term(const LinkDerived& dd, const LinkDerived& de) {
    const double big_l = dd.lr + de.lr;
    BivariateMeijerSpec spec;
    spec.outer.m = 1;
    spec.outer.n = 1;
    spec.outer.a = {-big_l};
    spec.outer.b = {-big_l};
    spec.inner1 = asc_inner_block(de);
    spec.inner2 = asc_inner_block(dd);
    spec.z1 = de.c;
    spec.z2 = dd.c;
    return meijer_g_bivariate(spec);
}

}  // namespace

SecrecyScenario make_scenario(const LinkParams& link_d, const LinkParams& link_e,
                              double tau_s) {
    if (!(tau_s >= 0.0))
        throw std::invalid_argument("make_scenario: tau_s must be nonnegative");
    SecrecyScenario sc;
    sc.link_d = link_d;
    sc.link_e = link_e;
    sc.tau_s = tau_s;
    sc.psi = std::exp2(tau_s);
    check_scenario(sc);
    return sc;
}

MetricResult outage_probability(const LinkParams& link, double gamma_th,
                                const MetricOptions& opts) {
    const LinkDerived d = derive(link, opts.allow_analytic_continuation);
    if (gamma_th < 0.0)
        throw std::domain_error("outage_probability: gamma_th must be nonnegative");
    MetricResult res;
    res.closed_form = snr_cdf(link, d.mg, gamma_th);
    res.analytic_continuation = d.mg.analytic_continuation;
    if (opts.with_asymptotic)
        res.asymptotic = outage_probability_asymptotic(link, gamma_th);
    if (opts.with_quadrature_ref)
        res.quadrature_ref = outage_quadrature(d, gamma_th);
    return res;
}

double outage_probability_asymptotic(const LinkParams& link, double gamma_th) {
    const LinkDerived d = derive(link, true);
    if (gamma_th <= 0.0) return 0.0;
    return d.tilde3 * std::pow(gamma_th, d.lr) * leading_residues(cdf_spec(d, gamma_th));
}

MetricResult average_ber(const LinkParams& link, const ModulationParams& mod,
                         const MetricOptions& opts) {
    if (!(mod.p > 0.0) || !(mod.q > 0.0))
        throw std::invalid_argument("average_ber: modulation parameters must be positive");
    const LinkDerived d = derive(link, opts.allow_analytic_continuation);
    const double pref =
        d.tilde3 / (2.0 * std::tgamma(mod.p) * std::pow(mod.q, d.lr));
    MetricResult res;
    res.closed_form = std::clamp(pref * meijer_g(ber_spec(d, mod)), 0.0, 0.5);
    res.analytic_continuation = d.mg.analytic_continuation;
    if (opts.with_asymptotic) res.asymptotic = average_ber_asymptotic(link, mod);
    if (opts.with_quadrature_ref) {
        res.quadrature_ref = matched_expectation(d, [&](double g) {
            return 0.5 * regularized_upper_gamma(mod.p, mod.q * g);
        });
    }
    return res;
}

double average_ber_asymptotic(const LinkParams& link, const ModulationParams& mod) {
    if (!(mod.p > 0.0) || !(mod.q > 0.0))
        throw std::invalid_argument("average_ber_asymptotic: modulation parameters must be positive");
    const LinkDerived d = derive(link, true);
    const double pref =
        d.tilde3 / (2.0 * std::tgamma(mod.p) * std::pow(mod.q, d.lr));
    return pref * leading_residues(ber_spec(d, mod));
}

MetricResult average_capacity(const LinkParams& link, const MetricOptions& opts) {
    const LinkDerived d = derive(link, opts.allow_analytic_continuation);
    const double pref = kHalfLog2Inv * d.tilde3;
    MetricResult res;
    res.closed_form = std::max(0.0, pref * meijer_g(capacity_spec(d)));
    res.analytic_continuation = d.mg.analytic_continuation;
    if (opts.with_asymptotic) res.asymptotic = average_capacity_asymptotic(link);
    if (opts.with_quadrature_ref) {
        res.quadrature_ref = matched_expectation(
            d, [](double g) { return kHalfLog2Inv * std::log1p(g); });
    }
    return res;
}

double average_capacity_asymptotic(const LinkParams& link) {
    const LinkDerived d = derive(link, true);
    return kHalfLog2Inv * d.tilde3 * leading_residues(capacity_spec(d));
}

MetricResult average_secrecy_capacity(const SecrecyScenario& sc,
                                      const MetricOptions& opts) {
    check_scenario(sc);
    const LinkDerived dd = derive(sc.link_d, opts.allow_analytic_continuation);
    const LinkDerived de = derive(sc.link_e, opts.allow_analytic_continuation);
    MetricResult res;
    res.analytic_continuation =
        dd.mg.analytic_continuation || de.mg.analytic_continuation;

    const BivariateResult biv = asc_bivariate_term(dd, de);
    if (biv.ok()) {
        const double raw = de.tilde3 * (asc_t1_term(de) - dd.tilde3 * *biv.value);
        res.closed_form = std::max(0.0, kHalfLog2Inv * raw);
    } else {
        res.bivariate_unsupported = true;
        res.diagnostic = biv.diagnostic;
        res.closed_form =
            std::max(0.0, kHalfLog2Inv * asc_raw_quadrature(dd, de));
    }
    if (opts.with_quadrature_ref)
        res.quadrature_ref =
            std::max(0.0, kHalfLog2Inv * asc_raw_quadrature(dd, de));
    return res;
}

MetricResult secrecy_outage_probability(const SecrecyScenario& sc,
                                        const MetricOptions& opts) {
    check_scenario(sc);
    const LinkDerived dd = derive(sc.link_d, opts.allow_analytic_continuation);
    const LinkDerived de = derive(sc.link_e, opts.allow_analytic_continuation);
    MetricResult res;
    res.analytic_continuation =
        dd.mg.analytic_continuation || de.mg.analytic_continuation;
    res.closed_form = std::clamp(
        sop_prefactor(dd, de, sc.psi) * meijer_g(sop_spec(dd, de, sc.psi)), 0.0, 1.0);
    if (opts.with_asymptotic) res.asymptotic = secrecy_outage_asymptotic(sc);
    if (opts.with_quadrature_ref)
        res.quadrature_ref = sop_quadrature(dd, de, sc.psi);
    return res;
}

double secrecy_outage_asymptotic(const SecrecyScenario& sc) {
    check_scenario(sc);
    const LinkDerived dd = derive(sc.link_d, true);
    const LinkDerived de = derive(sc.link_e, true);
    // mu_d -> infinity sends the argument past 1; the expansion lives on the
    // inverted spec
    return sop_prefactor(dd, de, sc.psi) *
           leading_residues(invert_argument(sop_spec(dd, de, sc.psi)));
}

}  // namespace fsoris
