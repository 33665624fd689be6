#pragma once

#include <optional>
#include <string>

#include "fsoris/channel.hpp"

namespace fsoris {

// Binary-modulation family: conditional error probability
// Pe(gamma) = Q(p, q*gamma) / (2*Gamma(p)) with the regularized upper
// incomplete gamma Q. (p, q) = (1, 1) is DPSK; (0.5, 0.5) is coherent OOK.
struct ModulationParams {
    double p = 1.0;
    double q = 1.0;
};

// Wiretap pair: destination and eavesdropper links plus the target secrecy
// rate tau_s (bits/s/Hz). psi = 2^tau_s is the SNR-ratio threshold used by
// both secrecy-outage paths; keep it consistent with tau_s via make_scenario.
struct SecrecyScenario {
    LinkParams link_d;
    LinkParams link_e;
    double tau_s = 0.1;
    double psi = 1.0;
};

SecrecyScenario make_scenario(const LinkParams& link_d,
                              const LinkParams& link_e,
                              double tau_s = 0.1);

struct MetricOptions {
    bool with_asymptotic = false;
    bool with_quadrature_ref = false;
    // Secrecy metrics with a strong-turbulence hop need the continued
    // moment-matched shape; the result carries a flag either way.
    bool allow_analytic_continuation = false;
};

struct MetricResult {
    double closed_form = 0.0;
    std::optional<double> asymptotic;
    std::optional<double> quadrature_ref;
    // True when any participating link's matched-gamma shape came from the
    // analytically continued variance (second hop moment not a true moment).
    bool analytic_continuation = false;
    // Average secrecy capacity only: set when the bivariate evaluation is
    // infeasible for the given parameters; closed_form then falls back to
    // the quadrature value and diagnostic says why.
    bool bivariate_unsupported = false;
    std::string diagnostic;
};

// P(gamma <= gamma_th). Exact CDF evaluation; the asymptotic variant is the
// leading residue expansion, valid for mu -> infinity. The standalone
// asymptotic functions need only the matched shape, so they use the
// analytically continued second moment when a hop requires it (no flag to
// carry on a plain double); the full-result functions stay strict.
MetricResult outage_probability(const LinkParams& link, double gamma_th,
                                const MetricOptions& opts = {});
double outage_probability_asymptotic(const LinkParams& link, double gamma_th);

// E[Q(p, q*gamma)] / (2*Gamma(p)).
MetricResult average_ber(const LinkParams& link, const ModulationParams& mod,
                         const MetricOptions& opts = {});
double average_ber_asymptotic(const LinkParams& link, const ModulationParams& mod);

// E[log2(1 + gamma)] / 2 in bits/s/Hz (the 1/2 is the FSO half-duplex factor).
MetricResult average_capacity(const LinkParams& link,
                              const MetricOptions& opts = {});
double average_capacity_asymptotic(const LinkParams& link);

// E[max(0, Cs)] with Cs = (log2(1+gamma_d) - log2(1+gamma_e)) / 2, links
// independent. Closed form uses the bivariate contour integral; when that is
// infeasible the quadrature path is authoritative and the result is flagged.
MetricResult average_secrecy_capacity(const SecrecyScenario& sc,
                                      const MetricOptions& opts = {});

// Lower-bound secrecy outage P(gamma_d <= psi * gamma_e); the exact-threshold
// event gamma_d <= psi*gamma_e + psi - 1 has no closed form and is served by
// the Monte Carlo module instead.
MetricResult secrecy_outage_probability(const SecrecyScenario& sc,
                                        const MetricOptions& opts = {});
double secrecy_outage_asymptotic(const SecrecyScenario& sc);

}  // namespace fsoris
