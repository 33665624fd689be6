#pragma once

#include <vector>

#include "fsoris/meijer_g.hpp"

namespace fsoris {

// One FSO hop: inverted-Gamma-Gamma turbulence triple (alpha, beta,
// lambda = alpha - 2) plus the pointing-error pair (zeta, A).
struct HopParams {
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double zeta = 0.0;
    double pointing_loss_A = 1.0;
};

// lambda = alpha - 2 is fixed here; alpha > 3 keeps the (lambda - 1) scale
// of the turbulence density positive. Throws std::invalid_argument.
HopParams make_hop(double alpha, double beta, double zeta = 1.0,
                   double pointing_loss_A = 1.0);

// One link: source->RIS and RIS->receiver hops, element count, detection
// order r (1 = heterodyne, 2 = IM/DD) and electrical SNR in dB.
struct LinkParams {
    HopParams hop_s;
    HopParams hop_r;
    int n_elements = 2;
    int detection = 1;
    double mu_r_db = 30.0;

    double mu_linear() const;
    void validate() const;  // throws std::invalid_argument
};

// Gamma match of the per-element RIS product term M_t: the sum over N
// elements is approximated by Gamma(shape_l, scale_k). mean_m and var_m are
// per-element moments; the lambda constants feed every closed form.
struct MatchedGamma {
    double mean_m = 0.0;
    double var_m = 0.0;
    double shape_l = 0.0;
    double scale_k = 0.0;
    double lambda1 = 0.0;  // lambda2^l / Gamma(l)
    double lambda2 = 0.0;  // mean_m / scale_k = l / N
    double lambda3 = 0.0;  // lambda1 / (2 pi)^{(r-1)/2}
    double lambda4 = 0.0;  // (lambda2 / r)^r
    bool analytic_continuation = false;
};

// Second moments need Gamma(lambda - 2); for 2 < lambda that is a true
// moment, for 1 < lambda < 2 only the signed-Gamma continuation exists and
// the caller must opt in. Var <= 0 under continuation: std::runtime_error.
MatchedGamma match_gamma(const LinkParams& link,
                         bool allow_analytic_continuation = false);

// Per-hop and per-link Mellin moments of the product term. is_true_moment
// is false when any Gamma(lambda - k) argument is non-positive (the value
// is then the analytic continuation of the formula).
struct MomentValue {
    double value = 0.0;
    bool is_true_moment = true;
};
MomentValue hop_moment(const HopParams& hop, double k);
MomentValue moment(const LinkParams& link, double k);

// Constant table shared by the product density and the moment formula:
// per-hop density prefactors, product prefactor/argument pairs, the two
// parameter rows of the product Meijer form, and cached E[M], E[M^2].
struct MomentTable {
    double lambda5_s = 0.0;  // 1/(Gamma(alpha)Gamma(beta)Gamma(lambda)), S-hop
    double lambda5_r = 0.0;
    double lambda6 = 0.0;    // zeta_s^2 * lambda5_s
    double lambda7 = 0.0;    // zeta_r^2 * lambda5_r
    double lambda8 = 0.0;    // alpha_s beta_s / (A_s (lambda_s - 1))
    double lambda9 = 0.0;
    std::vector<double> p_row;  // 1-lambda_r, 1-lambda_s, 1+zeta_s^2, 1+zeta_r^2
    std::vector<double> r_row;  // zeta_r^2, alpha_r, beta_r, zeta_s^2, alpha_s, beta_s
    double mean_m = 0.0;
    double second_m = 0.0;
    bool mean_valid = false;
    bool second_valid = false;
};
MomentTable make_moment_table(const LinkParams& link);

// Appendix densities (sampler oracles).
double igg_pdf(const HopParams& hop, double x);
double pointing_pdf(const HopParams& hop, double i);
double composite_pdf(const HopParams& hop, double i);
double product_pdf(const LinkParams& link, double i);

// End-to-end SNR statistics of the Gamma-matched sum, gamma = mu (Y/E[M_t])^r
// with Y ~ Gamma(l, k). The PDF's Meijer factor G^{1,0}_{0,1} is evaluated
// as exp(-z) directly; the CDF goes through the full G^{r,1}_{1,r+1} form
// (equal to the regularized lower incomplete gamma, which tests exploit).
double snr_pdf(const LinkParams& link, const MatchedGamma& mg, double gamma);
double snr_cdf(const LinkParams& link, const MatchedGamma& mg, double gamma);
// convenience overloads running match_gamma without the continuation override
double snr_pdf(const LinkParams& link, double gamma);
double snr_cdf(const LinkParams& link, double gamma);

}  // namespace fsoris
