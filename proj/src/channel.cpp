#include "fsoris/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fsoris/incomplete_gamma.hpp"
#include "fsoris/log_gamma.hpp"

namespace fsoris {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void check_hop(const HopParams& h) {
    if (!(h.alpha > 3.0))
        throw std::invalid_argument(
            "HopParams: alpha must exceed 3 (lambda = alpha - 2 > 1), got " +
            std::to_string(h.alpha));
    if (!(h.beta > 0.0))
        throw std::invalid_argument("HopParams: beta must be positive");
    if (!(h.zeta > 0.0))
        throw std::invalid_argument("HopParams: zeta must be positive");
    if (!(h.pointing_loss_A > 0.0))
        throw std::invalid_argument("HopParams: pointing loss A must be positive");
    if (std::abs(h.lambda - (h.alpha - 2.0)) > 1e-12)
        throw std::invalid_argument("HopParams: lambda must equal alpha - 2");
}

// signed product Gamma(alpha+k)Gamma(beta+k)Gamma(lambda-k) /
// (Gamma(alpha)Gamma(beta)Gamma(lambda)) in log space
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

// lambda5..lambda9 and the two parameter rows; cached moments left unset
MomentTable make_constant_table(const LinkParams& link) {
    const HopParams& s = link.hop_s;
    const HopParams& r = link.hop_r;
    MomentTable t;
    t.lambda5_s = std::exp(-log_gamma(s.alpha) - log_gamma(s.beta) -
                           log_gamma(s.lambda));
    t.lambda5_r = std::exp(-log_gamma(r.alpha) - log_gamma(r.beta) -
                           log_gamma(r.lambda));
    t.lambda6 = s.zeta * s.zeta * t.lambda5_s;
    t.lambda7 = r.zeta * r.zeta * t.lambda5_r;
    t.lambda8 = s.alpha * s.beta / (s.pointing_loss_A * (s.lambda - 1.0));
    t.lambda9 = r.alpha * r.beta / (r.pointing_loss_A * (r.lambda - 1.0));
    t.p_row = {1.0 - r.lambda, 1.0 - s.lambda, 1.0 + s.zeta * s.zeta,
               1.0 + r.zeta * r.zeta};
    t.r_row = {r.zeta * r.zeta, r.alpha, r.beta,
               s.zeta * s.zeta, s.alpha, s.beta};
    return t;
}

}  // namespace

HopParams make_hop(double alpha, double beta, double zeta,
                   double pointing_loss_A) {
    HopParams h;
    h.alpha = alpha;
    h.beta = beta;
    h.lambda = alpha - 2.0;
    h.zeta = zeta;
    h.pointing_loss_A = pointing_loss_A;
    check_hop(h);
    return h;
}

double LinkParams::mu_linear() const { return std::pow(10.0, mu_r_db / 10.0); }

void LinkParams::validate() const {
    check_hop(hop_s);
    check_hop(hop_r);
    if (n_elements < 1)
        throw std::invalid_argument("LinkParams: need at least one RIS element");
    if (detection != 1 && detection != 2)
        throw std::invalid_argument(
            "LinkParams: detection order r must be 1 (heterodyne) or 2 (IM/DD)");
    if (!(mu_linear() > 0.0) || !std::isfinite(mu_linear()))
        throw std::invalid_argument("LinkParams: non-positive linear SNR");
}

MomentValue hop_moment(const HopParams& hop, double k) {
    check_hop(hop);
    if (k < 0.0) throw std::invalid_argument("hop_moment: k must be >= 0");
    if (k == 0.0) return {1.0, true};
    SignedLog acc;
    acc.mul(hop.alpha + k);
    acc.mul(hop.beta + k);
    acc.mul(hop.lambda - k);
    acc.div(hop.alpha);
    acc.div(hop.beta);
    acc.div(hop.lambda);
    const double zeta2 = hop.zeta * hop.zeta;
    acc.log_abs +=
        k * std::log((hop.lambda - 1.0) * hop.pointing_loss_A /
                     (hop.alpha * hop.beta)) +
        std::log(zeta2) - std::log(zeta2 + k);
    return {acc.value(), hop.lambda > k};
}

MomentValue moment(const LinkParams& link, double k) {
    link.validate();
    if (k < 0.0) throw std::invalid_argument("moment: k must be >= 0");
    if (k == 0.0) return {1.0, true};
    // Mellin transform of the product density evaluated at s = k+1, written
    // with the same constant table the density uses
    const MomentTable t = make_constant_table(link);
    const HopParams& s = link.hop_s;
    const HopParams& r = link.hop_r;
    SignedLog acc;
    for (double b : t.r_row) acc.mul(b + k);          // zeta^2, alpha, beta rows
    acc.mul(s.lambda - k);
    acc.mul(r.lambda - k);
    acc.div(1.0 + s.zeta * s.zeta + k);
    acc.div(1.0 + r.zeta * r.zeta + k);
    acc.log_abs += std::log(t.lambda6) + std::log(t.lambda7) -
                   k * (std::log(t.lambda8) + std::log(t.lambda9));
    return {acc.value(), s.lambda > k && r.lambda > k};
}

MatchedGamma match_gamma(const LinkParams& link,
                         bool allow_analytic_continuation) {
    link.validate();
    const MomentValue m1 = moment(link, 1.0);
    const MomentValue m2 = moment(link, 2.0);
    if (!m2.is_true_moment && !allow_analytic_continuation)
        throw std::invalid_argument(
            "match_gamma: the second product moment requires lambda > 2 on "
            "both hops; pass allow_analytic_continuation to use the "
            "signed-Gamma continuation");
    const double var = m2.value - m1.value * m1.value;
    if (!(var > 0.0))
        throw std::runtime_error(
            "match_gamma: moment matching undefined for this turbulence "
            "regime (non-positive variance " +
            std::to_string(var) + ")");
    MatchedGamma g;
    g.mean_m = m1.value;
    g.var_m = var;
    g.shape_l = link.n_elements * m1.value * m1.value / var;
    g.scale_k = var / m1.value;
    g.lambda2 = g.mean_m / g.scale_k;
    g.lambda1 = std::exp(g.shape_l * std::log(g.lambda2) -
                         log_gamma(g.shape_l));
    const int r = link.detection;
    g.lambda3 = g.lambda1 / std::pow(kTwoPi, 0.5 * (r - 1));
    g.lambda4 = std::pow(g.lambda2 / r, r);
    g.analytic_continuation = !m2.is_true_moment;
    const double lam4_check = std::pow(g.lambda2, r) / std::pow(r, r);
    if (std::abs(lam4_check - g.lambda4) > 1e-12 * std::abs(g.lambda4))
        throw std::runtime_error("match_gamma: constant table inconsistency");
    return g;
}

MomentTable make_moment_table(const LinkParams& link) {
    link.validate();
    MomentTable t = make_constant_table(link);
    const MomentValue m1 = moment(link, 1.0);
    const MomentValue m2 = moment(link, 2.0);
    t.mean_m = m1.value;
    t.second_m = m2.value;
    t.mean_valid = m1.is_true_moment;
    t.second_valid = m2.is_true_moment;
    return t;
}

double igg_pdf(const HopParams& hop, double x) {
    check_hop(hop);
    if (!(x > 0.0)) throw std::domain_error("igg_pdf: x must be positive");
    MeijerSpec spec;
    spec.m = 2;
    spec.n = 1;
    spec.a = {1.0 - hop.lambda};
    spec.b = {hop.alpha, hop.beta};
    spec.z = hop.alpha * hop.beta * x / (hop.lambda - 1.0);
    const double lambda5 = std::exp(-log_gamma(hop.alpha) -
                                    log_gamma(hop.beta) -
                                    log_gamma(hop.lambda));
    return std::max(0.0, lambda5 / x * meijer_g(spec));
}

double pointing_pdf(const HopParams& hop, double i) {
    check_hop(hop);
    const double A = hop.pointing_loss_A;
    if (i <= 0.0 || i > A) return 0.0;
    const double z2 = hop.zeta * hop.zeta;
    return z2 / std::pow(A, z2) * std::pow(i, z2 - 1.0);
}

double composite_pdf(const HopParams& hop, double i) {
    check_hop(hop);
    if (!(i > 0.0)) throw std::domain_error("composite_pdf: i must be positive");
    const double z2 = hop.zeta * hop.zeta;
    MeijerSpec spec;
    spec.m = 3;
    spec.n = 1;
    spec.a = {1.0 - hop.lambda, 1.0 + z2};
    spec.b = {z2, hop.alpha, hop.beta};
    spec.z = hop.alpha * hop.beta * i /
             ((hop.lambda - 1.0) * hop.pointing_loss_A);
    const double lambda5 = std::exp(-log_gamma(hop.alpha) -
                                    log_gamma(hop.beta) -
                                    log_gamma(hop.lambda));
    return std::max(0.0, lambda5 * z2 / i * meijer_g(spec));
}

double product_pdf(const LinkParams& link, double i) {
    if (!(i > 0.0)) throw std::domain_error("product_pdf: i must be positive");
    const MomentTable t = make_moment_table(link);
    MeijerSpec spec;
    spec.m = 6;
    spec.n = 2;
    spec.a = t.p_row;
    spec.b = t.r_row;
    spec.z = t.lambda8 * t.lambda9 * i;
    return std::max(0.0, t.lambda6 * t.lambda7 / i * meijer_g(spec));
}

double snr_pdf(const LinkParams& link, const MatchedGamma& mg, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("snr_pdf: gamma must be positive");
    const int r = link.detection;
    const double mu = link.mu_linear();
    const double lr = mg.shape_l / r;
    return mg.lambda1 / (r * std::pow(mu, lr)) * std::pow(gamma, lr - 1.0) *
           std::exp(-mg.lambda2 * std::pow(gamma / mu, 1.0 / r));
}

double snr_cdf(const LinkParams& link, const MatchedGamma& mg, double gamma) {
    if (gamma < 0.0) throw std::domain_error("snr_cdf: gamma must be >= 0");
    if (gamma == 0.0) return 0.0;
    const int r = link.detection;
    const double mu = link.mu_linear();
    const double lr = mg.shape_l / r;
    MeijerSpec spec;
    spec.m = r;
    spec.n = 1;
    spec.a = {1.0 - lr};
    spec.b.reserve(r + 1);
    for (int j = 0; j < r; ++j) spec.b.push_back(static_cast<double>(j) / r);
    spec.b.push_back(-lr);
    spec.z = mg.lambda4 * gamma / mu;
    const double pre = mg.lambda3 / std::sqrt(static_cast<double>(r)) *
                       std::pow(gamma / mu, lr);
    const double v = pre * meijer_g(spec);
    return std::min(1.0, std::max(0.0, v));
}

double snr_pdf(const LinkParams& link, double gamma) {
    return snr_pdf(link, match_gamma(link), gamma);
}

double snr_cdf(const LinkParams& link, double gamma) {
    return snr_cdf(link, match_gamma(link), gamma);
}

}  // namespace fsoris
