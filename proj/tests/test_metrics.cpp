#include "fsoris/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fsoris/channel.hpp"

using fsoris::LinkParams;
using fsoris::MetricOptions;
using fsoris::MetricResult;
using fsoris::ModulationParams;
using fsoris::SecrecyScenario;

namespace {

LinkParams moderate_link(int detection = 1, double mu_db = 30.0) {
    LinkParams link;
    link.hop_s = fsoris::make_hop(5.52, 2.34);
    link.hop_r = fsoris::make_hop(5.52, 2.34);
    link.n_elements = 2;
    link.detection = detection;
    link.mu_r_db = mu_db;
    return link;
}

LinkParams strong_link(int detection = 1, double mu_db = 30.0) {
    LinkParams link = moderate_link(detection, mu_db);
    link.hop_s = fsoris::make_hop(3.43, 1.43);
    link.hop_r = fsoris::make_hop(3.43, 1.43);
    return link;
}

SecrecyScenario wiretap(int detection, double mu_d_db, double mu_e_db = 30.0) {
    return fsoris::make_scenario(moderate_link(detection, mu_d_db),
                                 strong_link(detection, mu_e_db), 0.1);
}

MetricOptions with_refs(bool continuation = false) {
    MetricOptions opts;
    opts.with_quadrature_ref = true;
    opts.allow_analytic_continuation = continuation;
    return opts;
}

// capacity and secrecy-capacity prefactor 1 / (2 ln 2)
constexpr double kHalfLog2Inv = 0.72134752044448170;

}  // namespace

TEST_CASE("outage probability equals the matched-gamma CDF") {
    for (int r : {1, 2}) {
        CAPTURE(r);
        LinkParams link = moderate_link(r, 10.0);
        fsoris::MatchedGamma g = fsoris::match_gamma(link);
        for (double gamma_th : {0.25, 1.0, 7.5}) {
            CAPTURE(gamma_th);
            MetricResult op = fsoris::outage_probability(link, gamma_th);
            CHECK(op.closed_form ==
                  doctest::Approx(fsoris::snr_cdf(link, g, gamma_th))
                      .epsilon(1e-13));
            CHECK_FALSE(op.asymptotic.has_value());
            CHECK_FALSE(op.quadrature_ref.has_value());
        }
    }
    CHECK_THROWS_AS(fsoris::outage_probability(moderate_link(), -1.0),
                    std::domain_error);
}

TEST_CASE("outage probability against the density quadrature reference") {
    for (int r : {1, 2}) {
        CAPTURE(r);
        LinkParams link = moderate_link(r, 10.0);
        MetricResult op = fsoris::outage_probability(link, 1.0, with_refs());
        REQUIRE(op.quadrature_ref.has_value());
        CHECK(op.closed_form ==
              doctest::Approx(*op.quadrature_ref).epsilon(1e-8));
    }
}

TEST_CASE("average BER against frozen references, both detection orders") {
    // 20 dB moderate link; modulation pairs cover coherent, noncoherent and
    // a p > 1 constellation
    struct Row {
        int r;
        double p, q, ber;
    };
    const Row rows[] = {
        {1, 1.0, 1.0, 0.1645509109},  {1, 0.5, 0.5, 0.1526311409},
        {1, 2.0, 0.25, 0.2355224568}, {2, 1.0, 1.0, 0.2424465496},
        {2, 0.5, 0.5, 0.2318180536},  {2, 2.0, 0.25, 0.2903855316},
    };
    for (const Row& row : rows) {
        CAPTURE(row.r);
        CAPTURE(row.p);
        LinkParams link = moderate_link(row.r, 20.0);
        ModulationParams mod;
        mod.p = row.p;
        mod.q = row.q;
        MetricResult ber = fsoris::average_ber(link, mod, with_refs());
        CHECK(ber.closed_form == doctest::Approx(row.ber).epsilon(1e-8));
        REQUIRE(ber.quadrature_ref.has_value());
        CHECK(ber.closed_form ==
              doctest::Approx(*ber.quadrature_ref).epsilon(1e-7));
    }
}

TEST_CASE("average BER rejects bad modulation constants and stays in range") {
    LinkParams link = moderate_link();
    ModulationParams bad;
    bad.p = 0.0;
    CHECK_THROWS_AS(fsoris::average_ber(link, bad, {}), std::invalid_argument);
    bad.p = 1.0;
    bad.q = -2.0;
    CHECK_THROWS_AS(fsoris::average_ber(link, bad, {}), std::invalid_argument);

    // deep-fade regime: the closed form must stay clamped to [0, 1/2]
    MetricResult ber = fsoris::average_ber(moderate_link(1, -30.0), {}, {});
    CHECK(ber.closed_form <= 0.5);
    CHECK(ber.closed_form >= 0.4);
}

TEST_CASE("average capacity against frozen references") {
    struct Row {
        int r;
        double mu_db, acc;
    };
    const Row rows[] = {
        {1, 10.0, 1.045680273},
        {1, 30.0, 3.123679818},
        {2, 10.0, 1.217446377},
        {2, 30.0, 2.839627778},
    };
    for (const Row& row : rows) {
        CAPTURE(row.r);
        CAPTURE(row.mu_db);
        LinkParams link = moderate_link(row.r, row.mu_db);
        MetricResult acc = fsoris::average_capacity(link, with_refs());
        CHECK(acc.closed_form == doctest::Approx(row.acc).epsilon(1e-8));
        REQUIRE(acc.quadrature_ref.has_value());
        CHECK(acc.closed_form ==
              doctest::Approx(*acc.quadrature_ref).epsilon(1e-7));
    }
}

TEST_CASE("secrecy outage against frozen references") {
    // moderate main link, strong eavesdropper at 30 dB, tau_s = 0.1; the
    // eavesdropper needs the signed-gamma continuation
    struct Row {
        int r;
        double mu_d_db, sop;
    };
    const Row rows[] = {
        {1, 10.0, 0.9582130843}, {1, 30.0, 0.6875184201},
        {1, 40.0, 0.4921532518}, {2, 10.0, 0.8682717326},
        {2, 30.0, 0.6843724854},
    };
    for (const Row& row : rows) {
        CAPTURE(row.r);
        CAPTURE(row.mu_d_db);
        SecrecyScenario sc = wiretap(row.r, row.mu_d_db);
        MetricResult sop =
            fsoris::secrecy_outage_probability(sc, with_refs(true));
        CHECK(sop.closed_form == doctest::Approx(row.sop).epsilon(1e-8));
        CHECK(sop.analytic_continuation);
        REQUIRE(sop.quadrature_ref.has_value());
        CHECK(sop.closed_form ==
              doctest::Approx(*sop.quadrature_ref).epsilon(1e-7));
    }
}

TEST_CASE("secrecy outage is one half for identical links at zero rate") {
    for (int r : {1, 2}) {
        CAPTURE(r);
        SecrecyScenario sc = fsoris::make_scenario(moderate_link(r, 20.0),
                                                   moderate_link(r, 20.0), 0.0);
        CHECK(sc.psi == 1.0);
        MetricResult sop = fsoris::secrecy_outage_probability(sc, {});
        CHECK(sop.closed_form == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("average secrecy capacity against frozen references") {
    // references frozen from the direct integral of F_e (1 - F_d) / (1 + x),
    // scaled by 1 / (2 ln 2)
    struct Row {
        int r;
        double mu_d_db, raw;
    };
    const Row rows[] = {
        {1, 10.0, 0.06162814416},
        {1, 30.0, 0.7425787356},
        {1, 40.0, 1.703881599},
        {2, 20.0, 0.7049229945},
    };
    for (const Row& row : rows) {
        CAPTURE(row.r);
        CAPTURE(row.mu_d_db);
        SecrecyScenario sc = wiretap(row.r, row.mu_d_db);
        MetricResult asc = fsoris::average_secrecy_capacity(sc, with_refs(true));
        CHECK(asc.closed_form ==
              doctest::Approx(row.raw * kHalfLog2Inv).epsilon(1e-7));
        REQUIRE(asc.quadrature_ref.has_value());
        CHECK(asc.closed_form ==
              doctest::Approx(*asc.quadrature_ref).epsilon(1e-6));
        // the moderate/strong pairing converges through the double series
        CHECK_FALSE(asc.bivariate_unsupported);
        CHECK(asc.diagnostic.empty());
    }
}

TEST_CASE("secrecy capacity never goes negative") {
    // eavesdropper far stronger than the main link: the raw difference of
    // capacities is tiny and the clamp keeps the result physical
    SecrecyScenario sc = wiretap(1, -20.0, 40.0);
    MetricOptions opts;
    opts.allow_analytic_continuation = true;
    MetricResult asc = fsoris::average_secrecy_capacity(sc, opts);
    CHECK(asc.closed_form >= 0.0);
    CHECK(asc.closed_form < 1e-3);
}

TEST_CASE("asymptotics close onto the exact forms at high SNR") {
    const ModulationParams ook;
    for (int r : {1, 2}) {
        CAPTURE(r);
        double prev_op = 1.0, prev_ber = 1.0;
        for (double mu_db : {50.0, 60.0, 70.0, 80.0}) {
            CAPTURE(mu_db);
            LinkParams link = moderate_link(r, mu_db);
            const double op = fsoris::outage_probability(link, 1.0).closed_form;
            const double op_a = fsoris::outage_probability_asymptotic(link, 1.0);
            const double rel_op = std::abs(op_a / op - 1.0);
            CHECK(rel_op < prev_op + 1e-12);
            prev_op = rel_op;

            const double ber = fsoris::average_ber(link, ook, {}).closed_form;
            const double ber_a = fsoris::average_ber_asymptotic(link, ook);
            const double rel_ber = std::abs(ber_a / ber - 1.0);
            CHECK(rel_ber < prev_ber + 1e-12);
            prev_ber = rel_ber;

            if (mu_db == 80.0) {
                CHECK(rel_op < 1e-4);
                CHECK(rel_ber < 1e-4);
                const double acc = fsoris::average_capacity(link, {}).closed_form;
                CHECK(fsoris::average_capacity_asymptotic(link) ==
                      doctest::Approx(acc).epsilon(1e-4));
                SecrecyScenario sc = wiretap(r, mu_db);
                MetricOptions opts;
                opts.allow_analytic_continuation = true;
                const double sop =
                    fsoris::secrecy_outage_probability(sc, opts).closed_form;
                CHECK(fsoris::secrecy_outage_asymptotic(sc) ==
                      doctest::Approx(sop).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("outage asymptote matches the hand-derived r = 1 power law") {
    // for r = 1 the leading residue collapses to (L2 g / mu)^l / Gamma(l + 1)
    LinkParams link = moderate_link(1, 60.0);
    fsoris::MatchedGamma g = fsoris::match_gamma(link);
    const double gamma_th = 2.0;
    const double direct =
        std::pow(g.lambda2 * gamma_th / link.mu_linear(), g.shape_l) /
        std::tgamma(g.shape_l + 1.0);
    CHECK(fsoris::outage_probability_asymptotic(link, gamma_th) ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("requested extras are attached and omitted on demand") {
    LinkParams link = moderate_link(1, 40.0);
    MetricOptions opts;
    opts.with_asymptotic = true;
    MetricResult op = fsoris::outage_probability(link, 1.0, opts);
    REQUIRE(op.asymptotic.has_value());
    CHECK(*op.asymptotic ==
          doctest::Approx(fsoris::outage_probability_asymptotic(link, 1.0))
              .epsilon(1e-14));
    CHECK_FALSE(op.quadrature_ref.has_value());
}

TEST_CASE("strong turbulence requires the continuation opt-in") {
    LinkParams link = strong_link(1, 20.0);
    CHECK_THROWS_AS(fsoris::outage_probability(link, 1.0, {}),
                    std::invalid_argument);
    MetricOptions opts;
    opts.allow_analytic_continuation = true;
    MetricResult op = fsoris::outage_probability(link, 1.0, opts);
    CHECK(op.analytic_continuation);
    CHECK(op.closed_form > 0.0);
    CHECK(op.closed_form < 1.0);

    // the standalone asymptotics continue implicitly: the high-SNR slope is
    // set by the matched shape regardless of how it was obtained
    CHECK_NOTHROW(fsoris::outage_probability_asymptotic(strong_link(1, 60.0), 1.0));
}

TEST_CASE("secrecy scenarios validate their inputs") {
    CHECK_THROWS_AS(
        fsoris::make_scenario(moderate_link(1), strong_link(1), -0.1),
        std::invalid_argument);
    CHECK_THROWS_AS(
        fsoris::make_scenario(moderate_link(1), strong_link(2), 0.1),
        std::invalid_argument);

    SecrecyScenario sc = fsoris::make_scenario(moderate_link(1), strong_link(1));
    CHECK(sc.psi == doctest::Approx(std::exp2(0.1)).epsilon(1e-15));
    CHECK_THROWS_AS(fsoris::secrecy_outage_probability(sc, {}),
                    std::invalid_argument);  // strong side needs the opt-in
}

TEST_CASE("metric trends move the physical way") {
    // outage falls and capacity grows with SNR; secrecy outage falls as the
    // main link outpaces the eavesdropper; secrecy capacity grows
    double prev_op = 2.0, prev_acc = -1.0, prev_sop = 2.0, prev_asc = -1.0;
    MetricOptions opts;
    opts.allow_analytic_continuation = true;
    for (double mu_db : {5.0, 15.0, 25.0, 35.0}) {
        CAPTURE(mu_db);
        LinkParams link = moderate_link(2, mu_db);
        const double op = fsoris::outage_probability(link, 1.0).closed_form;
        CHECK(op < prev_op);
        prev_op = op;
        const double acc = fsoris::average_capacity(link, {}).closed_form;
        CHECK(acc > prev_acc);
        prev_acc = acc;
        SecrecyScenario sc = wiretap(2, mu_db);
        const double sop =
            fsoris::secrecy_outage_probability(sc, opts).closed_form;
        CHECK(sop < prev_sop);
        CHECK(sop <= 1.0);
        prev_sop = sop;
        const double asc =
            fsoris::average_secrecy_capacity(sc, opts).closed_form;
        CHECK(asc > prev_asc);
        prev_asc = asc;
    }

    // more reflecting elements help every metric
    LinkParams small = moderate_link(1, 15.0);
    LinkParams large = small;
    large.n_elements = 6;
    CHECK(fsoris::outage_probability(large, 1.0).closed_form <
          fsoris::outage_probability(small, 1.0).closed_form);
    CHECK(fsoris::average_capacity(large, {}).closed_form >
          fsoris::average_capacity(small, {}).closed_form);
}
