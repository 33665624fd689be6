#include "fsoris/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsoris/incomplete_gamma.hpp"

namespace fsoris {

namespace {

// Random123 reference constants for Philox4x64.
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHalfLog2Inv = 0.72134752044448170367996234050095;  // 1/(2 ln 2)

inline void mul_hi_lo(std::uint64_t a, std::uint64_t b,
                      std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

// Disjoint lanes for every (link, element, hop) triple of one sample.
inline std::uint64_t make_lane(unsigned link_slot, unsigned element, unsigned hop) {
    return (static_cast<std::uint64_t>(link_slot) << 40) |
           (static_cast<std::uint64_t>(element) << 1) |
           static_cast<std::uint64_t>(hop);
}

// Exact mode only reads mean_m, so it must not depend on whether the
// second moment needs analytic continuation.
MatchedGamma sampler_context(const LinkParams& link,
                                      const SimConfig& cfg) {
    if (cfg.mode == SampleMode::matched) {
        return match_gamma(link, cfg.allow_analytic_continuation);
    }
    MatchedGamma mg{};
    mg.mean_m = moment(link, 1.0).value;
    return mg;
}

// Batch-mean driver. Every batch is an independent unit of work addressed
// by its sample-index range, so the parallel schedule cannot change any
// bit of the result; the cross-batch reduction is fixed-order either way.
template <typename PerSample>
EstimateWithError run_batches(const SimConfig& cfg, Execution exec, PerSample&& per_sample) {
    if (cfg.n_samples == 0) {
        throw std::invalid_argument("run_batches: n_samples must be positive");
    }
    std::uint64_t batch = cfg.batch_size > 0 ? cfg.batch_size : 1;
    std::uint64_t n_batches = (cfg.n_samples + batch - 1) / batch;
    if (n_batches < 30) {
        batch = (cfg.n_samples + 29) / 30;
        n_batches = (cfg.n_samples + batch - 1) / batch;
    }

    std::vector<double> batch_means(n_batches, 0.0);
    const auto run_one = [&](std::uint64_t b) {
        double sum = 0.0;
        double comp = 0.0;
        const std::uint64_t first = b * batch;
        for (std::uint64_t s = first; s < first + batch; ++s) {
            const double y = per_sample(s) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        batch_means[b] = sum / static_cast<double>(batch);
    };

    if (exec == Execution::parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
        for (long long b = 0; b < static_cast<long long>(n_batches); ++b) {
            run_one(static_cast<std::uint64_t>(b));
        }
    } else {
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            run_one(b);
        }
    }

    double mean = 0.0;
    double comp = 0.0;
    for (const double m : batch_means) {
        const double y = m - comp;
        const double t = mean + y;
        comp = (t - mean) - y;
        mean = t;
    }
    mean /= static_cast<double>(n_batches);

    double ss = 0.0;
    for (const double m : batch_means) {
        const double d = m - mean;
        ss += d * d;
    }
    const double se =
        n_batches > 1
            ? std::sqrt(ss / static_cast<double>(n_batches - 1) / static_cast<double>(n_batches))
            : 0.0;

    EstimateWithError out;
    out.estimate = mean;
    out.std_error = se;
    out.n_effective = n_batches * batch;
    out.n_batches = n_batches;
    return out;
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key[0];
    std::uint64_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kMul0, c[0], hi0, lo0);
        mul_hi_lo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

double uniform_from_word(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_class,
                           std::uint64_t lane, std::uint64_t sample_index)
    : key_{seed, stream_class}, counter_{0, lane, sample_index, 0} {}

std::uint64_t RandomStream::next_word() {
    if (pos_ == 4) {
        block_ = philox4x64(counter_, key_);
        pos_ = 0;
        if (++counter_[0] == 0) {
            ++counter_[3];  // never reached in practice; keeps blocks unique
        }
    }
    return block_[pos_++];
}

double RandomStream::next_uniform() { return uniform_from_word(next_word()); }

double RandomStream::next_normal() {
    if (has_pending_normal_) {
        has_pending_normal_ = false;
        return pending_normal_;
    }
    double u1 = next_uniform();
    if (u1 == 0.0) {
        u1 = 0x1.0p-53;  // log argument must stay positive
    }
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    pending_normal_ = radius * std::sin(kTwoPi * u2);
    has_pending_normal_ = true;
    return radius * std::cos(kTwoPi * u2);
}

double RandomStream::next_gamma(double shape) {
    if (!(shape > 0.0)) {
        throw std::invalid_argument("next_gamma: shape must be positive");
    }
    if (shape < 1.0) {
        const double boosted = next_gamma(shape + 1.0);
        return boosted * std::pow(next_uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (u > 0.0 && std::log(u) < 0.5 * x2 + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

double sample_hop(const HopParams& hop, RandomStream& rs) {
    const double ga = rs.next_gamma(hop.alpha);
    const double gb = rs.next_gamma(hop.beta);
    const double gl = rs.next_gamma(hop.lambda);
    const double u = rs.next_uniform();
    const double pointing =
        hop.pointing_loss_A * std::pow(u, 1.0 / (hop.zeta * hop.zeta));
    return (ga / hop.alpha) * (gb / hop.beta) * ((hop.lambda - 1.0) / gl) * pointing;
}

double sample_snr(const LinkParams& link, const MatchedGamma& mg,
                  SampleMode mode, std::uint64_t seed, std::uint64_t sample_index,
                  unsigned link_slot) {
    const double mu = link.mu_linear();
    const double r = static_cast<double>(link.detection);
    if (mode == SampleMode::matched) {
        RandomStream rs(seed, 1, make_lane(link_slot, 0, 0), sample_index);
        const double g = rs.next_gamma(mg.shape_l);
        return mu * std::pow(g / mg.lambda2, r);
    }
    double total = 0.0;
    for (int e = 0; e < link.n_elements; ++e) {
        RandomStream rs_s(seed, 0, make_lane(link_slot, static_cast<unsigned>(e), 0),
                          sample_index);
        RandomStream rs_r(seed, 0, make_lane(link_slot, static_cast<unsigned>(e), 1),
                          sample_index);
        total += sample_hop(link.hop_s, rs_s) * sample_hop(link.hop_r, rs_r);
    }
    return mu * std::pow(total / mg.mean_m, r);
}

EstimateWithError estimate_op(const LinkParams& link, double gamma_th,
                              const SimConfig& cfg, Execution exec) {
    link.validate();
    if (!(gamma_th >= 0.0)) {
        throw std::invalid_argument("estimate_op: gamma_th must be nonnegative");
    }
    const MatchedGamma mg = sampler_context(link, cfg);
    return run_batches(cfg, exec, [&](std::uint64_t s) {
        return sample_snr(link, mg, cfg.mode, cfg.seed, s) <= gamma_th ? 1.0 : 0.0;
    });
}

EstimateWithError estimate_aber(const LinkParams& link,
                                const ModulationParams& mod,
                                const SimConfig& cfg, Execution exec) {
    link.validate();
    if (!(mod.p > 0.0) || !(mod.q > 0.0)) {
        throw std::invalid_argument("estimate_aber: modulation parameters must be positive");
    }
    const MatchedGamma mg = sampler_context(link, cfg);
    return run_batches(cfg, exec, [&](std::uint64_t s) {
        const double gamma = sample_snr(link, mg, cfg.mode, cfg.seed, s);
        return 0.5 * regularized_upper_gamma(mod.p, mod.q * gamma);
    });
}

EstimateWithError estimate_acc(const LinkParams& link, const SimConfig& cfg,
                               Execution exec) {
    link.validate();
    const MatchedGamma mg = sampler_context(link, cfg);
    return run_batches(cfg, exec, [&](std::uint64_t s) {
        return kHalfLog2Inv * std::log1p(sample_snr(link, mg, cfg.mode, cfg.seed, s));
    });
}

EstimateWithError estimate_asc(const SecrecyScenario& sc, const SimConfig& cfg,
                               Execution exec) {
    sc.link_d.validate();
    sc.link_e.validate();
    const MatchedGamma mg_d = sampler_context(sc.link_d, cfg);
    const MatchedGamma mg_e = sampler_context(sc.link_e, cfg);
    return run_batches(cfg, exec, [&](std::uint64_t s) {
        const double gd = sample_snr(sc.link_d, mg_d, cfg.mode, cfg.seed, s, 0);
        const double ge = sample_snr(sc.link_e, mg_e, cfg.mode, cfg.seed, s, 1);
        const double cs = kHalfLog2Inv * (std::log1p(gd) - std::log1p(ge));
        return cs > 0.0 ? cs : 0.0;
    });
}

EstimateWithError estimate_sop(const SecrecyScenario& sc, const SimConfig& cfg,
                               bool exact_threshold, Execution exec) {
    sc.link_d.validate();
    sc.link_e.validate();
    if (!(sc.psi >= 1.0)) {
        throw std::invalid_argument("estimate_sop: psi must be >= 1");
    }
    const MatchedGamma mg_d = sampler_context(sc.link_d, cfg);
    const MatchedGamma mg_e = sampler_context(sc.link_e, cfg);
    const double offset = exact_threshold ? sc.psi - 1.0 : 0.0;
    return run_batches(cfg, exec, [&](std::uint64_t s) {
        const double gd = sample_snr(sc.link_d, mg_d, cfg.mode, cfg.seed, s, 0);
        const double ge = sample_snr(sc.link_e, mg_e, cfg.mode, cfg.seed, s, 1);
        return gd <= sc.psi * ge + offset ? 1.0 : 0.0;
    });
}

}  // namespace fsoris
