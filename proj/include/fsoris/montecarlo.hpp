#pragma once

#include <array>
#include <cstdint>

#include "fsoris/metrics.hpp"

namespace fsoris {

// Philox4x64-10 with the Random123 reference constants. Pure function of
// (counter, key); every random draw in this module is addressed by an
// explicit counter, which is what makes parallel and serial execution
// bit-identical.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// 53-bit mantissa-uniform in [0, 1); matches (word >> 11) * 2^-53.
double uniform_from_word(std::uint64_t word);

// One logical draw sequence at a fixed (seed, stream_class, lane, sample)
// coordinate. Counter layout: {block_within_stream, lane, sample_index, 0};
// key: {seed, stream_class}. Distinct coordinates never share a block, so
// streams built for different samples/lanes are independent regardless of
// construction order.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_class,
                 std::uint64_t lane, std::uint64_t sample_index);

    double next_uniform();
    // Box-Muller pair, second value cached; stream-stable unlike ziggurat.
    double next_normal();
    // Marsaglia-Tsang squeeze-rejection; shape < 1 via the boost
    // gamma(shape+1) * U^{1/shape}.
    double next_gamma(double shape);

private:
    std::uint64_t next_word();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    unsigned pos_ = 4;
    double pending_normal_ = 0.0;
    bool has_pending_normal_ = false;
};

// exact: per-element product of hop draws (two turbulence gammas, one
// inverted gamma, one pointing-loss power law per hop). matched: single
// gamma draw from the moment-matched aggregate.
enum class SampleMode { exact, matched };

// serial is the reference path; parallel must reproduce it bit for bit.
enum class Execution { parallel, serial };

struct SimConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    SampleMode mode = SampleMode::matched;
    // Samples per batch; standard error comes from the spread of batch
    // means, so the batch count is floored at 30 (shrinking batches) when
    // n_samples is small.
    std::uint64_t batch_size = 10'000;
    // Matched mode with a strong-turbulence hop needs the continued
    // second moment; rejected with an exception unless set.
    bool allow_analytic_continuation = false;
};

struct EstimateWithError {
    double estimate = 0.0;
    double std_error = 0.0;
    // n_batches * batch size actually simulated (>= n_samples requested).
    std::uint64_t n_effective = 0;
    std::uint64_t n_batches = 0;
};

// Single composite hop gain draw: (G_a/alpha) (G_b/beta) ((lambda-1)/G_l)
// times A U^{1/zeta^2}.
double sample_hop(const HopParams& hop, RandomStream& rs);

// One end-to-end SNR draw at a given sample index. link_slot keeps the
// destination (0) and eavesdropper (1) draws of the same sample on disjoint
// lanes. Exact mode reads only mg.mean_m (the per-element product mean);
// matched mode additionally uses mg.shape_l and mg.lambda2.
double sample_snr(const LinkParams& link, const MatchedGamma& mg,
                  SampleMode mode, std::uint64_t seed, std::uint64_t sample_index,
                  unsigned link_slot = 0);

EstimateWithError estimate_op(const LinkParams& link, double gamma_th,
                              const SimConfig& cfg,
                              Execution exec = Execution::parallel);

EstimateWithError estimate_aber(const LinkParams& link,
                                const ModulationParams& mod,
                                const SimConfig& cfg,
                                Execution exec = Execution::parallel);

EstimateWithError estimate_acc(const LinkParams& link, const SimConfig& cfg,
                               Execution exec = Execution::parallel);

EstimateWithError estimate_asc(const SecrecyScenario& sc, const SimConfig& cfg,
                               Execution exec = Execution::parallel);

// Lower-bound event gamma_d <= psi gamma_e by default; exact_threshold adds
// the psi - 1 offset (the variant with no analytic counterpart).
EstimateWithError estimate_sop(const SecrecyScenario& sc, const SimConfig& cfg,
                               bool exact_threshold = false,
                               Execution exec = Execution::parallel);

}  // namespace fsoris
