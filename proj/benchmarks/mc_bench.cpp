#include <benchmark/benchmark.h>

#include "fsoris/metrics.hpp"
#include "fsoris/montecarlo.hpp"

// Throughput of the OpenMP estimator kernels against the serial reference
// path. Both produce bit-identical estimates (the unit tests pin that), so
// the only difference worth measuring is speed.

namespace {

fsoris::LinkParams bench_link() {
    fsoris::LinkParams link;
    link.hop_s = fsoris::make_hop(5.52, 2.34);
    link.hop_r = fsoris::make_hop(5.52, 2.34);
    link.n_elements = 2;
    link.detection = 1;
    link.mu_r_db = 20.0;
    return link;
}

fsoris::SimConfig bench_config() {
    fsoris::SimConfig cfg;
    cfg.n_samples = 200'000;
    cfg.seed = 42;
    cfg.mode = fsoris::SampleMode::matched;
    cfg.allow_analytic_continuation = true;
    return cfg;
}

void bench_outage(benchmark::State& state, fsoris::Execution exec) {
    const fsoris::LinkParams link = bench_link();
    const fsoris::SimConfig cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsoris::estimate_op(link, 1.0, cfg, exec));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.n_samples));
}

void bench_secrecy_outage(benchmark::State& state, fsoris::Execution exec) {
    fsoris::LinkParams link_e = bench_link();
    link_e.hop_s = fsoris::make_hop(3.43, 1.43);
    link_e.hop_r = fsoris::make_hop(3.43, 1.43);
    link_e.mu_r_db = 30.0;
    const fsoris::SecrecyScenario sc =
        fsoris::make_scenario(bench_link(), link_e, 0.1);
    const fsoris::SimConfig cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fsoris::estimate_sop(sc, cfg, /*exact_threshold=*/false, exec));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.n_samples));
}

void bench_exact_channel(benchmark::State& state, fsoris::Execution exec) {
    const fsoris::LinkParams link = bench_link();
    fsoris::SimConfig cfg = bench_config();
    cfg.mode = fsoris::SampleMode::exact;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsoris::estimate_op(link, 1.0, cfg, exec));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(cfg.n_samples));
}

}  // namespace

BENCHMARK_CAPTURE(bench_outage, parallel, fsoris::Execution::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_outage, serial, fsoris::Execution::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_secrecy_outage, parallel, fsoris::Execution::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_secrecy_outage, serial, fsoris::Execution::serial)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_exact_channel, parallel, fsoris::Execution::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bench_exact_channel, serial, fsoris::Execution::serial)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
