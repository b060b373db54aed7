#include <benchmark/benchmark.h>

#include <omp.h>

#include "tubeband/sim.hpp"

using namespace tubeband;

namespace {

SimConfig bench_config(benchmark::State& state) {
    SimConfig cfg;
    cfg.n = static_cast<std::size_t>(state.range(0));
    cfg.reps = static_cast<int>(state.range(1));
    cfg.seed = 7;
    return cfg;
}

void BM_RunSerial(benchmark::State& state) {
    const auto cfg = bench_config(state);
    for (auto _ : state) benchmark::DoNotOptimize(run_serial(cfg));
    state.SetItemsProcessed(state.iterations() * cfg.reps);
}

void BM_RunOpenMP(benchmark::State& state) {
    auto cfg = bench_config(state);
    cfg.workers = static_cast<int>(state.range(2));
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
    state.SetItemsProcessed(state.iterations() * cfg.reps);
    state.counters["workers"] = cfg.workers;
}

void openmp_args(benchmark::internal::Benchmark* b) {
    const int hw = omp_get_num_procs();
    for (long n : {100, 500}) {
        for (int w = 1; w <= hw; w *= 2) b->Args({n, 24, w});
        if ((hw & (hw - 1)) != 0) b->Args({n, 24, hw});
    }
}

}  // namespace

BENCHMARK(BM_RunSerial)->Args({100, 24})->Args({500, 24})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunOpenMP)->Apply(openmp_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
