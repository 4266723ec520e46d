// Serial reference against the OpenMP kernels. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "chorediv/simplex.hpp"

namespace {

using chorediv::SimplexMethod;
using chorediv::SimplexParams;

SimplexParams sample_params(benchmark::State& state) {
  SimplexParams p;
  p.samples = static_cast<std::uint64_t>(state.range(1));
  p.seed = 1;
  p.refine_top = 0;
  return p;
}

void BM_SampleSerial(benchmark::State& state) {
  const auto p = sample_params(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chorediv::serial::simplex_max(state.range(0), SimplexMethod::sample, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_SampleParallel(benchmark::State& state) {
  const auto p = sample_params(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chorediv::simplex_max(state.range(0), SimplexMethod::sample, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_HeatmapSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(chorediv::serial::heatmap_grid(0.002));
}

void BM_HeatmapParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(chorediv::heatmap_grid(0.002));
}

}  // namespace

BENCHMARK(BM_SampleSerial)->Args({4, 20000})->Args({7, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleParallel)->Args({4, 20000})->Args({7, 5000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HeatmapSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HeatmapParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
