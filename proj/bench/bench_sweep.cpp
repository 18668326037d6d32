// Serial reference vs OpenMP sweep on reduced default grids.

#include <benchmark/benchmark.h>

#include "sqzlab/frontier.hpp"

namespace {

sqzlab::SweepGrid reduced(sqzlab::Method m, int divisor) {
  auto grid = sqzlab::default_grid(m);
  for (auto& ax : grid.axes) ax.count = std::max(2, ax.count / divisor);
  return grid;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto grid = reduced(static_cast<sqzlab::Method>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(sqzlab::sweep_serial(grid));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto grid = reduced(static_cast<sqzlab::Method>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(sqzlab::sweep(grid, 0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void methods(benchmark::internal::Benchmark* b) {
  for (auto m : {sqzlab::Method::BeamSplitter, sqzlab::Method::OpoPhase,
                 sqzlab::Method::OpaPhase, sqzlab::Method::OmAmplitude})
    b->Arg(static_cast<int>(m));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Apply(methods)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Apply(methods)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
