#include <benchmark/benchmark.h>

#include "supertrace/builtins.hpp"
#include "supertrace/characterization.hpp"
#include "supertrace/invariants.hpp"

namespace {

using namespace supertrace;

void BM_ShannonExactCheck(benchmark::State& state) {
  const WaveletSystem w = builtin_system("shannon", state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_super_wavelet(w));
}
BENCHMARK(BM_ShannonExactCheck)->Arg(2)->Arg(3)->Arg(5);

void BM_OversampledCheck(benchmark::State& state) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_super_wavelet(w));
}
BENCHMARK(BM_OversampledCheck)->Arg(3)->Arg(5)->Arg(7);

void BM_GridCheck(benchmark::State& state) {
  const WaveletSystem w = builtin_system("shannon");
  CheckOptions opts;
  opts.mode = Mode::Grid;
  opts.grid_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_super_wavelet(w, opts));
}
BENCHMARK(BM_GridCheck)->Arg(256)->Arg(1024);

void BM_FiberEvaluation(benchmark::State& state) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  const auto points = grid_points(RationalPi(-1, 1), RationalPi(1, 1), 64);
  for (auto _ : state) {
    for (const auto& xi : points) benchmark::DoNotOptimize(fiber(w.psis()[0], w.structure(), xi));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(points.size()));
}
BENCHMARK(BM_FiberEvaluation);

void BM_WaveletDimension(benchmark::State& state) {
  const WaveletSystem w = builtin_system("shannon");
  const auto points = grid_points(RationalPi(-1, 1), RationalPi(1, 1), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wavelet_dimension_function(w, points));
}
BENCHMARK(BM_WaveletDimension)->Arg(16)->Arg(128);

void BM_DimensionFunction(benchmark::State& state) {
  const WaveletSystem w = oversample({shannon_spectrum()}, 2, 3);
  const SISpace v(w.psis());
  for (auto _ : state) benchmark::DoNotOptimize(dimension_function(v, w.structure()));
}
BENCHMARK(BM_DimensionFunction);

}  // namespace

BENCHMARK_MAIN();
