#include <benchmark/benchmark.h>

#include <cmath>

#include "symdyn/counterexample.hpp"
#include "symdyn/entropydim.hpp"
#include "symdyn/metricspace.hpp"
#include "symdyn/netgraph.hpp"
#include "symdyn/symsys.hpp"

using namespace symdyn;

namespace {

void BM_BallZ3(benchmark::State& state) {
  const auto g = cayley_zd(3);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(in_ball(*g, VertexId{0, 0, 0}, r).members.size());
  state.SetComplexityN(r);
}
BENCHMARK(BM_BallZ3)->RangeMultiplier(2)->Range(8, 64)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

void BM_PanoramaFullShift(benchmark::State& state) {
  const auto sys = full_shift(2, 0, 1);
  const auto space = full_space(2);
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(panorama(*sys, space, {VertexId(0)}, T).cone.size());
}
BENCHMARK(BM_PanoramaFullShift)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_PanoramaCounterexample(benchmark::State& state) {
  const auto sys = cex_rules();
  const auto space = cex_space();
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(panorama(*sys, space, {VertexId(0)}, T).cone.size());
}
BENCHMARK(BM_PanoramaCounterexample)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_CexRoundtrip(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cex_roundtrip(J, 20, 1).passed);
}
BENCHMARK(BM_CexRoundtrip)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

void BM_MetricDimZ2(benchmark::State& state) {
  const auto m = single_estuary_metric(cayley_zd(2), VertexId{0, 0}, 2);
  std::vector<double> grid;
  for (int k = 8; k <= 32; ++k) grid.push_back(std::ldexp(1.0, -k));
  for (auto _ : state) benchmark::DoNotOptimize(metric_dim_estimate(full_space(2), m, grid).upper_slope);
}
BENCHMARK(BM_MetricDimZ2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
