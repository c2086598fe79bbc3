#include <benchmark/benchmark.h>

#include <vector>

#include "shadowtrack/metrics.hpp"
#include "shadowtrack/rng.hpp"

using namespace shadowtrack;

namespace {

void BM_Ospa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<geometry::Point2D> x(n), y(n + 1);
  for (auto& p : x) p = {rng.uniform(-50, 50), rng.uniform(-50, 50)};
  for (auto& p : y) p = {rng.uniform(-50, 50), rng.uniform(-50, 50)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::ospa(x, y, {100.0, 1.0}));
  }
}
BENCHMARK(BM_Ospa)->DenseRange(0, 4);

}  // namespace
