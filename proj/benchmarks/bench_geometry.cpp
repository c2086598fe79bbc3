#include <benchmark/benchmark.h>

#include <vector>

#include "shadowtrack/geometry.hpp"
#include "shadowtrack/rng.hpp"
#include "world.hpp"

using namespace shadowtrack;
using geometry::Point2D;

namespace {

std::vector<Point2D> random_points(std::size_t n, double spread, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2D> out(n);
  for (Point2D& p : out) p = {rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
  return out;
}

void BM_IsLos(benchmark::State& state) {
  const auto& world = bench::default_scenario().world;
  const auto pts = random_points(4096, 1900, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(world.is_los(pts[i++ & 4095]));
  }
}
BENCHMARK(BM_IsLos);

void BM_ConvexHull(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 100, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometry::convex_hull(pts));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

void BM_CastShadow(benchmark::State& state) {
  const auto& world = bench::default_scenario().world;
  for (auto _ : state) {
    for (const auto& obstacle : world.obstacles()) {
      benchmark::DoNotOptimize(geometry::cast_shadow(obstacle, world.sensor(), world.boundary()));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(world.obstacles().size()));
}
BENCHMARK(BM_CastShadow);

}  // namespace
