#include <benchmark/benchmark.h>

#include "shadowtrack/filter.hpp"
#include "shadowtrack/harness.hpp"
#include "world.hpp"

using namespace shadowtrack;

namespace {

// One filter step at the default particle budget, fed the same scan each time
// after a short burn-in so the track is established.
void BM_FilterStep(benchmark::State& state) {
  const auto& s = bench::default_scenario();
  const bool geo = state.range(0) != 0;
  filter::TrackerConfig cfg{s.config.motion, s.config.sensor_params, s.world.sensor(), s.config.filter_params};
  const auto scans = harness::simulate_scans(s, s.config.seed);
  Rng rng(5);
  filter::BernoulliState post;
  for (int k = 0; k < 5; ++k) post = filter::step(post, scans[k].measurements, geo ? &s.world : nullptr, cfg, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(filter::step(post, scans[5].measurements, geo ? &s.world : nullptr, cfg, rng));
  }
}
BENCHMARK(BM_FilterStep)->Arg(0)->Arg(1)->ArgName("geo")->Unit(benchmark::kMillisecond);

void BM_PairedRun(benchmark::State& state) {
  const auto& s = bench::default_scenario();
  std::uint64_t seed = s.config.seed;
  for (auto _ : state) {
    benchmark::DoNotOptimize(harness::run_paired(s, seed++));
  }
}
BENCHMARK(BM_PairedRun)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
