#include <benchmark/benchmark.h>

#include "klab/manifolds.hpp"
#include "klab/suite.hpp"

namespace {

klab::Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? klab::Execution::serial : klab::Execution::parallel;
}

void BM_KenmotsuDefect(benchmark::State& state) {
  const klab::ThreeKenmotsuStructure s = klab::example_r5();
  const klab::SampleSet smp = klab::sample(s.chart(), 200, 8, 0);
  const klab::AlmostContactMetricStructure st = s.structure(1);
  for (auto _ : state) benchmark::DoNotOptimize(klab::check_kenmotsu(st, smp, 1e-10, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_HSum(benchmark::State& state) {
  const klab::ThreeKenmotsuStructure s = klab::example_r5();
  const klab::SampleSet smp = klab::sample(s.chart(), 500, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(klab::check_h_sum(s, smp, 1e-9, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_Suite(benchmark::State& state) {
  klab::SuiteConfig cfg;
  cfg.manifold = klab::builtin_manifold("warped_flat");
  cfg.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(klab::run_suite(cfg));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_KenmotsuDefect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Suite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
