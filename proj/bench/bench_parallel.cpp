// Serial reference loop against the OpenMP loop on the batch kernels.

#include <benchmark/benchmark.h>

#include "wfsched/harness.hpp"

using namespace wfsched;

namespace {

SuiteOptions options(benchmark::State& state) {
  SuiteOptions o;
  o.exec = state.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial;
  o.corpus.instances = 64;
  o.corpus.max_jobs = 12;
  o.corpus.seed = 3;
  o.trials = 4000;
  return o;
}

void BM_Axioms(benchmark::State& state) {
  const SuiteOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_axioms_suite(o));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Goodness(benchmark::State& state) {
  const SuiteOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_goodness_suite(o));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Structure(benchmark::State& state) {
  const SuiteOptions o = options(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_structure_suite(o));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Competitive(benchmark::State& state) {
  SuiteOptions o = options(state);
  o.corpus.max_jobs = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_competitive_suite(o));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_Axioms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Goodness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Structure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Competitive)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
