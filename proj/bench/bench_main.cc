// Copyright 2026 The tbfalsify Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Serial reference vs OpenMP kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "tbf/bundle.h"
#include "tbf/experiment.h"
#include "tbf/sim.h"
#include "tbf/stl.h"

namespace {

using namespace tbf;

struct StlCase {
  StlFormula formula;
  Trace trace;
};

const StlCase& pacemaker_case() {
  static const StlCase c = [] {
    Bundle b = load_bundle("pacemaker", true);
    std::mt19937_64 rng(1);
    SimResult r = simulate_inputs(b.model, profile_sample(b.profile, b.model.grid(), rng));
    return StlCase{b.formula, Trace::merge(r.inputs, r.outputs)};
  }();
  return c;
}

void BM_StlSerial(benchmark::State& state) {
  const StlCase& c = pacemaker_case();
  for (auto _ : state) benchmark::DoNotOptimize(stl_signal(c.formula, c.trace, false));
}
BENCHMARK(BM_StlSerial)->Unit(benchmark::kMillisecond);

void BM_StlParallel(benchmark::State& state) {
  const StlCase& c = pacemaker_case();
  for (auto _ : state) benchmark::DoNotOptimize(stl_signal(c.formula, c.trace, true));
}
BENCHMARK(BM_StlParallel)->Unit(benchmark::kMillisecond);

SearchConfig bench_search() {
  SearchConfig c;
  c.max_iterations = 20;
  return c;
}

void BM_RepetitionsSerial(benchmark::State& state) {
  const Bundle b = load_bundle("at_lite", false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_repetitions_serial(b, parse_method("tb_uniform"), bench_search(), 4));
  }
}
BENCHMARK(BM_RepetitionsSerial)->Unit(benchmark::kMillisecond);

void BM_RepetitionsParallel(benchmark::State& state) {
  const Bundle b = load_bundle("at_lite", false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_repetitions(b, parse_method("tb_uniform"), bench_search(), 4));
  }
}
BENCHMARK(BM_RepetitionsParallel)->Unit(benchmark::kMillisecond);

void BM_Consistency(benchmark::State& state) {
  const Bundle b = load_bundle("heatpump", true);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_consistency(b, 16, 1, parallel));
}
BENCHMARK(BM_Consistency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
