// Copyright 2026 The RENAS Search Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial vs OpenMP: tabular oracle construction and the strategy x seed grid.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "renas/evaluators.h"
#include "renas/harness.h"

namespace renas {
namespace {

void BM_TabularBuild(benchmark::State& state) {
  const auto exec = state.range(0) ? Execution::kParallel : Execution::kSerial;
  const SpaceConfig space{3, static_cast<int>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(TabularOracle::Build(space, 1, exec));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(TabularOracle::Build(space, 1).table().size()));
  state.counters["threads"] = exec == Execution::kParallel ? omp_get_max_threads() : 1;
}
BENCHMARK(BM_TabularBuild)
    ->ArgNames({"parallel", "ops"})
    ->Args({0, 3})
    ->Args({1, 3})
    ->Args({0, 4})
    ->Args({1, 4})
    ->Unit(benchmark::kMillisecond);

void BM_CompareGrid(benchmark::State& state) {
  CompareConfig cc;
  cc.execution = state.range(0) ? Execution::kParallel : Execution::kSerial;
  cc.base.budget = 200;
  cc.base.controller.embed_size = cc.base.controller.hidden_size = 32;
  cc.strategies = AllStrategies();
  cc.seeds = {0, 1, 2, 3};
  cc.bootstrap_resamples = 200;
  const auto oracle = MakeOracle(cc.base.space, cc.base.oracle);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Compare(cc, *oracle));
  }
  state.SetItemsProcessed(state.iterations() * 5 * 4 * cc.base.budget);
  state.counters["threads"] = state.range(0) ? omp_get_max_threads() : 1;
}
BENCHMARK(BM_CompareGrid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace renas

BENCHMARK_MAIN();
