// Copyright 2026 The tagrec Authors.
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

// Parallel kernels against their serial references on a planted dataset.

#include <benchmark/benchmark.h>

#include "tagrec/diffusion.hpp"
#include "tagrec/graph.hpp"
#include "tagrec/metrics.hpp"
#include "tagrec/synthetic.hpp"

namespace {

using namespace tagrec;

const TripartiteGraph& graph() {
  static const TripartiteGraph g = [] {
    PlantedConfig p;
    p.users = 2000;
    p.objects = 8000;
    p.tags = 1000;
    p.mean_objects_per_user = 30;
    return build_graph(planted_dataset(p));
  }();
  return g;
}

void BM_RecommendAllSerial(benchmark::State& state) {
  const auto algorithm = static_cast<Algorithm>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recommend_all_serial(graph(), algorithm, 50));
  }
  state.SetLabel(std::string(to_string(algorithm)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(graph().users()));
}

void BM_RecommendAll(benchmark::State& state) {
  const auto algorithm = static_cast<Algorithm>(state.range(0));
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recommend_all(graph(), algorithm, 50, jobs));
  }
  state.SetLabel(std::string(to_string(algorithm)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(graph().users()));
}

const std::vector<RecommendationList>& lists() {
  static const auto l = recommend_all(graph(), Algorithm::kUserTagObject, 50);
  return l;
}

void BM_InnerDiversitySerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_diversity_serial(graph(), lists(), 50));
  }
}

void BM_InnerDiversity(benchmark::State& state) {
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_diversity(graph(), lists(), 50, jobs));
  }
}

BENCHMARK(BM_RecommendAllSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecommendAll)
    ->ArgsProduct({{0, 1, 2}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_InnerDiversitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InnerDiversity)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
