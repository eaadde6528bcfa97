// Copyright 2026 The Authors.
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

// Serial reference vs OpenMP kernels on synthetic pools.
//
//   ./build/bench/sas_bench --benchmark_filter=ScorePool
//   OMP_NUM_THREADS=8 ./build/bench/sas_bench

#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "sas/kernels.hpp"
#include "sas/scoring.hpp"
#include "sas/synth.hpp"

namespace {

const sas::EmbeddingPool& pool_for(std::int64_t per_class) {
  static std::map<std::int64_t, sas::EmbeddingPool> cache;
  auto it = cache.find(per_class);
  if (it == cache.end()) {
    sas::SyntheticSpec spec;
    spec.dim = 512;
    spec.n_classes = 10;
    spec.per_class = static_cast<std::uint32_t>(per_class);
    spec.concentration = 8.0;
    spec.duplicate_fraction = 0.2;
    spec.seed = 7;
    it = cache.emplace(per_class, sas::generate_pool(spec).pool).first;
  }
  return it->second;
}

void BM_ScorePoolSerial(benchmark::State& state) {
  const auto& pool = pool_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sas::score_pool_serial(pool));
  state.SetItemsProcessed(state.iterations() * pool.n_images());
}

void BM_ScorePoolOmp(benchmark::State& state) {
  const auto& pool = pool_for(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sas::score_pool(pool));
  state.SetItemsProcessed(state.iterations() * pool.n_images());
}

void BM_PairwiseSerial(benchmark::State& state) {
  const auto& pool = pool_for(state.range(0));
  const auto rows = sas::UnitRows::features_of(pool);
  std::vector<std::size_t> subset(pool.n_images());
  std::iota(subset.begin(), subset.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(sas::kernels::pairwise_angular_serial(rows, subset));
}

void BM_PairwiseOmp(benchmark::State& state) {
  const auto& pool = pool_for(state.range(0));
  const auto rows = sas::UnitRows::features_of(pool);
  std::vector<std::size_t> subset(pool.n_images());
  std::iota(subset.begin(), subset.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(sas::kernels::pairwise_angular(rows, subset));
}

}  // namespace

BENCHMARK(BM_ScorePoolSerial)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScorePoolOmp)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSerial)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseOmp)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
