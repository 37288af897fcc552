//
// Copyright 2026 The ldpmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "ldpmin/datagen.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/params.h"
#include "ldpmin/protocol.h"
#include "ldpmin/random.h"

namespace ldpmin {
namespace {

void BM_RandomizedResponse(benchmark::State& state) {
  const RoundBudget budget = *RoundBudget::Create(0.5);
  SeededStream rng(42);
  Bit b = Bit::kPlus;
  for (auto _ : state) {
    b = RandomizedResponse(b, budget, rng);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RandomizedResponse);

void BM_PrivateMin(benchmark::State& state) {
  const int64_t n = state.range(0);
  const FatModel model = *FatModel::Uniform(-0.5, 0.3);
  const Cohort cohort = *FixedCohort(model, n);
  const PrivacyBudget eps = *PrivacyBudget::Create(4.0);
  ParamSpec spec;
  spec.mode = ParamMode::kLowerAlphaPreset;
  const ProtocolConfig config =
      MakeProtocolConfig(*ChooseParams(spec, n, eps), eps);
  SeededStream rng(7);
  for (auto _ : state) {
    auto t = RunPrivateMin(cohort.values(), config, rng);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * n * config.depth);
}
BENCHMARK(BM_PrivateMin)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_NonPrivateMin(benchmark::State& state) {
  const int64_t n = state.range(0);
  const Cohort cohort = *FixedCohort(FatModel(), n);
  for (auto _ : state) {
    auto t = RunNonPrivateMin(cohort.values(), 20);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * n * 20);
}
BENCHMARK(BM_NonPrivateMin)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_FixedCohortBeta(benchmark::State& state) {
  const int64_t n = state.range(0);
  const FatModel model = *FatModel::Beta(2.0, 1.0, -0.5, 0.3);
  for (auto _ : state) {
    auto c = FixedCohort(model, n);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FixedCohortBeta)->Arg(1 << 10)->Arg(1 << 14);

void BM_BaselineMin(benchmark::State& state) {
  const int64_t n = state.range(0);
  const Cohort cohort = *FixedCohort(FatModel(), n);
  const PrivacyBudget eps = *PrivacyBudget::Create(1.0);
  SeededStream rng(3);
  for (auto _ : state) {
    auto m = BaselineMin(cohort.values(), eps, rng);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BaselineMin)->Arg(1 << 10)->Arg(1 << 16);

}  // namespace
}  // namespace ldpmin

BENCHMARK_MAIN();
