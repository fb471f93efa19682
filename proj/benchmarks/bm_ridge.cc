// Copyright 2026 The NAP Authors. All Rights Reserved.
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
#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "nap/evaluation.h"

namespace {

nap::Dataset data(int n, int p) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  nap::Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    d.speaker_ids.push_back("S" + std::to_string(1000 + i));
    for (int j = 0; j < p; ++j) d.X(i, j) = g(rng);
    d.y(i) = std::clamp(4.0 + d.X(i, 0) + 0.3 * g(rng), 1.0, 7.0);
  }
  for (int j = 0; j < p; ++j) d.feature_names.push_back("F" + std::to_string(j));
  return d;
}

void BM_Loso(benchmark::State& state) {
  const auto d = data(static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(nap::loso_evaluate(d));
}
BENCHMARK(BM_Loso)->Arg(40)->Arg(160);

void BM_ForwardSelect(benchmark::State& state) {
  const auto d = data(40, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nap::forward_select(d));
}
BENCHMARK(BM_ForwardSelect)->Arg(6)->Arg(26)->Unit(benchmark::kMillisecond);

}  // namespace
