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

#include <random>

#include "nap/gmm.h"

namespace {

Eigen::MatrixXd frames(int n, int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

void BM_LogLikelihoodMatrix(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto x = frames(1000, dim, 1);
  nap::TrainConfig cfg;
  cfg.max_iters = 5;
  const auto m = nap::train_em(x, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(m.log_likelihood_matrix(x));
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_LogLikelihoodMatrix)->Arg(13)->Arg(39);

void BM_TrainEm(benchmark::State& state) {
  const auto x = frames(static_cast<int>(state.range(0)), 13, 2);
  nap::TrainConfig cfg;
  cfg.max_iters = 20;
  for (auto _ : state) benchmark::DoNotOptimize(nap::train_em(x, cfg));
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_TrainEm)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

}  // namespace
