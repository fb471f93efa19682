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

#include "nap/frontend.h"
#include "nap/wav.h"

namespace {

nap::Waveform noise(int rate, double seconds) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 0.1);
  nap::Waveform w;
  w.sample_rate = rate;
  w.samples.resize(static_cast<std::size_t>(rate * seconds));
  for (auto& s : w.samples) s = g(rng);
  return w;
}

void BM_Mfcc39(benchmark::State& state) {
  const auto w = noise(16000, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nap::compute_mfcc39(w));
}
BENCHMARK(BM_Mfcc39)->Unit(benchmark::kMicrosecond);

void BM_Plp13(benchmark::State& state) {
  const auto w = noise(8000, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nap::compute_plp13(w));
}
BENCHMARK(BM_Plp13)->Unit(benchmark::kMicrosecond);

void BM_Resample16kTo8k(benchmark::State& state) {
  const auto w = noise(16000, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nap::resample(w, 8000));
}
BENCHMARK(BM_Resample16kTo8k)->Unit(benchmark::kMicrosecond);

}  // namespace
