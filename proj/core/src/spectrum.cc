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
#include "spectrum.h"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "nap/error.h"

namespace nap::detail {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per size and kept for the process.
fftw_plan plan_for(int n_fft) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard lock(mu);
  auto it = plans.find(n_fft);
  if (it != plans.end()) return it->second;
  double* in = fftw_alloc_real(static_cast<std::size_t>(n_fft));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n_fft / 2 + 1));
  fftw_plan p = fftw_plan_dft_r2c_1d(n_fft, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  plans.emplace(n_fft, p);
  return p;
}

}  // namespace

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> power_spectrum(std::span<const double> frame, int n_fft) {
  if (static_cast<int>(frame.size()) > n_fft)
    fail(Errc::kInvalidArgument, "frame longer than FFT size");
  std::vector<double> in(static_cast<std::size_t>(n_fft), 0.0);
  std::copy(frame.begin(), frame.end(), in.begin());
  std::vector<fftw_complex> out(static_cast<std::size_t>(n_fft / 2 + 1));
  fftw_execute_dft_r2c(plan_for(n_fft), in.data(), out.data());
  std::vector<double> power(out.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  return power;
}

}  // namespace nap::detail
