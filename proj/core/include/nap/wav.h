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
#pragma once

#include <filesystem>
#include <vector>

namespace nap {

struct Waveform {
  std::vector<double> samples;  // normalized to [-1, 1)
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  bool operator==(const Waveform&) const = default;
};

// RIFF/WAVE, 16-bit PCM, mono. Samples are divided by 32768.
// Throws UnsupportedEncoding or CorruptHeader.
Waveform read_wav(const std::filesystem::path& path);
Waveform parse_wav(const std::vector<unsigned char>& bytes);

// Writes 16-bit PCM mono; samples are clamped to the representable range.
void write_wav(const Waveform& w, const std::filesystem::path& path);
std::vector<unsigned char> encode_wav(const Waveform& w);

// Band-limited sample-rate reduction. target must be 8000 or 16000 and not
// above w.sample_rate (UpsamplingRequested). Output length is
// round(len * target / source); equal rates return the input unchanged.
Waveform resample(const Waveform& w, int target_rate);

}  // namespace nap
