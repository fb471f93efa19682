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
#include "nap/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "nap/error.h"

namespace nap {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | p[1] << 8); }
std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

void push16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v));
  b.push_back(static_cast<unsigned char>(v >> 8));
}
void push32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

// Blackman window on [-1, 1].
double blackman(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return 0.42 + 0.5 * std::cos(std::numbers::pi * x) + 0.08 * std::cos(2 * std::numbers::pi * x);
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

Waveform parse_wav(const std::vector<unsigned char>& bytes) {
  const std::size_t n = bytes.size();
  if (n < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE")
    fail(Errc::kCorruptHeader, "not a RIFF/WAVE stream");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::string id(bytes.begin() + pos, bytes.begin() + pos + 4);
    std::size_t len = le32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16 || body + len > n) fail(Errc::kCorruptHeader, "short fmt chunk");
      format = le16(&bytes[body]);
      channels = le16(&bytes[body + 2]);
      rate = le32(&bytes[body + 4]);
      bits = le16(&bytes[body + 14]);
      if (format == kFormatExtensible) {
        if (len < 40) fail(Errc::kCorruptHeader, "short WAVE_FORMAT_EXTENSIBLE chunk");
        format = le16(&bytes[body + 24]);
      }
      have_fmt = true;
    } else if (id == "data") {
      if (body + len > n) {
        // Streaming writers leave the size at 0 or 0xFFFFFFFF.
        if (len != 0 && len != 0xFFFFFFFFu) fail(Errc::kCorruptHeader, "truncated data chunk");
        len = n - body;
      }
      data = &bytes[body];
      data_len = len;
      break;
    }
    pos = body + len + (len & 1);
  }

  if (!have_fmt) fail(Errc::kCorruptHeader, "missing fmt chunk");
  if (format != kFormatPcm) fail(Errc::kUnsupportedEncoding, "format tag " + std::to_string(format));
  if (channels != 1)
    fail(Errc::kUnsupportedEncoding, std::to_string(channels) + " channels (mono required)");
  if (bits != 16) fail(Errc::kUnsupportedEncoding, std::to_string(bits) + "-bit samples");
  if (rate == 0) fail(Errc::kCorruptHeader, "zero sample rate");
  if (data == nullptr) fail(Errc::kCorruptHeader, "missing data chunk");
  if (data_len < 2) fail(Errc::kCorruptHeader, "no samples");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const auto s = static_cast<std::int16_t>(le16(data + 2 * i));
    w.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return w;
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kPathNotFound, path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.detail());
  }
}

std::vector<unsigned char> encode_wav(const Waveform& w) {
  const auto n = static_cast<std::uint32_t>(w.samples.size());
  std::vector<unsigned char> b;
  b.reserve(44 + 2 * n);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  push32(b, 36 + 2 * n);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push32(b, 16);
  push16(b, kFormatPcm);
  push16(b, 1);
  push32(b, static_cast<std::uint32_t>(w.sample_rate));
  push32(b, static_cast<std::uint32_t>(w.sample_rate) * 2);
  push16(b, 2);
  push16(b, 16);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  push32(b, 2 * n);
  for (double x : w.samples) {
    const double scaled = std::round(x * 32768.0);
    const auto s = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    push16(b, static_cast<std::uint16_t>(s));
  }
  return b;
}

void write_wav(const Waveform& w, const std::filesystem::path& path) {
  const auto bytes = encode_wav(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Waveform resample(const Waveform& w, int target_rate) {
  if (target_rate != 8000 && target_rate != 16000)
    fail(Errc::kInvalidArgument, "resample target must be 8000 or 16000 Hz");
  if (target_rate > w.sample_rate)
    fail(Errc::kUpsamplingRequested,
         std::to_string(w.sample_rate) + " -> " + std::to_string(target_rate) + " Hz");
  if (target_rate == w.sample_rate) return w;

  const double source = w.sample_rate;
  const double step = source / target_rate;  // input samples per output sample
  const double cutoff = 0.95 * (target_rate / 2.0) / source;  // cycles per input sample
  constexpr double kZeroCrossings = 16.0;
  const double half_width = kZeroCrossings / (2.0 * cutoff);

  const auto n_in = static_cast<std::ptrdiff_t>(w.samples.size());
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(w.samples.size()) * target_rate / source));

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  for (std::size_t m = 0; m < n_out; ++m) {
    const double t = static_cast<double>(m) * step;
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
    const auto hi =
        std::min<std::ptrdiff_t>(n_in - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) {
      const double tau = t - static_cast<double>(k);
      acc += w.samples[static_cast<std::size_t>(k)] * 2.0 * cutoff * sinc(2.0 * cutoff * tau) *
             blackman(tau / half_width);
    }
    out.samples[m] = acc;
  }
  return out;
}

}  // namespace nap
