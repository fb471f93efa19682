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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nap/wav.h"

namespace nap {

enum class Frontend : std::uint32_t { kPlp13 = 1, kMfcc39 = 2 };

std::string_view frontend_name(Frontend f);
int frontend_dim(Frontend f);
int frontend_rate(Frontend f);

// Analysis constants shared by both frontends. Frame geometry is fixed at
// 20 ms windows every 10 ms; the rest are conventional ASR choices.
struct FrontendConfig {
  double frame_length_s = 0.020;
  double frame_hop_s = 0.010;
  double preemphasis = 0.97;
  int mel_filters = 26;
  double mel_low_hz = 0.0;
  double mel_high_hz = 8000.0;
  int num_ceps = 13;
  int delta_window = 2;
  int bark_bands = 17;
  int lpc_order = 12;
  double log_floor = 1e-10;
};

// Rows are frames, columns coefficients. Frame i covers
// [i * hop, i * hop + length) seconds of the source waveform.
struct FrameMatrix {
  Eigen::MatrixXd data;
  Frontend frontend = Frontend::kPlp13;
  double frame_length_s = 0.020;
  double frame_hop_s = 0.010;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
  double frame_center(Eigen::Index i) const {
    return static_cast<double>(i) * frame_hop_s + frame_length_s / 2.0;
  }
};

int frame_length_samples(int sample_rate, const FrontendConfig& cfg = {});
int frame_hop_samples(int sample_rate, const FrontendConfig& cfg = {});

// floor((N - L) / H) + 1, or 0 when N < L.
Eigen::Index frame_count(std::size_t n_samples, int sample_rate, const FrontendConfig& cfg = {});

// Hamming-windowed frames, one per row. Throws SignalTooShort when the
// waveform is shorter than one frame.
Eigen::MatrixXd frame_signal(const Waveform& w, const FrontendConfig& cfg = {});

// 13 mel cepstra (C0 replaced by log frame energy) + deltas + delta-deltas,
// then per-utterance mean/variance normalization. Requires 16 kHz.
FrameMatrix compute_mfcc39(const Waveform& w, const FrontendConfig& cfg = {});

// 13 PLP cepstra from an order-12 all-pole fit of the Bark-scale auditory
// spectrum. Requires 8 kHz.
FrameMatrix compute_plp13(const Waveform& w, const FrontendConfig& cfg = {});

// Per-column standardization in place. Columns with zero spread are only
// centered.
void apply_cmvn(Eigen::MatrixXd& features);

// Regression deltas over +-window frames with edge replication.
Eigen::MatrixXd compute_deltas(const Eigen::MatrixXd& features, int window);

double hz_to_mel(double hz);
double mel_to_hz(double mel);
double hz_to_bark(double hz);
double bark_to_hz(double bark);

// Linear prediction with A(z) = 1 + sum_k a[k] z^-k; coeffs[0] == 1.
struct LpcFit {
  std::vector<double> coeffs;
  double error = 0.0;  // final prediction error power
};

// Throws LevinsonSingular if r[0] <= 0 or the recursion loses positivity.
LpcFit levinson_durbin(std::span<const double> autocorr, int order);

// Cepstrum of the all-pole model error / |A|^2; out[0] = log(error).
std::vector<double> lpc_to_cepstrum(const LpcFit& lpc, int num_ceps);

// Intermediate results of PLP analysis for one windowed frame.
struct PlpFrameAnalysis {
  std::vector<double> auditory_spectrum;  // compressed band values, bark_bands long
  std::vector<double> autocorr;           // lags 0..lpc_order
  LpcFit lpc;
  std::vector<double> cepstrum;
  double nyquist_bark = 0.0;  // warped axis: omega in [0, pi] maps to [0, nyquist_bark]
};

PlpFrameAnalysis analyze_plp_frame(std::span<const double> windowed_frame, int sample_rate,
                                   const FrontendConfig& cfg = {});

}  // namespace nap
