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
#include "nap/frontend.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nap/error.h"
#include "spectrum.h"

namespace nap {
namespace {

void require_rate(const Waveform& w, int rate, std::string_view what) {
  if (w.sample_rate != rate)
    fail(Errc::kWrongSampleRate, std::string(what) + " needs " + std::to_string(rate) +
                                     " Hz input, got " + std::to_string(w.sample_rate));
}

std::vector<double> hamming(int n) {
  std::vector<double> win(static_cast<std::size_t>(n));
  if (n == 1) {
    win[0] = 1.0;
    return win;
  }
  for (int i = 0; i < n; ++i)
    win[static_cast<std::size_t>(i)] =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  return win;
}

// Unwindowed frames, one per row.
Eigen::MatrixXd slice_frames(const std::vector<double>& x, int rate, const FrontendConfig& cfg) {
  const int len = frame_length_samples(rate, cfg);
  const int hop = frame_hop_samples(rate, cfg);
  const Eigen::Index n = frame_count(x.size(), rate, cfg);
  if (n == 0)
    fail(Errc::kSignalTooShort, std::to_string(x.size()) + " samples, frame needs " +
                                    std::to_string(len));
  Eigen::MatrixXd frames(n, len);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < len; ++j)
      frames(i, j) = x[static_cast<std::size_t>(i * hop + j)];
  return frames;
}

// Triangular mel filters evaluated on FFT bin centers, weights in mel space.
Eigen::MatrixXd mel_filterbank(int n_fft, int rate, const FrontendConfig& cfg) {
  const int n_bins = n_fft / 2 + 1;
  const int m = cfg.mel_filters;
  const double lo = hz_to_mel(cfg.mel_low_hz);
  const double hi = hz_to_mel(std::min(cfg.mel_high_hz, rate / 2.0));
  const double step = (hi - lo) / (m + 1);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(m, n_bins);
  for (int f = 0; f < m; ++f) {
    const double left = lo + f * step, center = left + step, right = center + step;
    for (int k = 0; k < n_bins; ++k) {
      const double mel = hz_to_mel(static_cast<double>(k) * rate / n_fft);
      if (mel > left && mel < right)
        fb(f, k) = mel <= center ? (mel - left) / (center - left) : (right - mel) / (right - center);
    }
  }
  return fb;
}

// Band weights on the Bark axis: unit-width critical bands with the usual
// asymmetric masking skirts (+25 dB/Bark low side, -10 dB/Bark high side).
Eigen::MatrixXd bark_filterbank(int n_fft, int rate, const FrontendConfig& cfg) {
  const int n_bins = n_fft / 2 + 1;
  const int n_bands = cfg.bark_bands;
  const double nyq_bark = hz_to_bark(rate / 2.0);
  const double step = nyq_bark / (n_bands - 1);
  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_bands, n_bins);
  for (int b = 0; b < n_bands; ++b) {
    const double mid = b * step;
    for (int k = 0; k < n_bins; ++k) {
      const double z = hz_to_bark(static_cast<double>(k) * rate / n_fft) - mid;
      const double lof = z - 0.5, hif = z + 0.5;
      fb(b, k) = std::pow(10.0, std::min(0.0, std::min(hif, -2.5 * lof)));
    }
  }
  return fb;
}

// Equal-loudness weighting at the given frequency.
double equal_loudness(double hz) {
  const double w2 = std::pow(2.0 * std::numbers::pi * hz, 2);
  return (w2 + 56.8e6) * w2 * w2 / (std::pow(w2 + 6.3e6, 2) * (w2 + 0.38e9));
}

std::vector<double> dct2_orthonormal(const std::vector<double>& x, int n_out) {
  const int n = static_cast<int>(x.size());
  std::vector<double> c(static_cast<std::size_t>(n_out));
  for (int k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += x[static_cast<std::size_t>(i)] * std::cos(std::numbers::pi * k * (i + 0.5) / n);
    c[static_cast<std::size_t>(k)] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  return c;
}

}  // namespace

std::string_view frontend_name(Frontend f) { return f == Frontend::kPlp13 ? "PLP13" : "MFCC39"; }
int frontend_dim(Frontend f) { return f == Frontend::kPlp13 ? 13 : 39; }
int frontend_rate(Frontend f) { return f == Frontend::kPlp13 ? 8000 : 16000; }

int frame_length_samples(int sample_rate, const FrontendConfig& cfg) {
  return static_cast<int>(std::lround(cfg.frame_length_s * sample_rate));
}
int frame_hop_samples(int sample_rate, const FrontendConfig& cfg) {
  return static_cast<int>(std::lround(cfg.frame_hop_s * sample_rate));
}

Eigen::Index frame_count(std::size_t n_samples, int sample_rate, const FrontendConfig& cfg) {
  const auto len = static_cast<std::size_t>(frame_length_samples(sample_rate, cfg));
  const auto hop = static_cast<std::size_t>(frame_hop_samples(sample_rate, cfg));
  if (len == 0 || hop == 0 || n_samples < len) return 0;
  return static_cast<Eigen::Index>((n_samples - len) / hop + 1);
}

Eigen::MatrixXd frame_signal(const Waveform& w, const FrontendConfig& cfg) {
  Eigen::MatrixXd frames = slice_frames(w.samples, w.sample_rate, cfg);
  const auto win = hamming(static_cast<int>(frames.cols()));
  for (Eigen::Index j = 0; j < frames.cols(); ++j) frames.col(j) *= win[static_cast<std::size_t>(j)];
  return frames;
}

double hz_to_mel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * std::expm1(mel / 1127.0); }
double hz_to_bark(double hz) { return 6.0 * std::asinh(hz / 600.0); }
double bark_to_hz(double bark) { return 600.0 * std::sinh(bark / 6.0); }

void apply_cmvn(Eigen::MatrixXd& features) {
  const auto n = static_cast<double>(features.rows());
  if (features.rows() == 0) return;
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    auto col = features.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double var = col.squaredNorm() / n;
    if (var > 1e-20) col /= std::sqrt(var);
  }
}

Eigen::MatrixXd compute_deltas(const Eigen::MatrixXd& features, int window) {
  const Eigen::Index n = features.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, features.cols());
  double denom = 0.0;
  for (int k = 1; k <= window; ++k) denom += 2.0 * k * k;
  for (Eigen::Index t = 0; t < n; ++t) {
    for (int k = 1; k <= window; ++k) {
      const Eigen::Index fwd = std::min<Eigen::Index>(t + k, n - 1);
      const Eigen::Index back = std::max<Eigen::Index>(t - k, 0);
      out.row(t) += k * (features.row(fwd) - features.row(back));
    }
  }
  return out / denom;
}

FrameMatrix compute_mfcc39(const Waveform& w, const FrontendConfig& cfg) {
  require_rate(w, 16000, "MFCC39");
  const Eigen::MatrixXd raw = slice_frames(w.samples, w.sample_rate, cfg);
  const int len = static_cast<int>(raw.cols());
  const int n_fft = detail::next_pow2(len);
  const Eigen::MatrixXd fb = mel_filterbank(n_fft, w.sample_rate, cfg);
  const auto win = hamming(len);
  const int n_static = cfg.num_ceps;

  Eigen::MatrixXd statics(raw.rows(), n_static);
  std::vector<double> frame(static_cast<std::size_t>(len));
  std::vector<double> log_mel(static_cast<std::size_t>(cfg.mel_filters));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double energy = raw.row(i).squaredNorm();
    for (int j = len - 1; j >= 0; --j) {
      const double prev = raw(i, j > 0 ? j - 1 : 0);
      frame[static_cast<std::size_t>(j)] = (raw(i, j) - cfg.preemphasis * prev) * win[static_cast<std::size_t>(j)];
    }
    const auto power = detail::power_spectrum(frame, n_fft);
    const Eigen::Map<const Eigen::VectorXd> pv(power.data(), static_cast<Eigen::Index>(power.size()));
    const Eigen::VectorXd bands = fb * pv;
    for (int m = 0; m < cfg.mel_filters; ++m)
      log_mel[static_cast<std::size_t>(m)] = std::log(std::max(bands(m), cfg.log_floor));
    const auto ceps = dct2_orthonormal(log_mel, n_static);
    for (int k = 0; k < n_static; ++k) statics(i, k) = ceps[static_cast<std::size_t>(k)];
    statics(i, 0) = std::log(std::max(energy, cfg.log_floor));
  }

  const Eigen::MatrixXd d1 = compute_deltas(statics, cfg.delta_window);
  const Eigen::MatrixXd d2 = compute_deltas(d1, cfg.delta_window);
  FrameMatrix fm;
  fm.frontend = Frontend::kMfcc39;
  fm.frame_length_s = cfg.frame_length_s;
  fm.frame_hop_s = cfg.frame_hop_s;
  fm.data.resize(raw.rows(), 3 * n_static);
  fm.data << statics, d1, d2;
  apply_cmvn(fm.data);
  return fm;
}

LpcFit levinson_durbin(std::span<const double> r, int order) {
  if (static_cast<int>(r.size()) < order + 1)
    fail(Errc::kInvalidArgument, "autocorrelation shorter than order + 1");
  if (!(r[0] > 0.0)) fail(Errc::kLevinsonSingular, "zero-energy autocorrelation");
  LpcFit fit;
  fit.coeffs.assign(static_cast<std::size_t>(order + 1), 0.0);
  fit.coeffs[0] = 1.0;
  double err = r[0];
  std::vector<double> prev;
  for (int i = 1; i <= order; ++i) {
    double acc = r[static_cast<std::size_t>(i)];
    for (int j = 1; j < i; ++j)
      acc += fit.coeffs[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
    const double k = -acc / err;
    prev = fit.coeffs;
    for (int j = 1; j < i; ++j)
      fit.coeffs[static_cast<std::size_t>(j)] = prev[static_cast<std::size_t>(j)] +
                                                k * prev[static_cast<std::size_t>(i - j)];
    fit.coeffs[static_cast<std::size_t>(i)] = k;
    err *= 1.0 - k * k;
    if (!(err > 0.0)) fail(Errc::kLevinsonSingular, "prediction error vanished at order " + std::to_string(i));
  }
  fit.error = err;
  return fit;
}

std::vector<double> lpc_to_cepstrum(const LpcFit& lpc, int num_ceps) {
  const auto& a = lpc.coeffs;
  const int p = static_cast<int>(a.size()) - 1;
  std::vector<double> c(static_cast<std::size_t>(num_ceps), 0.0);
  c[0] = std::log(lpc.error);
  for (int n = 1; n < num_ceps; ++n) {
    double acc = 0.0;
    for (int k = 1; k < n; ++k)
      if (n - k <= p) acc += k * c[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(n - k)];
    c[static_cast<std::size_t>(n)] = -(n <= p ? a[static_cast<std::size_t>(n)] : 0.0) - acc / n;
  }
  return c;
}

PlpFrameAnalysis analyze_plp_frame(std::span<const double> windowed_frame, int sample_rate,
                                   const FrontendConfig& cfg) {
  const int n_fft = detail::next_pow2(static_cast<int>(windowed_frame.size()));
  const int n_bands = cfg.bark_bands;
  // Filterbanks depend only on (n_fft, rate); recomputing per frame would
  // dominate runtime.
  thread_local int cached_fft = 0, cached_rate = 0;
  thread_local Eigen::MatrixXd fb;
  if (cached_fft != n_fft || cached_rate != sample_rate || fb.rows() != n_bands) {
    fb = bark_filterbank(n_fft, sample_rate, cfg);
    cached_fft = n_fft;
    cached_rate = sample_rate;
  }

  PlpFrameAnalysis out;
  out.nyquist_bark = hz_to_bark(sample_rate / 2.0);
  const double step = out.nyquist_bark / (n_bands - 1);

  const auto power = detail::power_spectrum(windowed_frame, n_fft);
  const Eigen::Map<const Eigen::VectorXd> pv(power.data(), static_cast<Eigen::Index>(power.size()));
  const Eigen::VectorXd bands = fb * pv;

  out.auditory_spectrum.resize(static_cast<std::size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    const double weighted = std::max(bands(b), cfg.log_floor) * equal_loudness(bark_to_hz(b * step));
    out.auditory_spectrum[static_cast<std::size_t>(b)] = std::cbrt(weighted);
  }
  // The outermost bands straddle 0 Hz and Nyquist; copy their neighbours.
  out.auditory_spectrum.front() = out.auditory_spectrum[1];
  out.auditory_spectrum.back() = out.auditory_spectrum[static_cast<std::size_t>(n_bands - 2)];

  // Inverse DFT of the even extension gives the autocorrelation.
  const int n_ext = 2 * (n_bands - 1);
  out.autocorr.assign(static_cast<std::size_t>(cfg.lpc_order + 1), 0.0);
  for (int lag = 0; lag <= cfg.lpc_order; ++lag) {
    double acc = 0.0;
    for (int m = 0; m < n_ext; ++m) {
      const int b = m < n_bands ? m : n_ext - m;
      acc += out.auditory_spectrum[static_cast<std::size_t>(b)] *
             std::cos(2.0 * std::numbers::pi * lag * m / n_ext);
    }
    out.autocorr[static_cast<std::size_t>(lag)] = acc / n_ext;
  }
  out.lpc = levinson_durbin(out.autocorr, cfg.lpc_order);
  out.cepstrum = lpc_to_cepstrum(out.lpc, cfg.num_ceps);
  return out;
}

FrameMatrix compute_plp13(const Waveform& w, const FrontendConfig& cfg) {
  require_rate(w, 8000, "PLP13");
  const Eigen::MatrixXd frames = frame_signal(w, cfg);
  FrameMatrix fm;
  fm.frontend = Frontend::kPlp13;
  fm.frame_length_s = cfg.frame_length_s;
  fm.frame_hop_s = cfg.frame_hop_s;
  fm.data.resize(frames.rows(), cfg.num_ceps);
  std::vector<double> frame(static_cast<std::size_t>(frames.cols()));
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    for (Eigen::Index j = 0; j < frames.cols(); ++j) frame[static_cast<std::size_t>(j)] = frames(i, j);
    const auto a = analyze_plp_frame(frame, w.sample_rate, cfg);
    for (int k = 0; k < cfg.num_ceps; ++k) fm.data(i, k) = a.cepstrum[static_cast<std::size_t>(k)];
  }
  return fm;
}

}  // namespace nap
