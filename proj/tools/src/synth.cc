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
#include "nap_tools/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "nap/error.h"

namespace nap::synth {
namespace {

namespace fs = std::filesystem;
using Signal = std::vector<double>;

struct Formants {
  double f1, f2, f3;
};

const std::map<std::string, Formants>& formant_table() {
  static const std::map<std::string, Formants> t = {
      {"AA", {730, 1090, 2440}}, {"AE", {660, 1720, 2410}}, {"AH", {520, 1190, 2390}},
      {"EH", {530, 1840, 2480}}, {"IY", {270, 2290, 3010}}, {"UW", {300, 870, 2240}},
      {"B", {200, 1100, 2150}},  {"D", {220, 1700, 2600}},  {"G", {240, 2000, 2850}},
      {"V", {260, 1300, 2400}},  {"Z", {260, 1800, 2700}},
  };
  return t;
}

struct Band {
  double center, bandwidth, level;
};

const std::map<std::string, Band>& noise_table() {
  static const std::map<std::string, Band> t = {
      {"P", {900, 1200, 0.03}}, {"T", {4200, 1800, 0.035}}, {"K", {2200, 1000, 0.035}},
      {"F", {5500, 3500, 0.02}}, {"S", {6500, 1400, 0.05}},  {"SH", {3000, 1200, 0.05}},
  };
  return t;
}

double rms(const Signal& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

Signal scaled(Signal x, double target_rms) {
  const double r = rms(x);
  if (r > 0.0)
    for (double& v : x) v *= target_rms / r;
  return x;
}

void resonate(Signal& x, double f, double bw, int fs) {
  const double r = std::exp(-std::numbers::pi * bw / fs);
  const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * f / fs);
  const double a2 = -r * r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = (1.0 - r) * v + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

void antiresonate(Signal& x, double f, double depth, int fs) {
  if (depth <= 0.0) return;
  const double c = 2.0 * depth * std::cos(2.0 * std::numbers::pi * f / fs);
  const double d = depth * depth;
  double x1 = 0.0, x2 = 0.0;
  for (double& v : x) {
    const double in = v;
    v = in - c * x1 + d * x2;
    x2 = x1;
    x1 = in;
  }
}

Signal voiced_excitation(std::size_t n, double f0, int fs, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 0.02);
  std::uniform_real_distribution<double> drift(-0.04, 0.04);
  const double f = f0 * (1.0 + drift(rng));
  Signal e(n, 0.0);
  double phase = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    phase += f / fs;
    double pulse = 0.0;
    if (phase >= 1.0) {
      phase -= 1.0;
      pulse = 1.0;
    }
    lp = pulse + 0.9 * lp;
    e[i] = lp + noise(rng);
  }
  return e;
}

Signal white(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Signal e(n);
  for (double& v : e) v = g(rng);
  return e;
}

// Low nasal pole, weak upper formant, antiresonance at the place zero.
Signal nasal_murmur(const Signal& e, double zero_hz, int fs) {
  Signal m = e;
  resonate(m, 250.0, 90.0, fs);
  Signal upper = e;
  resonate(upper, 2200.0, 300.0, fs);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = m[i] + 0.15 * upper[i];
  antiresonate(m, zero_hz, 0.95, fs);
  return scaled(std::move(m), 1.0);
}

Signal oral_voiced(const Formants& fm, const Signal& e, double coupling, int fs) {
  Signal y = e;
  resonate(y, fm.f1, 80.0 * (1.0 + 2.0 * coupling), fs);
  resonate(y, fm.f2, 110.0, fs);
  resonate(y, fm.f3, 160.0, fs);
  return scaled(std::move(y), 1.0);
}

Signal nasalized(const Formants& fm, const Signal& e, double coupling, int fs) {
  Signal oral = oral_voiced(fm, e, coupling, fs);
  if (coupling <= 0.0) return oral;
  const Signal murmur = nasal_murmur(e, 1000.0, fs);
  for (std::size_t i = 0; i < oral.size(); ++i) oral[i] = (1.0 - 0.6 * coupling) * oral[i] + coupling * murmur[i];
  antiresonate(oral, 1000.0, 0.9 * coupling, fs);
  return oral;
}

double zero_for(const std::string& nasal) {
  if (nasal == "M") return 1000.0;
  if (nasal == "N") return 1800.0;
  return 3000.0;
}

constexpr double kNasalCoupling = 0.8;
constexpr double kBlockSeconds = 0.02;

const std::vector<std::string> kVowels = {"AA", "AE", "AH", "EH", "IY", "UW"};
const std::vector<std::string> kNasals = {"M", "N"};
const std::vector<std::string> kVoiced = {"B", "D", "G", "V", "Z"};
const std::vector<std::string> kUnvoiced = {"P", "T", "K", "F", "S", "SH"};

const std::string& pick(const std::vector<std::string>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

struct PlannedPhone {
  std::string label;
  double duration;
  int word;
  double fraction_first = 0.0;
  double fraction_second = 0.0;
};

std::string consonant(std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < 0.3) return pick(kNasals, rng);
  if (u < 0.6) return pick(kVoiced, rng);
  return pick(kUnvoiced, rng);
}

double duration_of(const std::string& p, std::mt19937_64& rng) {
  auto in = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  if (is_vowel(p)) return in(0.09, 0.16);
  if (is_nasal_consonant(p)) return in(0.06, 0.10);
  if (is_voiced_consonant(p)) return in(0.05, 0.09);
  return in(0.07, 0.12);
}

}  // namespace

Signal render_phone(const std::string& phone, double nasal_fraction, std::size_t n_samples, double f0,
                    int sample_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int fs = sample_rate;
  if (is_nasal_consonant(phone)) {
    return scaled(nasal_murmur(voiced_excitation(n_samples, f0, fs, rng), zero_for(phone), fs), 0.06);
  }
  Signal base, alt;
  double level = 0.0;
  if (auto it = formant_table().find(phone); it != formant_table().end()) {
    const Signal e = voiced_excitation(n_samples, f0, fs, rng);
    base = nasalized(it->second, e, 0.0, fs);
    alt = nasalized(it->second, e, kNasalCoupling, fs);
    if (phone == "V" || phone == "Z") {
      Signal fric = white(n_samples, rng);
      resonate(fric, phone == "V" ? 4000.0 : 5500.0, 1500.0, fs);
      fric = scaled(std::move(fric), 0.5);
      for (std::size_t i = 0; i < n_samples; ++i) {
        base[i] += fric[i];
        alt[i] += fric[i];
      }
    }
    level = is_vowel(phone) ? 0.1 : 0.05;
  } else if (auto nt = noise_table().find(phone); nt != noise_table().end()) {
    const Band& b = nt->second;
    base = white(n_samples, rng);
    resonate(base, b.center, b.bandwidth, fs);
    resonate(base, b.center, b.bandwidth, fs);
    base = scaled(std::move(base), 1.0);
    if (phone == "P" || phone == "T" || phone == "K") {
      // Closure then release.
      for (std::size_t i = 0; i < n_samples / 3; ++i) base[i] *= 0.05;
    }
    alt = nasal_murmur(voiced_excitation(n_samples, f0, fs, rng), 1000.0, fs);
    level = b.level;
  } else {
    fail(Errc::kUnknownPhone, "synthesizer has no model for " + phone);
  }
  base = scaled(std::move(base), level);
  alt = scaled(std::move(alt), level);
  if (nasal_fraction <= 0.0) return base;
  if (nasal_fraction >= 1.0) return alt;

  // Each block comes from the alternate distribution with probability
  // nasal_fraction; short linear ramps join the blocks.
  const auto block = static_cast<std::size_t>(kBlockSeconds * fs);
  const auto ramp = static_cast<std::size_t>(0.002 * fs);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> mask(n_samples);
  for (std::size_t b0 = 0; b0 < n_samples; b0 += block) {
    const double m = u01(rng) < nasal_fraction ? 1.0 : 0.0;
    std::fill(mask.begin() + static_cast<std::ptrdiff_t>(b0),
              mask.begin() + static_cast<std::ptrdiff_t>(std::min(n_samples, b0 + block)), m);
  }
  Signal out(n_samples);
  double smooth = mask.empty() ? 0.0 : mask[0];
  const double step = ramp > 0 ? 1.0 / static_cast<double>(ramp) : 1.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    smooth = mask[i] > smooth ? std::min(mask[i], smooth + step) : std::max(mask[i], smooth - step);
    out[i] = (1.0 - smooth) * base[i] + smooth * alt[i];
  }
  return out;
}

Utterance make_utterance(const UtteranceSpec& spec) {
  if (!(spec.severity >= 0.0 && spec.severity <= 1.0)) fail(Errc::kInvalidArgument, "severity outside [0, 1]");
  std::mt19937_64 rng(spec.seed);
  const int fs = spec.sample_rate;

  std::vector<PlannedPhone> plan;
  for (int w = 0; w < spec.n_words; ++w) {
    std::vector<std::string> word;
    const int syllables = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int s = 0; s < syllables; ++s) {
      word.push_back(consonant(rng));
      word.push_back(pick(kVowels, rng));
    }
    word.push_back(consonant(rng));
    for (const auto& p : word) plan.push_back({p, duration_of(p, rng), w});
  }
  // Nasal-side halves of vowels are fully nasalized; other oral voiced and
  // unvoiced material takes the alternate rendering with probability s.
  for (std::size_t i = 0; i < plan.size(); ++i) {
    PlannedPhone& p = plan[i];
    p.fraction_first = p.fraction_second = spec.severity;
    if (is_vowel(p.label)) {
      const bool before = i > 0 && plan[i - 1].word == p.word && is_nasal_consonant(plan[i - 1].label);
      const bool after = i + 1 < plan.size() && plan[i + 1].word == p.word && is_nasal_consonant(plan[i + 1].label);
      if (before) p.fraction_first = 1.0;
      if (after) p.fraction_second = 1.0;
    }
  }

  auto samples = [&](double seconds) { return static_cast<std::size_t>(std::lround(seconds * fs)); };
  Signal audio;
  TextGridTier words{"words", true, 0.0, 0.0, {}, {}};
  TextGridTier phones{"phones", true, 0.0, 0.0, {}, {}};
  auto now = [&] { return static_cast<double>(audio.size()) / fs; };
  auto silence = [&](double seconds) {
    const double t0 = now();
    audio.resize(audio.size() + samples(seconds), 0.0);
    words.intervals.push_back({t0, now(), ""});
    phones.intervals.push_back({t0, now(), "sil"});
  };
  auto append = [&](const Signal& x) { audio.insert(audio.end(), x.begin(), x.end()); };

  silence(0.15);
  std::size_t i = 0;
  for (int w = 0; w < spec.n_words; ++w) {
    const double w0 = now();
    for (; i < plan.size() && plan[i].word == w; ++i) {
      const PlannedPhone& p = plan[i];
      const double t0 = now();
      const std::size_t n = samples(p.duration);
      const std::uint64_t seed = rng();
      if (p.fraction_first != p.fraction_second) {
        append(render_phone(p.label, p.fraction_first, n / 2, spec.f0, fs, seed));
        append(render_phone(p.label, p.fraction_second, n - n / 2, spec.f0, fs, seed + 1));
      } else {
        append(render_phone(p.label, p.fraction_first, n, spec.f0, fs, seed));
      }
      phones.intervals.push_back({t0, now(), p.label});
    }
    words.intervals.push_back({w0, now(), "w" + std::to_string(w)});
    if (w + 1 < spec.n_words && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5)
      silence(std::uniform_real_distribution<double>(0.04, 0.10)(rng));
  }
  silence(0.15);

  std::normal_distribution<double> dither(0.0, 3e-4);
  for (double& v : audio) v += dither(rng);

  const double xmax = now();
  Utterance u;
  u.audio.samples = std::move(audio);
  u.audio.sample_rate = fs;
  words.xmax = phones.xmax = xmax;
  u.grid.xmax = xmax;
  u.grid.tiers = {std::move(words), std::move(phones)};
  return u;
}

std::vector<SpeakerSpec> healthy_speakers(int n, int utterances_per_speaker) {
  std::vector<SpeakerSpec> out;
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "H%02d", i + 1);
    out.push_back({id, Disease::kHealthy, 0.0, utterances_per_speaker});
  }
  return out;
}

std::vector<SpeakerSpec> clinical_speakers(int n, int utterances_per_speaker) {
  static constexpr Disease kCycle[] = {Disease::kPD, Disease::kAtaxia, Disease::kALS, Disease::kHD};
  std::vector<SpeakerSpec> out;
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "S%02d", i + 1);
    const double s = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    out.push_back({id, kCycle[i % 4], s, utterances_per_speaker});
  }
  return out;
}

CorpusFiles write_corpus(const fs::path& dir, const std::vector<SpeakerSpec>& speakers, const CorpusOptions& opts) {
  fs::create_directories(dir / "wav");
  fs::create_directories(dir / "textgrid");
  CorpusFiles out;
  std::mt19937_64 seeder(opts.seed);
  for (const auto& sp : speakers) {
    const std::uint64_t speaker_seed = seeder();
    const double f0 = 100.0 + static_cast<double>(speaker_seed % 80);
    for (int k = 0; k < sp.n_utterances; ++k) {
      const std::string utt = sp.speaker_id + "_" + std::to_string(k + 1);
      UtteranceSpec us;
      us.seed = speaker_seed + static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ull;
      us.severity = sp.severity;
      us.f0 = f0;
      us.n_words = opts.words_per_utterance;
      us.sample_rate = opts.sample_rate;
      const Utterance u = make_utterance(us);
      const fs::path wav = fs::path("wav") / (utt + ".wav");
      const fs::path tg = fs::path("textgrid") / (utt + ".TextGrid");
      write_wav(u.audio, dir / wav);
      write_textgrid(u.grid, dir / tg);
      out.corpus.entries.push_back({sp.speaker_id, sp.disease, utt, wav, tg});
    }
    Rating r;
    r.speaker_id = sp.speaker_id;
    r.hypernasality = 1.0 + 6.0 * sp.severity;
    r.articulatory_precision = 7.0 - 6.0 * sp.severity;
    out.table.add(r);
  }
  out.manifest = dir / "manifest.csv";
  out.ratings = dir / "ratings.csv";
  write_manifest(out.corpus, out.manifest);
  write_ratings(out.table, out.ratings);
  out.corpus = load_manifest(out.manifest);
  return out;
}

}  // namespace nap::synth
