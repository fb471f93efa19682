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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nap/corpus.h"
#include "nap/textgrid.h"
#include "nap/wav.h"

namespace nap::synth {

// Source-filter speech-like audio with a matching words/phones TextGrid.
//
// Oral voiced phones are a pulse train through vowel or consonant formants.
// Nasal consonants and the nasal-side halves of adjacent vowels add a 250 Hz
// nasal pole and an antiresonance. Unvoiced phones are band-limited noise.
// Each phone has an alternate rendering: nasalized for oral voiced phones,
// nasal murmur for unvoiced ones. At severity s every 20 ms block of those
// phones is drawn from the alternate rendering with probability s.
struct UtteranceSpec {
  std::uint64_t seed = 0;
  double severity = 0.0;
  double f0 = 120.0;
  int n_words = 8;
  int sample_rate = 16000;
};

struct Utterance {
  Waveform audio;
  TextGrid grid;
};

Utterance make_utterance(const UtteranceSpec& spec);

// One phone of n_samples with the given fraction of alternate blocks.
std::vector<double> render_phone(const std::string& phone, double nasal_fraction, std::size_t n_samples, double f0,
                                 int sample_rate, std::uint64_t seed);

struct SpeakerSpec {
  std::string speaker_id;
  Disease disease = Disease::kHealthy;
  double severity = 0.0;
  int n_utterances = 4;
};

struct CorpusOptions {
  std::uint64_t seed = 0;
  int words_per_utterance = 8;
  int sample_rate = 16000;
};

struct CorpusFiles {
  std::filesystem::path manifest;
  std::filesystem::path ratings;
  CorpusManifest corpus;
  RatingsTable table;
};

// Writes wav/, textgrid/, manifest.csv (relative paths) and ratings.csv with
// hypernasality 1 + 6s and articulatory precision 7 - 6s.
CorpusFiles write_corpus(const std::filesystem::path& dir, const std::vector<SpeakerSpec>& speakers,
                         const CorpusOptions& opts = {});

// n healthy speakers at severity 0.
std::vector<SpeakerSpec> healthy_speakers(int n, int utterances_per_speaker);
// n speakers with severities evenly spread over [0, 1], diseases cycling
// through PD, A, ALS, HD.
std::vector<SpeakerSpec> clinical_speakers(int n, int utterances_per_speaker);

}  // namespace nap::synth
