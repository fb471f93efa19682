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
#include <span>
#include <string>
#include <vector>

#include "nap/corpus.h"
#include "nap/gmm.h"
#include "nap/phone_score.h"
#include "nap/recording.h"

namespace nap {

// Two GMMs over PLP13 frames at 8 kHz: nasalized voiced material (nasal
// consonants and the nasal-side halves of adjacent vowels) and oral voiced
// material.
struct NasalizationModel {
  GmmModel nas;
  GmmModel orl;
};

struct NasalizationFrames {
  Eigen::MatrixXd nas;
  Eigen::MatrixXd orl;
};

struct NasalizationTraces {
  TrainTrace nas;
  TrainTrace orl;
};

// NAS- and ORL-tagged frames of one utterance. Classes are assigned here if
// the alignment has not been classed yet.
NasalizationFrames nasalization_frames(const AlignedUtterance& u, const FrameMatrix& plp);

// Trains one GMM per frame pool. Throws InsufficientData naming the class when
// a pool has fewer than 10 * n_components frames.
NasalizationModel train_nasalization(const Eigen::MatrixXd& nas_frames,
                                     const Eigen::MatrixXd& orl_frames, const TrainConfig& cfg,
                                     NasalizationTraces* traces = nullptr);
NasalizationModel train_nasalization(std::span<const Recording> corpus, const TrainConfig& cfg,
                                     NasalizationTraces* traces = nullptr);
// Streams the corpus utterance by utterance; only frame pools stay in memory.
NasalizationModel train_nasalization(const CorpusManifest& corpus, const TierNames& tiers,
                                     const TrainConfig& cfg, NasalizationTraces* traces = nullptr);

// Mean over frames of log f(x | NAS) - log f(x | ORL).
double nasalization_score(const NasalizationModel& m, const Eigen::Ref<const Eigen::MatrixXd>& frames);

struct ScoreResult {
  std::vector<PhoneScore> scores;
  std::size_t skipped_empty = 0;    // phones with no frame center inside
  std::size_t skipped_unknown = 0;  // phones missing from a model inventory
};

// Scores every aligned phone whose label is in nasalization_phones().
ScoreResult score_nasalization(const NasalizationModel& m, const AlignedUtterance& u,
                               const FrameMatrix& plp, const std::string& utterance_id);
ScoreResult score_nasalization(const NasalizationModel& m, const Recording& r);

// Writes nas.napg and orl.napg into dir.
void save_nasalization_model(const NasalizationModel& m, const std::filesystem::path& dir);
NasalizationModel load_nasalization_model(const std::filesystem::path& dir);

}  // namespace nap
