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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nap/corpus.h"
#include "nap/gmm.h"
#include "nap/nasalization.h"
#include "nap/recording.h"

namespace nap {

// One GMM per phone over utterance-normalized MFCC39 frames at 16 kHz.
// Phones are kept in sorted order, which fixes the scan order of the max.
struct ArticulationModel {
  std::map<std::string, GmmModel> phone_gmms;

  std::vector<std::string> inventory() const;
  bool contains(const std::string& phone) const { return phone_gmms.count(phone) > 0; }
};

using PhoneFramePools = std::map<std::string, std::vector<Eigen::MatrixXd>>;

// Frames per aligned phone label (vowels, nasals, voiced and unvoiced
// consonants; silences and unknown labels are left out).
PhoneFramePools articulation_frames(const AlignedUtterance& u, const FrameMatrix& mfcc);

struct ArticulationTraining {
  ArticulationModel model;
  std::vector<std::string> dropped;  // phones below 10 * n_components frames
  std::map<std::string, TrainTrace> traces;
};

// Phones with too few frames are dropped with a warning; throws
// InsufficientData only if nothing is left.
ArticulationTraining train_articulation(const std::map<std::string, Eigen::MatrixXd>& pools,
                                        const TrainConfig& cfg);
ArticulationTraining train_articulation(std::span<const Recording> corpus, const TrainConfig& cfg);
ArticulationTraining train_articulation(const CorpusManifest& corpus, const TierNames& tiers,
                                        const TrainConfig& cfg);

// (log P(X | phone) - max_q log P(X | q)) / |X|; always <= 0. Throws
// UnknownPhone when phone has no model.
double articulation_score(const ArticulationModel& m, const std::string& phone,
                          const Eigen::Ref<const Eigen::MatrixXd>& frames);

// Scores unvoiced phones, or every phone when all_phones is set. Phones not in
// the inventory are skipped and counted.
ScoreResult score_articulation(const ArticulationModel& m, const AlignedUtterance& u,
                               const FrameMatrix& mfcc, const std::string& utterance_id,
                               bool all_phones = false);
ScoreResult score_articulation(const ArticulationModel& m, const Recording& r, bool all_phones = false);

// Directory of <PHONE>.napg files plus inventory.json.
void save_articulation_model(const ArticulationModel& m, const std::filesystem::path& dir);
ArticulationModel load_articulation_model(const std::filesystem::path& dir);

}  // namespace nap
