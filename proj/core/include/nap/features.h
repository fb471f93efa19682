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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nap/phone_score.h"

namespace nap {

struct FeatureStat {
  double sum = 0.0;
  int count = 0;

  bool missing() const { return count == 0; }
  double mean() const;  // NaN when missing
};

// Phone-averaged scores of one speaker. Every exported phone has an entry;
// phones never observed have count 0 and are reported missing.
struct SpeakerFeatureVector {
  std::string speaker_id;
  std::map<std::string, FeatureStat> nasalization;
  std::map<std::string, FeatureStat> articulation;

  // Feature names look like "N(AA)" or "AP(T)".
  std::optional<double> value(std::string_view feature) const;
  int coverage(std::string_view feature) const;
};

std::string feature_name(ScoreKind kind, std::string_view phone);
// Returns false for anything other than N(<phone>) / AP(<phone>).
bool parse_feature_name(std::string_view name, ScoreKind& kind, std::string& phone);

// Pooled arithmetic mean of every score instance per phone. Values are summed
// in sorted order so the result does not depend on input order.
SpeakerFeatureVector aggregate(std::span<const PhoneScore> scores, const std::string& speaker_id);

// "paper-top6": N(AA) N(IY) N(B) N(D) AP(T) AP(F); "all": every exported
// nasalization and articulation feature. Throws InvalidArgument otherwise.
std::vector<std::string> feature_preset(std::string_view name);

// Rows are speakers, columns features; missing cells hold NaN.
struct DesignMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;

  bool has_missing() const { return X.hasNaN(); }
};

enum class MissingPolicy {
  kError,   // throw MissingFeature
  kImpute,  // column mean of present rows
  kKeep,    // leave NaN for fold-internal imputation downstream
};

DesignMatrix to_design_matrix(std::span<const SpeakerFeatureVector> vectors,
                              std::span<const std::string> feature_subset, MissingPolicy policy);

// Column means over non-missing entries. Throws MissingFeature for a column
// with no present value.
Eigen::RowVectorXd present_column_means(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                        std::span<const std::string> names = {});
// Replaces NaN cells of X with the given per-column values.
void fill_missing(Eigen::Ref<Eigen::MatrixXd> X, const Eigen::RowVectorXd& values);

// speaker_id,<features...> with NA for missing.
void write_feature_table(const DesignMatrix& table, const std::filesystem::path& path);
DesignMatrix read_feature_table(const std::filesystem::path& path);
// Selects columns by name, in the given order. Throws MissingFeature.
DesignMatrix select_features(const DesignMatrix& table, std::span<const std::string> names);

// utterance_id,phone,score,n_frames
void write_scores_csv(std::span<const PhoneScore> scores, const std::filesystem::path& path);

}  // namespace nap
