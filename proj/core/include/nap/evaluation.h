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
#include <optional>
#include <string>
#include <vector>

#include "nap/corpus.h"
#include "nap/features.h"
#include "nap/ridge.h"

namespace nap {

// Speaker-level regression data. X may contain NaN for missing features.
struct Dataset {
  std::vector<std::string> speaker_ids;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<Disease> diseases;  // empty, or one per row

  Eigen::Index rows() const { return X.rows(); }
};

struct JoinResult {
  Dataset data;
  std::vector<std::string> unrated;     // feature rows without a rating
  std::vector<std::string> unfeatured;  // ratings without a feature row
};

// Inner join on speaker_id, target = hypernasality. With a manifest, every
// joined speaker must appear in it (UnknownDisease otherwise).
JoinResult join_ratings(const DesignMatrix& features, const RatingsTable& ratings,
                        const CorpusManifest* manifest = nullptr);
Dataset select_columns(const Dataset& d, const std::vector<std::string>& names);

struct EvalOptions {
  double lambda = 1.0;
  // Non-empty: λ is chosen per outer fold by inner LOSO MSE on the
  // training speakers (first minimum in grid order).
  std::vector<double> lambda_grid;
  // Missing cells are filled with training-fold column means; when false
  // they raise MissingFeature.
  bool impute = true;
  int n_threads = 1;
};

std::vector<double> default_lambda_grid();  // 1e-3, 1e-2, ..., 1e2

enum class Scheme { kLoso, kLodo };

struct FoldResult {
  std::string held_out;               // speaker id (LOSO) or disease label (LODO)
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  Eigen::RowVectorXd impute_means;    // training-fold column means used for imputation
  RidgeModel model;
};

struct SpeakerPrediction {
  std::string speaker_id;
  double actual = 0.0;
  double predicted = 0.0;
};

struct EvalReport {
  Scheme scheme = Scheme::kLoso;
  std::optional<Disease> held_out_disease;
  double lambda = 1.0;
  bool lambda_swept = false;
  std::vector<std::string> feature_names;
  std::vector<SpeakerPrediction> predictions;  // sorted by speaker id
  Metrics metrics;
  std::vector<FoldResult> folds;
};

// Speakers are processed in sorted id order, so row order does not matter.
// Throws InsufficientData (< 3 speakers), DuplicateSpeaker, and rethrows
// fold errors with the fold index prepended.
EvalReport loso_evaluate(const Dataset& data, const EvalOptions& opts = {});
// Requires diseases. Throws EmptyDiseaseGroup when the held-out disease has no
// speakers and InsufficientData when fewer than 3 training speakers remain.
EvalReport lodo_evaluate(const Dataset& data, Disease held_out, const EvalOptions& opts = {});

struct SelectionStep {
  int step = 0;
  std::string feature;
  double pcc = 0.0;
  double mse = 0.0;
};

struct SelectionResult {
  std::vector<std::string> selected;
  std::vector<SelectionStep> trace;
  double baseline_mse = 0.0;  // LOSO MSE of the intercept-only model
};

// Greedy forward selection on LOSO MSE with strict-decrease stopping. Ties go
// to the lower column index. max_features <= 0 means no limit.
SelectionResult forward_select(const Dataset& data, const EvalOptions& opts = {}, int max_features = 0);

std::string report_to_json(const EvalReport& report);
void write_report_json(const EvalReport& report, const std::filesystem::path& path);
// speaker_id,actual,predicted
void write_predictions_csv(const EvalReport& report, const std::filesystem::path& path);
// step,feature,pcc,mse
void write_selection_csv(const SelectionResult& result, const std::filesystem::path& path);

}  // namespace nap
