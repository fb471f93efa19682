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
#include "nap/evaluation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support/oracles.h"
#include "support/test_util.h"

namespace nap {
namespace {

// y = 4 + 0.8 * x0 - 0.5 * x1 + noise, inside the rating scale.
Dataset noisy_linear(int n, int p, std::uint64_t seed, double noise = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset d;
  d.X.resize(n, p);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    d.speaker_ids.push_back("S" + std::to_string(100 + (i * 7) % n));
    for (int j = 0; j < p; ++j) d.X(i, j) = g(rng);
    d.y(i) = std::clamp(4.0 + 0.8 * d.X(i, 0) - 0.5 * d.X(i, 1 % p) + noise * g(rng), 1.0, 7.0);
  }
  for (int j = 0; j < p; ++j) d.feature_names.push_back("F" + std::to_string(j));
  return d;
}

TEST(LosoTest, MatchesDoubleLoopOracle) {
  Dataset d = noisy_linear(10, 3, 1);
  d.X(2, 1) = std::numeric_limits<double>::quiet_NaN();
  d.X(7, 0) = std::numeric_limits<double>::quiet_NaN();
  EvalOptions opts;
  opts.lambda = 0.7;
  const auto rep = loso_evaluate(d, opts);
  const auto oracle_folds = oracle::naive_loso(d.speaker_ids, d.X, d.y, 0.7);
  ASSERT_EQ(rep.folds.size(), oracle_folds.size());
  for (std::size_t k = 0; k < oracle_folds.size(); ++k) {
    EXPECT_EQ(rep.folds[k].held_out, oracle_folds[k].held_out);
    EXPECT_EQ(rep.folds[k].train_ids, oracle_folds[k].train_ids);
    EXPECT_EQ(rep.predictions[k].speaker_id, oracle_folds[k].held_out);
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(rep.folds[k].impute_means(static_cast<Eigen::Index>(j)), oracle_folds[k].impute_means[j], 1e-12);
    EXPECT_NEAR(rep.predictions[k].predicted, oracle_folds[k].prediction, 1e-12);
  }
}

TEST(LosoTest, NoLeakageFromHeldOutRow) {
  Dataset d = noisy_linear(10, 3, 2);
  d.X(4, 2) = std::numeric_limits<double>::quiet_NaN();
  const auto base = loso_evaluate(d);
  Dataset perturbed = d;
  const auto& held = base.folds[3].held_out;
  const auto row = std::find(d.speaker_ids.begin(), d.speaker_ids.end(), held) - d.speaker_ids.begin();
  perturbed.X.row(row).array() += 1000.0;
  perturbed.y(row) = 7.0;
  const auto after = loso_evaluate(perturbed);
  EXPECT_EQ(after.folds[3].model.mean, base.folds[3].model.mean);
  EXPECT_EQ(after.folds[3].model.sd, base.folds[3].model.sd);
  EXPECT_EQ(after.folds[3].model.weights, base.folds[3].model.weights);
  EXPECT_EQ(after.folds[3].model.intercept, base.folds[3].model.intercept);
  EXPECT_EQ(after.folds[3].impute_means, base.folds[3].impute_means);
  EXPECT_NE(after.folds[4].model.mean, base.folds[4].model.mean);
}

TEST(LosoTest, RowOrderInvariant) {
  const Dataset d = noisy_linear(12, 4, 3);
  Dataset shuffled = d;
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(4));
  for (int i = 0; i < 12; ++i) {
    shuffled.speaker_ids[static_cast<std::size_t>(i)] = d.speaker_ids[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    shuffled.X.row(i) = d.X.row(perm[static_cast<std::size_t>(i)]);
    shuffled.y(i) = d.y(perm[static_cast<std::size_t>(i)]);
  }
  EXPECT_EQ(report_to_json(loso_evaluate(d)), report_to_json(loso_evaluate(shuffled)));
  EvalOptions threaded;
  threaded.n_threads = 4;
  EXPECT_EQ(report_to_json(loso_evaluate(d)), report_to_json(loso_evaluate(d, threaded)));
}

TEST(LosoTest, RealizableTarget) {
  Dataset d = noisy_linear(15, 2, 5, 0.0);
  d.y = (4.0 + 0.5 * d.X.col(0).array()).matrix();
  EvalOptions opts;
  opts.lambda = 1e-8;
  const auto rep = loso_evaluate(d, opts);
  EXPECT_GE(rep.metrics.pcc, 0.999);
  EXPECT_LE(rep.metrics.mae, 1e-3);
}

TEST(LosoTest, ConstantRatingsFlagPcc) {
  Dataset d = noisy_linear(8, 2, 6);
  d.y.setConstant(3.0);
  const auto rep = loso_evaluate(d);
  EXPECT_FALSE(rep.metrics.pcc_defined);
  EXPECT_EQ(rep.metrics.pcc, 0.0);
  double mae = 0.0;
  for (const auto& p : rep.predictions) mae += std::abs(p.predicted - 3.0);
  EXPECT_NEAR(rep.metrics.mae, mae / 8.0, 1e-15);
}

TEST(LosoTest, Guards) {
  Dataset d = noisy_linear(5, 2, 7);
  d.speaker_ids[1] = d.speaker_ids[0];
  EXPECT_NAP_ERROR(loso_evaluate(d), Errc::kDuplicateSpeaker);
  EXPECT_NAP_ERROR(loso_evaluate(noisy_linear(2, 2, 7)), Errc::kInsufficientData);
  Dataset miss = noisy_linear(5, 2, 7);
  miss.X(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EvalOptions no_impute;
  no_impute.impute = false;
  try {
    loso_evaluate(miss, no_impute);
    FAIL() << "expected MissingFeature";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMissingFeature);
    EXPECT_NE(std::string(e.what()).find("fold "), std::string::npos);
  }
}

TEST(LosoTest, LambdaSweepPicksFromGrid) {
  const Dataset d = noisy_linear(12, 3, 8);
  EvalOptions opts;
  opts.lambda_grid = default_lambda_grid();
  const auto rep = loso_evaluate(d, opts);
  EXPECT_TRUE(rep.lambda_swept);
  for (const auto& f : rep.folds)
    EXPECT_NE(std::find(opts.lambda_grid.begin(), opts.lambda_grid.end(), f.model.lambda), opts.lambda_grid.end());
}

Dataset with_diseases(Dataset d, const std::vector<Disease>& cycle) {
  for (Eigen::Index i = 0; i < d.rows(); ++i) d.diseases.push_back(cycle[static_cast<std::size_t>(i) % cycle.size()]);
  return d;
}

TEST(LodoTest, SymmetricDiseasesMatchPooledLoso) {
  const Dataset d = with_diseases(noisy_linear(40, 2, 9), {Disease::kPD, Disease::kALS});
  const auto lodo = lodo_evaluate(d, Disease::kPD);
  const auto loso = loso_evaluate(d);
  EXPECT_EQ(lodo.predictions.size(), 20u);
  EXPECT_EQ(lodo.folds.size(), 1u);
  EXPECT_NEAR(lodo.metrics.pcc, loso.metrics.pcc, 0.1);
}

TEST(LodoTest, AbsentDiseaseAndRealizable) {
  Dataset d = with_diseases(noisy_linear(12, 1, 10, 0.0), {Disease::kPD, Disease::kAtaxia, Disease::kHD});
  d.y = (3.5 + 0.6 * d.X.col(0).array()).matrix();
  EXPECT_NAP_ERROR(lodo_evaluate(d, Disease::kALS), Errc::kEmptyDiseaseGroup);
  EvalOptions opts;
  opts.lambda = 1e-8;
  EXPECT_LE(lodo_evaluate(d, Disease::kHD, opts).metrics.mae, 1e-3);
  Dataset unlabeled = d;
  unlabeled.diseases.clear();
  EXPECT_NAP_ERROR(lodo_evaluate(unlabeled, Disease::kHD), Errc::kInvalidArgument);
}

TEST(ForwardSelectTest, MatchesExhaustiveSearch) {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Dataset d;
    d.X.resize(14, 5);
    d.y.resize(14);
    for (int i = 0; i < 14; ++i) {
      d.speaker_ids.push_back("S" + std::to_string(10 + i));
      for (int j = 0; j < 5; ++j) d.X(i, j) = g(rng);
      d.y(i) = std::clamp(4.0 + 1.2 * d.X(i, 2) + 0.2 * g(rng), 1.0, 7.0);
    }
    d.feature_names = {"A", "B", "C", "D", "E"};
    const auto sel = forward_select(d);
    const auto ex = oracle::exhaustive_subsets(d.speaker_ids, d.X, d.y, 1.0);
    ASSERT_FALSE(sel.selected.empty());
    EXPECT_EQ(sel.selected[0], d.feature_names[static_cast<std::size_t>(ex.best_single.cols[0])]);
    EXPECT_EQ(sel.selected[0], "C");
    EXPECT_LE(sel.selected.size(), 2u);
    EXPECT_NEAR(sel.trace.back().mse, ex.best.mse, 1e-9);
    EXPECT_NEAR(sel.baseline_mse, oracle::naive_loso_mse(d.speaker_ids, d.X, d.y, 1.0, {}), 1e-12);
  }
}

TEST(ForwardSelectTest, DuplicateColumnsTieToLowerIndex) {
  Dataset d = noisy_linear(12, 3, 14, 0.1);
  d.X.col(2) = d.X.col(0);
  d.feature_names = {"first", "other", "copy"};
  const auto sel = forward_select(d);
  EXPECT_EQ(sel.selected[0], "first");
  EXPECT_EQ(std::count(sel.selected.begin(), sel.selected.end(), "copy"), 0);
}

TEST(ForwardSelectTest, TraceStrictlyDecreasing) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset d;
  d.X.resize(15, 6);
  d.y.resize(15);
  for (int i = 0; i < 15; ++i) {
    d.speaker_ids.push_back("N" + std::to_string(i));
    for (int j = 0; j < 6; ++j) d.X(i, j) = g(rng);
    d.y(i) = std::clamp(4.0 + g(rng), 1.0, 7.0);
  }
  for (int j = 0; j < 6; ++j) d.feature_names.push_back("noise" + std::to_string(j));
  const auto sel = forward_select(d);
  double prev = sel.baseline_mse;
  for (const auto& s : sel.trace) {
    EXPECT_LT(s.mse, prev);
    prev = s.mse;
  }
}

TEST(JoinTest, MatchesRatingsAndManifest) {
  DesignMatrix f;
  f.row_ids = {"B", "A", "C"};
  f.feature_names = {"N(AA)"};
  f.X = Eigen::Vector3d(1, 2, 3);
  RatingsTable r;
  r.add({"A", 2.0, std::nullopt});
  r.add({"B", 3.0, std::nullopt});
  r.add({"Z", 4.0, std::nullopt});
  const auto j = join_ratings(f, r);
  EXPECT_EQ(j.data.speaker_ids, (std::vector<std::string>{"B", "A"}));
  EXPECT_EQ(j.data.X(1, 0), 2.0);
  EXPECT_EQ(j.data.y(0), 3.0);
  EXPECT_EQ(j.unrated, std::vector<std::string>{"C"});
  EXPECT_EQ(j.unfeatured, std::vector<std::string>{"Z"});
}

TEST(ReportTest, CsvOutputs) {
  testing::TempDir dir;
  const auto rep = loso_evaluate(noisy_linear(5, 2, 16));
  write_predictions_csv(rep, dir / "p.csv");
  const auto text = testing::read_text(dir / "p.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "speaker_id,actual,predicted");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  const auto sel = forward_select(noisy_linear(8, 3, 17));
  write_selection_csv(sel, dir / "s.csv");
  const auto s = testing::read_text(dir / "s.csv");
  EXPECT_EQ(s.substr(0, s.find('\n')), "step,feature,pcc,mse");
  EXPECT_NE(s.find("0,(intercept),NA,"), std::string::npos);
}

}  // namespace
}  // namespace nap
