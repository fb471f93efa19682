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
#include "nap/nasalization.h"

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.h"
#include "support/test_util.h"

namespace nap {
namespace {

constexpr int kDim = 13;

Eigen::MatrixXd shifted(int n, double mean, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(n, kDim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < kDim; ++d) x(i, d) = mean + g(rng);
  return x;
}

TrainConfig small_cfg() {
  TrainConfig cfg;
  cfg.n_components = 4;
  cfg.seed = 3;
  return cfg;
}

class SeparatedModel : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::mt19937_64 rng(1);
    model_ = new NasalizationModel(train_nasalization(shifted(2000, 3.0, rng), shifted(2000, -3.0, rng), small_cfg()));
  }
  static void TearDownTestSuite() { delete model_; }
  static NasalizationModel* model_;
};
NasalizationModel* SeparatedModel::model_ = nullptr;

TEST_F(SeparatedModel, ClassifiesHeldOutFrames) {
  std::mt19937_64 rng(2);
  const auto nas = shifted(1000, 3.0, rng), orl = shifted(1000, -3.0, rng);
  int correct = 0;
  for (int i = 0; i < 1000; ++i) {
    correct += nasalization_score(*model_, nas.row(i)) > 0.0;
    correct += nasalization_score(*model_, orl.row(i)) < 0.0;
  }
  EXPECT_GE(correct, 1980);
}

TEST_F(SeparatedModel, NineFrameLoopOracle) {
  std::mt19937_64 rng(3);
  const auto x = shifted(9, 0.5, rng);
  double acc = 0.0;
  for (int i = 0; i < 9; ++i)
    acc += oracle::gmm_log_density(model_->nas, x.row(i).transpose()) -
           oracle::gmm_log_density(model_->orl, x.row(i).transpose());
  const double want = acc / 9.0;
  EXPECT_NEAR(nasalization_score(*model_, x), want, 1e-9 * std::max(1.0, std::abs(want)));
}

TEST_F(SeparatedModel, AntisymmetricAndDuplicationInvariant) {
  std::mt19937_64 rng(4);
  const NasalizationModel swapped{model_->orl, model_->nas};
  for (int t = 0; t < 20; ++t) {
    const auto x = shifted(7, t % 2 ? 1.0 : -1.0, rng);
    const double s = nasalization_score(*model_, x);
    EXPECT_EQ(nasalization_score(swapped, x), -s);
    Eigen::MatrixXd twice(14, kDim);
    twice << x, x;
    EXPECT_NEAR(nasalization_score(*model_, twice), s, 1e-12 * std::max(1.0, std::abs(s)));
  }
}

TEST_F(SeparatedModel, SeverityMixtureIsMonotone) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> means;
  for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::bernoulli_distribution pick(alpha);
    double acc = 0.0;
    for (int i = 0; i < 10000; ++i) acc += nasalization_score(*model_, shifted(1, pick(rng) ? 3.0 : -3.0, rng));
    means.push_back(acc / 10000.0);
  }
  for (std::size_t i = 1; i < means.size(); ++i) EXPECT_GT(means[i], means[i - 1]);
}

TEST(NasalizationTest, IdenticalModelsScoreZero) {
  std::mt19937_64 rng(6);
  const auto g = oracle::random_gmm(4, kDim, rng);
  const NasalizationModel same{g, g};
  for (int t = 0; t < 10; ++t) EXPECT_EQ(nasalization_score(same, shifted(5, 0.0, rng)), 0.0);
}

TEST(NasalizationTest, InsufficientNasalFrames) {
  std::mt19937_64 rng(7);
  EXPECT_NAP_ERROR(train_nasalization(Eigen::MatrixXd(0, kDim), shifted(500, 0.0, rng), small_cfg()),
                   Errc::kInsufficientData);
}

TEST(NasalizationTest, Deterministic) {
  std::mt19937_64 rng(8);
  const auto nas = shifted(400, 1.0, rng), orl = shifted(400, -1.0, rng);
  const auto a = train_nasalization(nas, orl, small_cfg());
  const auto b = train_nasalization(nas, orl, small_cfg());
  EXPECT_TRUE(a.nas == b.nas);
  EXPECT_TRUE(a.orl == b.orl);
}

TEST(NasalizationTest, ScoresOnlyExportedPhones) {
  std::mt19937_64 rng(9);
  const auto g = oracle::random_gmm(2, kDim, rng);
  FrameMatrix plp;
  plp.data = shifted(60, 0.0, rng);
  AlignedUtterance u;
  u.audio_duration = 0.61;
  u.words.push_back({"w", 0.0, 0.61});
  const std::vector<std::pair<std::string, double>> phones{{"M", 0.0}, {"AA", 0.1}, {"T", 0.3}, {"D", 0.4}, {"NG", 0.5}};
  int idx = 0;
  for (const auto& [label, t] : phones) {
    PhoneSegment p;
    p.label = label;
    p.t_start = t;
    p.t_end = label == "AA" ? 0.3 : t + 0.1;
    p.word_index = 0;
    p.phone_index = idx++;
    u.phones.push_back(p);
  }
  const auto r = score_nasalization(NasalizationModel{g, g}, assign_nasal_classes(u), plp, "u1");
  ASSERT_EQ(r.scores.size(), 2u);
  EXPECT_EQ(r.scores[0].phone, "AA");
  EXPECT_EQ(r.scores[0].n_frames, 20);
  EXPECT_EQ(r.scores[1].phone, "D");
  EXPECT_EQ(r.scores[1].utterance_id, "u1");
}

}  // namespace
}  // namespace nap
