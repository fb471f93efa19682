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
#include "nap/gmm.h"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "support/oracles.h"
#include "support/test_util.h"

namespace nap {
namespace {

Eigen::MatrixXd gaussian(int n, const Eigen::RowVectorXd& mean, double sd, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, sd);
  Eigen::MatrixXd x(n, mean.size());
  for (int i = 0; i < n; ++i)
    for (Eigen::Index d = 0; d < mean.size(); ++d) x(i, d) = mean(d) + g(rng);
  return x;
}

TEST(GmmDensityTest, StandardNormalAtMean) {
  const GmmModel m(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Ones(1, 2));
  EXPECT_NEAR(m.log_density(Eigen::VectorXd::Zero(2)), -std::log(2.0 * std::numbers::pi), 1e-14);
}

TEST(GmmDensityTest, IdenticalComponentsCollapse) {
  std::mt19937_64 rng(1);
  const auto one = oracle::random_gmm(1, 3, rng);
  Eigen::MatrixXd mu(2, 3), var(2, 3);
  mu << one.means(), one.means();
  var << one.variances(), one.variances();
  const GmmModel two(Eigen::VectorXd::Constant(2, 0.5), mu, var);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = Eigen::VectorXd::Random(3) * 4.0;
    EXPECT_NEAR(two.log_density(x), one.log_density(x), 1e-12);
  }
}

TEST(GmmDensityTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_gmm(16, 13, rng);
    const Eigen::MatrixXd x = oracle::sample_gmm(m, 1, rng);
    const double want = oracle::gmm_log_density(m, x.row(0).transpose());
    EXPECT_NEAR(m.log_density(x.row(0).transpose()), want, 1e-9 * std::abs(want));
  }
}

TEST(GmmDensityTest, MatrixMatchesRows) {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_gmm(4, 5, rng);
  Eigen::MatrixXd x = oracle::sample_gmm(m, 100, rng);
  x.row(7) = x.row(3);
  const auto ll = m.log_likelihood_matrix(x);
  ASSERT_EQ(ll.size(), 100);
  double oracle_sum = 0.0;
  for (int i = 0; i < 100; ++i) oracle_sum += oracle::gmm_log_density(m, x.row(i).transpose());
  EXPECT_NEAR(ll.sum(), oracle_sum, 1e-9 * std::abs(oracle_sum));
  EXPECT_EQ(ll(7), ll(3));
  EXPECT_EQ(m.log_likelihood_matrix(x.topRows(1))(0), m.log_density(x.row(0).transpose()));
}

TEST(GmmDensityTest, DimensionMismatch) {
  std::mt19937_64 rng(4);
  const auto m = oracle::random_gmm(2, 3, rng);
  EXPECT_NAP_ERROR(m.log_density(Eigen::VectorXd::Zero(4)), Errc::kDimensionMismatch);
  EXPECT_NAP_ERROR(m.log_likelihood_matrix(Eigen::MatrixXd::Zero(2, 2)), Errc::kDimensionMismatch);
}

TEST(GmmDensityTest, ComponentPermutationInvariance) {
  std::mt19937_64 rng(5);
  const auto m = oracle::random_gmm(6, 4, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(6);
  p.setIdentity();
  std::shuffle(p.indices().data(), p.indices().data() + 6, rng);
  const GmmModel q(p * m.weights(), p * m.means(), p * m.variances());
  const auto x = oracle::sample_gmm(m, 50, rng);
  EXPECT_LT((m.log_likelihood_matrix(x) - q.log_likelihood_matrix(x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GmmDensityTest, IntegratesToOne) {
  const Eigen::Vector2d w(0.3, 0.7);
  Eigen::MatrixXd mu(2, 2), var(2, 2);
  mu << -1.0, 0.5, 1.5, -0.5;
  var << 0.5, 1.0, 0.8, 0.3;
  const GmmModel m(w, mu, var);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) acc += std::exp(m.log_density(Eigen::Vector2d(u(rng), u(rng))));
  const double integral = acc / n * 256.0;
  EXPECT_GE(integral, 0.95);
  EXPECT_LE(integral, 1.0 + 5e-3);
}

TEST(GmmTrainTest, SingleComponentIsMle) {
  std::mt19937_64 rng(7);
  const Eigen::RowVector2d mean(1.0, -2.0);
  const auto x = gaussian(2000, mean, 1.5, rng);
  TrainConfig cfg;
  cfg.n_components = 1;
  const auto m = train_em(x, cfg);
  const Eigen::RowVectorXd sample_mean = x.colwise().mean();
  EXPECT_LT((m.means().row(0) - sample_mean).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((m.means().row(0) - mean).cwiseAbs().maxCoeff(), 3.0 * 1.5 / std::sqrt(2000.0));
  const Eigen::RowVectorXd sample_var = (x.rowwise() - sample_mean).array().square().colwise().mean();
  EXPECT_LT((m.variances().row(0) - sample_var).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(m.weights()(0), 1.0, 1e-12);
}

TEST(GmmTrainTest, TwoClusters) {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd x(2000, 1);
  x << gaussian(1000, Eigen::RowVectorXd::Constant(1, -10.0), 1.0, rng),
      gaussian(1000, Eigen::RowVectorXd::Constant(1, 10.0), 1.0, rng);
  TrainConfig cfg;
  cfg.n_components = 2;
  const auto m = train_em(x, cfg);
  const int lo = m.means()(0, 0) < m.means()(1, 0) ? 0 : 1;
  EXPECT_NEAR(m.means()(lo, 0), -10.0, 0.5);
  EXPECT_NEAR(m.means()(1 - lo, 0), 10.0, 0.5);
  EXPECT_NEAR(m.weights()(0), 0.5, 0.05);
  EXPECT_NEAR(m.weights()(1), 0.5, 0.05);
}

TEST(GmmTrainTest, DeterministicAndThreadInvariant) {
  std::mt19937_64 rng(9);
  const auto truth = oracle::random_gmm(4, 3, rng);
  const auto x = oracle::sample_gmm(truth, 3000, rng);
  TrainConfig cfg;
  cfg.n_components = 4;
  cfg.seed = 11;
  const auto a = train_em(x, cfg);
  EXPECT_TRUE(a == train_em(x, cfg));
  cfg.n_threads = 4;
  EXPECT_TRUE(a == train_em(x, cfg));
}

TEST(GmmTrainTest, MonotoneTraceAndFloor) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto truth = oracle::random_gmm(16, 2, rng);
    const auto x = oracle::sample_gmm(truth, 5000, rng);
    TrainConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    TrainTrace trace;
    const auto m = train_em(x, cfg, &trace);
    ASSERT_FALSE(trace.mean_log_likelihood.empty());
    for (std::size_t i = 1; i < trace.mean_log_likelihood.size(); ++i) {
      if (std::find(trace.reseed_iterations.begin(), trace.reseed_iterations.end(), static_cast<int>(i)) !=
          trace.reseed_iterations.end())
        continue;
      EXPECT_GE(trace.mean_log_likelihood[i], trace.mean_log_likelihood[i - 1] - 1e-10);
    }
    EXPECT_GE(m.variances().minCoeff(), cfg.variance_floor);
    EXPECT_NEAR(m.weights().sum(), 1.0, 1e-12);
  }
}

TEST(GmmTrainTest, VarianceFloorOnDegenerateData) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(100, 2, 3.0);
  x.col(1).setLinSpaced(100, 0.0, 1.0);
  TrainConfig cfg;
  cfg.n_components = 2;
  cfg.variance_floor = 1e-4;
  const auto m = train_em(x, cfg);
  EXPECT_GE(m.variances().minCoeff(), 1e-4);
  EXPECT_TRUE(m.means().allFinite());
}

TEST(GmmTrainTest, Guards) {
  TrainConfig cfg;
  EXPECT_NAP_ERROR(train_em(Eigen::MatrixXd::Random(159, 2), cfg), Errc::kInsufficientData);
  cfg.covariance = CovarianceType::kFull;
  EXPECT_NAP_ERROR(train_em(Eigen::MatrixXd::Random(1000, 2), cfg), Errc::kInvalidArgument);
}

TEST(GmmIoTest, RoundTripBitExact) {
  testing::TempDir dir;
  std::mt19937_64 rng(12);
  const auto m = oracle::random_gmm(16, 13, rng);
  save_model(m, dir / "m.napg");
  EXPECT_TRUE(load_model(dir / "m.napg") == m);
  const auto bytes = testing::read_text(dir / "m.napg");
  EXPECT_EQ(bytes.substr(0, 4), "NAPG");
  EXPECT_EQ(bytes.size(), 16u + 8u * (16 + 2 * 16 * 13));
}

TEST(GmmIoTest, TruncatedAndFutureVersion) {
  testing::TempDir dir;
  std::mt19937_64 rng(13);
  save_model(oracle::random_gmm(2, 2, rng), dir / "m.napg");
  auto bytes = testing::read_text(dir / "m.napg");
  testing::write_text(dir / "t.napg", bytes.substr(0, bytes.size() - 3));
  EXPECT_NAP_ERROR(load_model(dir / "t.napg"), Errc::kCorruptFile);
  bytes[4] = static_cast<char>(kModelFormatVersion + 1);
  testing::write_text(dir / "v.napg", bytes);
  EXPECT_NAP_ERROR(load_model(dir / "v.napg"), Errc::kVersionMismatch);
  EXPECT_NAP_ERROR(load_model(dir / "missing.napg"), Errc::kPathNotFound);
}

}  // namespace
}  // namespace nap
