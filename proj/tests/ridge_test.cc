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
#include "nap/ridge.h"

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.h"
#include "support/test_util.h"

namespace nap {
namespace {

Eigen::MatrixXd randn(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(r, c);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

TEST(RidgeTest, ExactLine) {
  Eigen::MatrixXd X(2, 1);
  X << 1, 2;
  const Eigen::Vector2d y(1, 2);
  const auto m = fit_ridge(X, y, 0.0);
  EXPECT_NEAR(m.raw_weights()(0), 1.0, 1e-12);
  EXPECT_NEAR(m.raw_intercept(), 0.0, 1e-12);
}

TEST(RidgeTest, ClosedFormFiveSevenths) {
  Eigen::MatrixXd X(2, 1);
  X << 1, 2;
  const Eigen::Vector2d y(1, 2);
  EXPECT_NEAR(ridge_solve(X, y, 2.0)(0), 5.0 / 7.0, 1e-12);
}

double objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, const Eigen::VectorXd& w) {
  return (y - X * w).squaredNorm() + lambda * w.squaredNorm();
}

TEST(RidgeTest, FiniteDifferenceGradientVanishes) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd X = randn(20, 6, rng);
    const Eigen::VectorXd y = randn(20, 1, rng);
    const Eigen::VectorXd w = ridge_solve(X, y, 0.5);
    Eigen::VectorXd grad(6);
    const double h = 1e-5;
    for (int j = 0; j < 6; ++j) {
      Eigen::VectorXd wp = w, wm = w;
      wp(j) += h;
      wm(j) -= h;
      grad(j) = (objective(X, y, 0.5, wp) - objective(X, y, 0.5, wm)) / (2 * h);
    }
    EXPECT_LT(grad.norm(), 1e-8);
  }
}

TEST(RidgeTest, MatchesNaiveOracle) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = randn(15, 4, rng);
  const Eigen::VectorXd y = (X * Eigen::Vector4d(1, -2, 0.5, 0)).array() + 4.0;
  std::vector<std::vector<double>> rows(15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 4; ++j) rows[static_cast<std::size_t>(i)].push_back(X(i, j));
  const auto naive = oracle::naive_ridge(rows, std::vector<double>(y.data(), y.data() + 15), 1.3);
  const auto m = fit_ridge(X, y, 1.3);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(m.weights(j), naive.w[static_cast<std::size_t>(j)], 1e-12);
  for (int i = 0; i < 15; ++i)
    EXPECT_NEAR(predict_unclipped(m, X.row(i).transpose()), naive.predict(rows[static_cast<std::size_t>(i)]), 1e-12);
}

TEST(RidgeTest, MeanInputPredictsMeanRating) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd X = randn(12, 3, rng);
  const Eigen::VectorXd y = (randn(12, 1, rng).array() + 4.0).matrix();
  for (double lambda : {0.0, 0.1, 10.0}) {
    const auto m = fit_ridge(X, y, lambda);
    EXPECT_NEAR(predict(m, X.colwise().mean().transpose()), y.mean(), 1e-12);
  }
}

TEST(RidgeTest, ZeroWeightsAndClipping) {
  RidgeModel m;
  m.weights = Eigen::VectorXd::Zero(2);
  m.mean = Eigen::VectorXd::Zero(2);
  m.sd = Eigen::VectorXd::Ones(2);
  m.intercept = 3.5;
  EXPECT_EQ(predict(m, Eigen::Vector2d(100, -7)), 3.5);
  m.intercept = 8.2;
  EXPECT_EQ(predict_unclipped(m, Eigen::Vector2d(0, 0)), 8.2);
  EXPECT_EQ(predict(m, Eigen::Vector2d(0, 0)), 7.0);
  m.intercept = -2.0;
  EXPECT_EQ(predict(m, Eigen::Vector2d(0, 0)), 1.0);
  EXPECT_NAP_ERROR(predict(m, Eigen::Vector3d(0, 0, 0)), Errc::kDimensionMismatch);
}

TEST(RidgeTest, ConstantColumnInactive) {
  Eigen::MatrixXd X(4, 2);
  X << 1, 5, 2, 5, 3, 5, 4, 5;
  const Eigen::Vector4d y(1, 2, 3, 4);
  const auto m = fit_ridge(X, y, 0.0);
  EXPECT_FALSE(m.active(1));
  EXPECT_EQ(m.weights(1), 0.0);
  EXPECT_NEAR(m.raw_weights()(0), 1.0, 1e-12);
}

TEST(RidgeTest, SingularAtZeroLambda) {
  Eigen::MatrixXd X(4, 2);
  X << 1, 2, 2, 4, 3, 6, 4, 8;
  EXPECT_NAP_ERROR(fit_ridge(X, Eigen::Vector4d(1, 2, 3, 4), 0.0), Errc::kSingularSystem);
  EXPECT_NO_THROW(fit_ridge(X, Eigen::Vector4d(1, 2, 3, 4), 0.1));
  EXPECT_NAP_ERROR(fit_ridge(X, Eigen::Vector4d(1, 2, 3, 4), -1.0), Errc::kInvalidArgument);
}

TEST(RidgeTest, LambdaContinuity) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd X = randn(30, 5, rng);
  const Eigen::VectorXd y = randn(30, 1, rng);
  for (double lambda : {0.01, 1.0, 100.0})
    EXPECT_LT((fit_ridge(X, y, lambda).weights - fit_ridge(X, y, lambda + 1e-9).weights).norm(), 1e-6);
}

TEST(RidgeTest, HugeLambdaPredictsMean) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd X = randn(25, 4, rng);
  const Eigen::VectorXd y = (X.col(0).array() + 4.0).matrix();
  const auto m = fit_ridge(X, y, 1e6);
  const Eigen::MatrixXd probe = randn(50, 4, rng);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(predict(m, probe.row(i).transpose()), y.mean(), 1e-3);
}

TEST(MetricsTest, HandCases) {
  auto m = metrics(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_NEAR(m.pcc, 1.0, 1e-15);
  m = metrics(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(3, 2, 1));
  EXPECT_NEAR(m.pcc, -1.0, 1e-15);
  EXPECT_NEAR(m.mae, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(metrics(Eigen::Vector2d(1, 2), Eigen::Vector2d(2, 4)).mae, 1.5);
  m = metrics(Eigen::Vector3d(2, 2, 2), Eigen::Vector3d(1, 2, 4));
  EXPECT_FALSE(m.pcc_defined);
  EXPECT_EQ(m.pcc, 0.0);
  EXPECT_NEAR(m.mae, 1.0, 1e-15);
}

TEST(MetricsTest, PccAffineInvariantMaeNot) {
  std::mt19937_64 rng(6);
  const Eigen::VectorXd a = randn(40, 1, rng), p = randn(40, 1, rng) + a;
  const Eigen::VectorXd q = (2.5 * p.array() + 1.0).matrix();
  EXPECT_NEAR(metrics(a, p).pcc, metrics(a, q).pcc, 1e-12);
  EXPECT_GT(std::abs(metrics(a, p).mae - metrics(a, q).mae), 1e-3);
}

}  // namespace
}  // namespace nap
