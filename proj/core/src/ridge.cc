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

#include <algorithm>
#include <cmath>

#include "nap/error.h"

namespace nap {
namespace {

Eigen::VectorXd solve_normal(const Eigen::MatrixXd& Z, const Eigen::VectorXd& t, double lambda) {
  if (Z.cols() == 0) return Eigen::VectorXd(0);
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z);
    qr.setThreshold(1e-10);
    if (qr.rank() < Z.cols())
      fail(Errc::kSingularSystem, "rank " + std::to_string(qr.rank()) + " < " + std::to_string(Z.cols()) +
                                      " features at lambda 0");
    return qr.solve(t);
  }
  Eigen::MatrixXd A = Z.transpose() * Z;
  A.diagonal().array() += lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success) fail(Errc::kSingularSystem, "normal equations not positive definite");
  return ldlt.solve(Z.transpose() * t);
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(Errc::kInvalidArgument, "lambda must be finite and >= 0");
}

}  // namespace

Eigen::VectorXd RidgeModel::raw_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(weights.size());
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    if (active(j)) w(j) = weights(j) / sd(j);
  return w;
}

double RidgeModel::raw_intercept() const { return intercept - raw_weights().dot(mean); }

Eigen::VectorXd ridge_solve(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y, double lambda) {
  check_lambda(lambda);
  if (X.rows() != y.size()) fail(Errc::kDimensionMismatch, "X rows != y length");
  return solve_normal(X, y, lambda);
}

RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lambda, std::vector<std::string> feature_names) {
  check_lambda(lambda);
  if (X.rows() != y.size()) fail(Errc::kDimensionMismatch, "X rows != y length");
  if (X.rows() < 2) fail(Errc::kInsufficientData, "ridge needs at least 2 rows");
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != X.cols())
    fail(Errc::kDimensionMismatch, "feature name count != X columns");
  if (X.hasNaN()) fail(Errc::kMissingFeature, "design matrix has missing cells");

  const Eigen::Index n = X.rows(), p = X.cols();
  RidgeModel m;
  m.feature_names = std::move(feature_names);
  m.lambda = lambda;
  m.mean = X.colwise().mean().transpose();
  m.sd.resize(p);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (X.col(j).array() - m.mean(j)).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    // Columns constant up to rounding are treated as constant.
    m.sd(j) = sd > 1e-12 * std::max(1.0, std::abs(m.mean(j))) ? sd : 0.0;
    if (m.sd(j) > 0.0) cols.push_back(j);
  }

  Eigen::MatrixXd Z(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Eigen::Index j = cols[k];
    Z.col(static_cast<Eigen::Index>(k)) = (X.col(j).array() - m.mean(j)) / m.sd(j);
  }
  m.intercept = y.mean();
  const Eigen::VectorXd t = y.array() - m.intercept;
  const Eigen::VectorXd w = solve_normal(Z, t, lambda);

  m.weights = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < cols.size(); ++k) m.weights(cols[k]) = w(static_cast<Eigen::Index>(k));
  return m;
}

double predict_unclipped(const RidgeModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != m.n_features())
    fail(Errc::kDimensionMismatch,
         "expected " + std::to_string(m.n_features()) + " features, got " + std::to_string(x.size()));
  if (x.hasNaN()) fail(Errc::kMissingFeature, "feature vector has missing cells");
  double out = m.intercept;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (m.active(j)) out += m.weights(j) * (x(j) - m.mean(j)) / m.sd(j);
  return out;
}

double predict(const RidgeModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::clamp(predict_unclipped(m, x), kRatingMin, kRatingMax);
}

Metrics metrics(const Eigen::Ref<const Eigen::VectorXd>& actual, const Eigen::Ref<const Eigen::VectorXd>& predicted) {
  if (actual.size() != predicted.size()) fail(Errc::kDimensionMismatch, "actual and predicted lengths differ");
  if (actual.size() == 0) fail(Errc::kInvalidArgument, "metrics of empty vectors");
  const double n = static_cast<double>(actual.size());
  Metrics r;
  const Eigen::ArrayXd diff = actual.array() - predicted.array();
  r.mae = diff.abs().sum() / n;
  r.mse = diff.square().sum() / n;
  const Eigen::ArrayXd a = actual.array() - actual.mean();
  const Eigen::ArrayXd p = predicted.array() - predicted.mean();
  const double saa = a.square().sum(), spp = p.square().sum();
  if (actual.minCoeff() == actual.maxCoeff() || predicted.minCoeff() == predicted.maxCoeff() || saa <= 0.0 ||
      spp <= 0.0) {
    r.pcc = 0.0;
    r.pcc_defined = false;
  } else {
    r.pcc = std::clamp((a * p).sum() / std::sqrt(saa * spp), -1.0, 1.0);
  }
  return r;
}

}  // namespace nap
