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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nap/frontend.h"

namespace nap {

// Diagonal-covariance Gaussian mixture. Immutable once constructed.
class GmmModel {
 public:
  GmmModel() = default;
  // Throws InvalidArgument unless weights form a simplex (to 1e-9), shapes
  // agree and every variance is positive and finite.
  GmmModel(Eigen::VectorXd weights, Eigen::MatrixXd means, Eigen::MatrixXd variances);

  int n_components() const { return static_cast<int>(weights_.size()); }
  int dim() const { return static_cast<int>(means_.cols()); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& means() const { return means_; }
  const Eigen::MatrixXd& variances() const { return variances_; }

  // log sum_k w_k N(x; mu_k, diag var_k), evaluated with log-sum-exp.
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Element i is log_density(row i).
  Eigen::VectorXd log_likelihood_matrix(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
  Eigen::VectorXd log_likelihood_matrix(const FrameMatrix& fm) const {
    return log_likelihood_matrix(fm.data);
  }

  bool operator==(const GmmModel& o) const {
    return weights_ == o.weights_ && means_ == o.means_ && variances_ == o.variances_;
  }

 private:
  double component_log_density(int k, const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Eigen::VectorXd weights_;
  Eigen::MatrixXd means_;
  Eigen::MatrixXd variances_;
  Eigen::MatrixXd inv_variances_;
  Eigen::VectorXd log_norm_;  // log w_k - 0.5 * sum_d log(2 pi var_kd)
};

enum class CovarianceType { kDiagonal, kFull };

struct TrainConfig {
  int n_components = 16;
  int max_iters = 100;
  double tol = 1e-6;  // relative improvement of the mean log-likelihood
  std::uint64_t seed = 0;
  double variance_floor = 1e-6;
  CovarianceType covariance = CovarianceType::kDiagonal;
  int n_threads = 1;
};

struct TrainTrace {
  // Mean per-frame log-likelihood of the model after initialization (entry 0)
  // and after each EM iteration.
  std::vector<double> mean_log_likelihood;
  // Iterations at which an empty component was re-seeded. The likelihood may
  // drop across these steps and only across these steps.
  std::vector<int> reseed_iterations;
  int iterations = 0;
  bool converged = false;
};

// k-means++ seeding from cfg.seed, then EM until the relative improvement is
// below cfg.tol or cfg.max_iters. Results do not depend on cfg.n_threads.
// Throws InsufficientData when rows < 10 * n_components.
GmmModel train_em(const Eigen::Ref<const Eigen::MatrixXd>& data, const TrainConfig& cfg,
                  TrainTrace* trace = nullptr);

// "NAPG" | u32 version | u32 n_components | u32 dim | weights | means |
// variances, little-endian f64, row-major.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const GmmModel& m, const std::filesystem::path& path);
GmmModel load_model(const std::filesystem::path& path);
void write_model(const GmmModel& m, std::ostream& out);
GmmModel read_model(std::istream& in);

}  // namespace nap
