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
#include <string>
#include <vector>

#include "nap/corpus.h"

namespace nap {

// Linear model on standardized features with an unpenalized intercept.
// Features whose training sd is zero are inactive and carry weight 0.
struct RidgeModel {
  std::vector<std::string> feature_names;
  Eigen::VectorXd weights;  // standardized scale
  double intercept = 0.0;
  double lambda = 0.0;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;  // population sd; 0 marks an inactive feature

  Eigen::Index n_features() const { return weights.size(); }
  bool active(Eigen::Index j) const { return sd(j) > 0.0; }
  // Equivalent coefficients on the raw feature scale.
  Eigen::VectorXd raw_weights() const;
  double raw_intercept() const;
};

// Plain (XᵀX + λI)⁻¹Xᵀy without intercept or standardization. λ = 0 uses a
// rank-revealing QR and throws SingularSystem on rank deficiency.
Eigen::VectorXd ridge_solve(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y, double lambda);

// Throws InsufficientData (< 2 rows), InvalidArgument (bad λ),
// DimensionMismatch, MissingFeature (NaN cell), SingularSystem.
RidgeModel fit_ridge(const Eigen::Ref<const Eigen::MatrixXd>& X, const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lambda, std::vector<std::string> feature_names = {});

double predict_unclipped(const RidgeModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);
// Clipped to [1, 7].
double predict(const RidgeModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

struct Metrics {
  double mae = 0.0;
  double mse = 0.0;
  double pcc = 0.0;
  bool pcc_defined = true;  // false when either side has zero variance; pcc is then 0
};

Metrics metrics(const Eigen::Ref<const Eigen::VectorXd>& actual, const Eigen::Ref<const Eigen::VectorXd>& predicted);

}  // namespace nap
