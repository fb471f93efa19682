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

// Naive reference implementations used as test oracles. None of these share
// code with the library under test.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nap/gmm.h"

namespace nap::oracle {

// Amplitude of the sinusoid at freq_hz by direct DFT correlation.
double dft_amplitude(std::span<const double> x, double freq_hz, int rate);
// Frequency (Hz) of the largest |X[k]|, k in [1, N/2), by O(N^2) DFT.
double dft_peak_hz(std::span<const double> x, int rate);

// Local maxima (radians in (0, pi)) of the all-pole envelope 1/|A(e^jw)|^2,
// located as sign changes of d|A|^2/dw on a grid and refined by bisection on
// the analytic derivative. Sorted by decreasing envelope height.
std::vector<double> ar_envelope_peaks(std::span<const double> lpc);

// log of sum_k w_k prod_d N(x_d; mu_kd, var_kd), summed directly.
double gmm_log_density(const GmmModel& m, const Eigen::VectorXd& x);

GmmModel random_gmm(int n_components, int dim, std::mt19937_64& rng, double spread = 3.0);
Eigen::MatrixXd sample_gmm(const GmmModel& m, int n, std::mt19937_64& rng);

// Ridge with per-column population standardization and unpenalized
// intercept, solved by Gauss-Jordan elimination. Constant columns get 0.
struct NaiveRidge {
  std::vector<double> mean, sd, w;
  double intercept = 0.0;
  double predict(const std::vector<double>& x) const;  // unclipped
};
NaiveRidge naive_ridge(const std::vector<std::vector<double>>& X, const std::vector<double>& y, double lambda);

struct NaiveFold {
  std::string held_out;
  std::vector<std::string> train_ids;
  std::vector<double> impute_means;
  double prediction = 0.0;  // clipped to [1, 7]
};
// Double-loop LOSO: sorted speakers, per-fold mean imputation of NaN cells.
std::vector<NaiveFold> naive_loso(const std::vector<std::string>& ids, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y, double lambda);
double naive_loso_mse(const std::vector<std::string>& ids, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      double lambda, const std::vector<int>& cols);

struct SubsetResult {
  std::vector<int> cols;
  double mse = 0.0;
};
// Every subset including the empty one; returns the minimum-MSE subset
// (smallest size, then lexicographic order on ties) and the best singleton.
struct ExhaustiveResult {
  SubsetResult best;
  SubsetResult best_single;
};
ExhaustiveResult exhaustive_subsets(const std::vector<std::string>& ids, const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, double lambda);

}  // namespace nap::oracle
