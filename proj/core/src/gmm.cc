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

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "binary_io.h"
#include "nap/error.h"
#include "nap/parallel.h"

namespace nap {
namespace {

constexpr Eigen::Index kChunkRows = 512;
constexpr double kMinWeight = 1e-8;

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// library implementations, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct SuffStats {
  Eigen::VectorXd occupancy;  // sum of responsibilities per component
  Eigen::MatrixXd sum_x;
  Eigen::MatrixXd sum_xx;
  double log_likelihood = 0.0;

  SuffStats(int k, int d)
      : occupancy(Eigen::VectorXd::Zero(k)),
        sum_x(Eigen::MatrixXd::Zero(k, d)),
        sum_xx(Eigen::MatrixXd::Zero(k, d)) {}

  void merge(const SuffStats& o) {
    occupancy += o.occupancy;
    sum_x += o.sum_x;
    sum_xx += o.sum_xx;
    log_likelihood += o.log_likelihood;
  }
};

// Chunked E-step. Chunks have a fixed size and are combined with a pairwise
// tree in index order, so the result is identical for any thread count.
SuffStats expectation(const GmmModel& m, const Eigen::Ref<const Eigen::MatrixXd>& X, int n_threads) {
  const int k = m.n_components(), d = m.dim();
  const Eigen::Index n = X.rows();
  const auto n_chunks = static_cast<std::size_t>((n + kChunkRows - 1) / kChunkRows);
  std::vector<SuffStats> parts(n_chunks, SuffStats(k, d));

  const Eigen::MatrixXd inv_var = m.variances().cwiseInverse();
  Eigen::VectorXd log_norm(k);
  for (int c = 0; c < k; ++c)
    log_norm(c) = std::log(m.weights()(c)) -
                  0.5 * (d * std::log(2.0 * std::numbers::pi) + m.variances().row(c).array().log().sum());

  parallel_for(n_chunks, n_threads, [&](std::size_t chunk) {
    SuffStats& s = parts[chunk];
    const Eigen::Index begin = static_cast<Eigen::Index>(chunk) * kChunkRows;
    const Eigen::Index end = std::min(n, begin + kChunkRows);
    Eigen::VectorXd lc(k);
    for (Eigen::Index i = begin; i < end; ++i) {
      const auto x = X.row(i);
      for (int c = 0; c < k; ++c)
        lc(c) = log_norm(c) -
                0.5 * ((x - m.means().row(c)).array().square() * inv_var.row(c).array()).sum();
      const double mx = lc.maxCoeff();
      const double lse = mx + std::log((lc.array() - mx).exp().sum());
      s.log_likelihood += lse;
      const Eigen::VectorXd gamma = (lc.array() - lse).exp();
      s.occupancy += gamma;
      const Eigen::RowVectorXd x2 = x.array().square();
      for (int c = 0; c < k; ++c) {
        s.sum_x.row(c) += gamma(c) * x;
        s.sum_xx.row(c) += gamma(c) * x2;
      }
    }
  });

  for (std::size_t width = 1; width < parts.size(); width *= 2)
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) parts[i].merge(parts[i + width]);
  return std::move(parts.front());
}

GmmModel kmeanspp_init(const Eigen::Ref<const Eigen::MatrixXd>& X, const TrainConfig& cfg) {
  const Eigen::Index n = X.rows(), d = X.cols();
  const int k = cfg.n_components;
  std::mt19937_64 rng(cfg.seed);

  std::vector<Eigen::Index> centers;
  centers.push_back(static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n)));
  Eigen::VectorXd dist2 = (X.rowwise() - X.row(centers[0])).rowwise().squaredNorm();
  while (static_cast<int>(centers.size()) < k) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
    }
    centers.push_back(pick);
    dist2 = dist2.cwiseMin((X.rowwise() - X.row(pick)).rowwise().squaredNorm());
  }

  // Hard assignment to the nearest center gives the starting moments.
  Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, d), sum2 = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double dd = (X.row(i) - X.row(centers[static_cast<std::size_t>(c)])).squaredNorm();
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
    count(best) += 1.0;
    sum.row(best) += X.row(i);
    sum2.row(best) += X.row(i).array().square().matrix();
  }
  const Eigen::RowVectorXd global_mean = X.colwise().mean();
  const Eigen::RowVectorXd global_var =
      ((X.rowwise() - global_mean).array().square().colwise().sum() / static_cast<double>(n))
          .max(cfg.variance_floor);

  Eigen::VectorXd weights(k);
  Eigen::MatrixXd means(k, d), vars(k, d);
  for (int c = 0; c < k; ++c) {
    if (count(c) >= 2.0) {
      means.row(c) = sum.row(c) / count(c);
      vars.row(c) = (sum2.row(c) / count(c) - means.row(c).array().square().matrix())
                        .array()
                        .max(cfg.variance_floor)
                        .matrix();
    } else {
      means.row(c) = X.row(centers[static_cast<std::size_t>(c)]);
      vars.row(c) = global_var;
    }
    weights(c) = std::max(count(c), 1.0);
  }
  weights /= weights.sum();
  return GmmModel(weights, means, vars);
}

// Re-seeds components whose weight collapsed by splitting the component with
// the largest total variance. Returns true if anything changed.
bool reseed_degenerate(Eigen::VectorXd& w, Eigen::MatrixXd& mu, Eigen::MatrixXd& var, int iteration) {
  bool changed = false;
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    if (w(c) >= kMinWeight) continue;
    Eigen::Index donor = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (w(j) < kMinWeight) continue;
      const double tv = var.row(j).sum();
      if (tv > best) {
        best = tv;
        donor = j;
      }
    }
    Eigen::Index axis = 0;
    var.row(donor).maxCoeff(&axis);
    const double offset = 0.5 * std::sqrt(var(donor, axis));
    mu.row(c) = mu.row(donor);
    var.row(c) = var.row(donor);
    mu(c, axis) += offset;
    mu(donor, axis) -= offset;
    w(c) = w(donor) / 2.0;
    w(donor) /= 2.0;
    spdlog::warn("gmm: component {} degenerate at iteration {}; re-seeded from component {}", c,
                 iteration, donor);
    changed = true;
  }
  return changed;
}

}  // namespace

GmmModel::GmmModel(Eigen::VectorXd weights, Eigen::MatrixXd means, Eigen::MatrixXd variances)
    : weights_(std::move(weights)), means_(std::move(means)), variances_(std::move(variances)) {
  const Eigen::Index k = weights_.size();
  if (k == 0 || means_.rows() != k || variances_.rows() != k || means_.cols() != variances_.cols() ||
      means_.cols() == 0)
    fail(Errc::kInvalidArgument, "inconsistent GMM parameter shapes");
  if ((weights_.array() < 0.0).any() || std::abs(weights_.sum() - 1.0) > 1e-9)
    fail(Errc::kInvalidArgument, "GMM weights are not a probability simplex");
  if (!variances_.allFinite() || (variances_.array() <= 0.0).any() || !means_.allFinite())
    fail(Errc::kInvalidArgument, "GMM variances must be positive and finite");
  inv_variances_ = variances_.cwiseInverse();
  log_norm_.resize(k);
  const double d = static_cast<double>(means_.cols());
  for (Eigen::Index c = 0; c < k; ++c)
    log_norm_(c) = std::log(weights_(c)) -
                   0.5 * (d * std::log(2.0 * std::numbers::pi) + variances_.row(c).array().log().sum());
}

double GmmModel::component_log_density(int k, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return log_norm_(k) -
         0.5 * ((x.transpose() - means_.row(k)).array().square() * inv_variances_.row(k).array()).sum();
}

double GmmModel::log_density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim())
    fail(Errc::kDimensionMismatch,
         "vector of dim " + std::to_string(x.size()) + " vs model dim " + std::to_string(dim()));
  const int k = n_components();
  double mx = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd lc(k);
  for (int c = 0; c < k; ++c) {
    lc(c) = component_log_density(c, x);
    mx = std::max(mx, lc(c));
  }
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((lc.array() - mx).exp().sum());
}

Eigen::VectorXd GmmModel::log_likelihood_matrix(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (X.cols() != dim())
    fail(Errc::kDimensionMismatch,
         "matrix with " + std::to_string(X.cols()) + " columns vs model dim " + std::to_string(dim()));
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = log_density(X.row(i).transpose());
  return out;
}

GmmModel train_em(const Eigen::Ref<const Eigen::MatrixXd>& data, const TrainConfig& cfg,
                  TrainTrace* trace) {
  if (cfg.covariance == CovarianceType::kFull)
    fail(Errc::kInvalidArgument, "full-covariance training is not supported");
  if (cfg.n_components < 1 || !(cfg.tol > 0.0) || !(cfg.variance_floor > 0.0) || cfg.max_iters < 0)
    fail(Errc::kInvalidArgument, "invalid TrainConfig");
  if (data.cols() < 1) fail(Errc::kInvalidArgument, "zero-dimensional data");
  if (data.rows() < 10 * static_cast<Eigen::Index>(cfg.n_components))
    fail(Errc::kInsufficientData, std::to_string(data.rows()) + " frames for " +
                                      std::to_string(cfg.n_components) + " components (need 10x)");
  if (!data.allFinite()) fail(Errc::kInvalidArgument, "training data contains NaN or Inf");

  TrainTrace local;
  TrainTrace& tr = trace ? *trace : local;
  tr = TrainTrace{};

  const double n = static_cast<double>(data.rows());
  GmmModel model = kmeanspp_init(data, cfg);
  SuffStats stats = expectation(model, data, cfg.n_threads);
  double prev = stats.log_likelihood / n;
  tr.mean_log_likelihood.push_back(prev);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    Eigen::VectorXd w = stats.occupancy / n;
    Eigen::MatrixXd mu(model.n_components(), model.dim());
    Eigen::MatrixXd var(model.n_components(), model.dim());
    for (int c = 0; c < model.n_components(); ++c) {
      const double occ = std::max(stats.occupancy(c), std::numeric_limits<double>::min());
      mu.row(c) = stats.sum_x.row(c) / occ;
      var.row(c) = (stats.sum_xx.row(c) / occ - mu.row(c).array().square().matrix())
                       .array()
                       .max(cfg.variance_floor)
                       .matrix();
    }
    const bool reseeded = reseed_degenerate(w, mu, var, it);
    w /= w.sum();
    model = GmmModel(w, mu, var);
    stats = expectation(model, data, cfg.n_threads);
    const double cur = stats.log_likelihood / n;
    tr.mean_log_likelihood.push_back(cur);
    tr.iterations = it;
    if (reseeded) {
      tr.reseed_iterations.push_back(it);
    } else {
      if (cur < prev - 1e-10)
        spdlog::warn("gmm: log-likelihood decreased at iteration {} ({} -> {})", it, prev, cur);
      if (cur - prev < cfg.tol * std::abs(prev)) {
        tr.converged = true;
        break;
      }
    }
    prev = cur;
  }
  return model;
}

void write_model(const GmmModel& m, std::ostream& out) {
  out.write("NAPG", 4);
  detail::put_u32(out, kModelFormatVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(m.n_components()));
  detail::put_u32(out, static_cast<std::uint32_t>(m.dim()));
  for (int c = 0; c < m.n_components(); ++c) detail::put_f64(out, m.weights()(c));
  for (int c = 0; c < m.n_components(); ++c)
    for (int j = 0; j < m.dim(); ++j) detail::put_f64(out, m.means()(c, j));
  for (int c = 0; c < m.n_components(); ++c)
    for (int j = 0; j < m.dim(); ++j) detail::put_f64(out, m.variances()(c, j));
}

GmmModel read_model(std::istream& in) {
  if (!detail::get_magic(in, "NAPG")) fail(Errc::kCorruptFile, "bad magic");
  std::uint32_t version = 0, k = 0, d = 0;
  if (!detail::get_u32(in, version)) fail(Errc::kCorruptFile, "truncated header");
  if (version != kModelFormatVersion)
    fail(Errc::kVersionMismatch, "model version " + std::to_string(version) + ", expected " +
                                     std::to_string(kModelFormatVersion));
  if (!detail::get_u32(in, k) || !detail::get_u32(in, d)) fail(Errc::kCorruptFile, "truncated header");
  if (k == 0 || d == 0 || k > 1u << 16 || d > 1u << 16) fail(Errc::kCorruptFile, "implausible shape");
  Eigen::VectorXd w(k);
  Eigen::MatrixXd mu(k, d), var(k, d);
  auto get = [&](double& v) {
    if (!detail::get_f64(in, v)) fail(Errc::kCorruptFile, "truncated parameters");
  };
  for (std::uint32_t c = 0; c < k; ++c) get(w(c));
  for (std::uint32_t c = 0; c < k; ++c)
    for (std::uint32_t j = 0; j < d; ++j) get(mu(c, j));
  for (std::uint32_t c = 0; c < k; ++c)
    for (std::uint32_t j = 0; j < d; ++j) get(var(c, j));
  if (in.peek() != std::char_traits<char>::eof()) fail(Errc::kCorruptFile, "trailing bytes");
  try {
    return GmmModel(std::move(w), std::move(mu), std::move(var));
  } catch (const Error& e) {
    fail(Errc::kCorruptFile, e.what());
  }
}

void save_model(const GmmModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  write_model(m, out);
  if (!out) fail(Errc::kIo, "write failed: " + path.string());
}

GmmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kPathNotFound, path.string());
  try {
    return read_model(in);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace nap
