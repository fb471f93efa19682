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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "nap/csv.h"
#include "nap/error.h"
#include "nap/parallel.h"

namespace nap {
namespace {

using Rows = std::vector<Eigen::Index>;

Eigen::MatrixXd take(const Eigen::MatrixXd& X, const Rows& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& y, const Rows& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(rows[i]);
  return out;
}

Rows sorted_rows(const Dataset& d) {
  Rows rows(static_cast<std::size_t>(d.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  std::sort(rows.begin(), rows.end(), [&](Eigen::Index a, Eigen::Index b) {
    return d.speaker_ids[static_cast<std::size_t>(a)] < d.speaker_ids[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (d.speaker_ids[static_cast<std::size_t>(rows[i])] == d.speaker_ids[static_cast<std::size_t>(rows[i - 1])])
      fail(Errc::kDuplicateSpeaker, d.speaker_ids[static_cast<std::size_t>(rows[i])]);
  return rows;
}

void check_shape(const Dataset& d) {
  if (d.y.size() != d.X.rows() || static_cast<Eigen::Index>(d.speaker_ids.size()) != d.X.rows())
    fail(Errc::kDimensionMismatch, "dataset rows disagree");
  if (static_cast<Eigen::Index>(d.feature_names.size()) != d.X.cols())
    fail(Errc::kDimensionMismatch, "dataset feature names disagree with columns");
  if (!d.diseases.empty() && static_cast<Eigen::Index>(d.diseases.size()) != d.X.rows())
    fail(Errc::kDimensionMismatch, "dataset diseases disagree with rows");
}

// Training and test matrices with fold-internal imputation.
struct FoldData {
  Eigen::MatrixXd Xtr, Xte;
  Eigen::VectorXd ytr, yte;
  Eigen::RowVectorXd means;
};

FoldData prepare(const Dataset& d, const Rows& train, const Rows& test, bool impute) {
  FoldData f{take(d.X, train), take(d.X, test), take(d.y, train), take(d.y, test), {}};
  if ((f.Xtr.hasNaN() || f.Xte.hasNaN()) && !impute)
    fail(Errc::kMissingFeature, "missing cells with imputation disabled");
  // Means of the observed training cells. A column never observed in the
  // training fold gets 0, which makes it constant and inactive in the fold.
  f.means.setZero(f.Xtr.cols());
  for (Eigen::Index j = 0; j < f.Xtr.cols(); ++j) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index i = 0; i < f.Xtr.rows(); ++i)
      if (!std::isnan(f.Xtr(i, j))) sum += f.Xtr(i, j), ++n;
    if (n > 0) f.means(j) = sum / n;
  }
  fill_missing(f.Xtr, f.means);
  fill_missing(f.Xte, f.means);
  return f;
}

// LOSO MSE over the given rows; used for λ sweeps and feature selection.
double inner_loso_mse(const Dataset& d, const Rows& rows, double lambda, bool impute) {
  double sse = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Rows train;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != k) train.push_back(rows[i]);
    FoldData f = prepare(d, train, {rows[k]}, impute);
    const RidgeModel m = fit_ridge(f.Xtr, f.ytr, lambda, d.feature_names);
    const double e = predict(m, f.Xte.row(0).transpose()) - f.yte(0);
    sse += e * e;
  }
  return sse / static_cast<double>(rows.size());
}

double choose_lambda(const Dataset& d, const Rows& train, const EvalOptions& opts) {
  if (opts.lambda_grid.empty()) return opts.lambda;
  double best = opts.lambda_grid.front(), best_mse = std::numeric_limits<double>::infinity();
  for (double lambda : opts.lambda_grid) {
    const double mse = inner_loso_mse(d, train, lambda, opts.impute);
    if (mse < best_mse) {
      best_mse = mse;
      best = lambda;
    }
  }
  return best;
}

FoldResult run_fold(const Dataset& d, const Rows& train, const Rows& test, const EvalOptions& opts,
                    std::string held_out, std::vector<double>& predicted) {
  FoldResult r;
  r.held_out = std::move(held_out);
  for (auto i : train) r.train_ids.push_back(d.speaker_ids[static_cast<std::size_t>(i)]);
  for (auto i : test) r.test_ids.push_back(d.speaker_ids[static_cast<std::size_t>(i)]);
  const double lambda = choose_lambda(d, train, opts);
  FoldData f = prepare(d, train, test, opts.impute);
  r.impute_means = f.means;
  r.model = fit_ridge(f.Xtr, f.ytr, lambda, d.feature_names);
  predicted.resize(test.size());
  for (std::size_t i = 0; i < test.size(); ++i)
    predicted[i] = predict(r.model, f.Xte.row(static_cast<Eigen::Index>(i)).transpose());
  return r;
}

[[noreturn]] void rethrow_in_fold(std::size_t fold, const std::string& held_out, const Error& e) {
  fail(e.code(), "fold " + std::to_string(fold) + " (" + held_out + "): " + e.detail());
}

void finish(EvalReport& rep) {
  Eigen::VectorXd a(static_cast<Eigen::Index>(rep.predictions.size()));
  Eigen::VectorXd p(a.size());
  for (std::size_t i = 0; i < rep.predictions.size(); ++i) {
    a(static_cast<Eigen::Index>(i)) = rep.predictions[i].actual;
    p(static_cast<Eigen::Index>(i)) = rep.predictions[i].predicted;
  }
  rep.metrics = metrics(a, p);
}

}  // namespace

JoinResult join_ratings(const DesignMatrix& features, const RatingsTable& ratings, const CorpusManifest* manifest) {
  JoinResult out;
  Dataset& d = out.data;
  d.feature_names = features.feature_names;
  std::vector<Eigen::Index> keep;
  std::vector<double> y;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < features.row_ids.size(); ++i) {
    const std::string& id = features.row_ids[i];
    if (!seen.insert(id).second) fail(Errc::kDuplicateSpeaker, id);
    const Rating* r = ratings.find(id);
    if (!r) {
      out.unrated.push_back(id);
      continue;
    }
    if (manifest) {
      const auto dis = manifest->disease_of(id);
      if (!dis) fail(Errc::kUnknownDisease, "speaker " + id + " is not in the manifest");
      d.diseases.push_back(*dis);
    }
    keep.push_back(static_cast<Eigen::Index>(i));
    d.speaker_ids.push_back(id);
    y.push_back(r->hypernasality);
  }
  for (const auto& r : ratings.rows())
    if (!seen.contains(r.speaker_id)) out.unfeatured.push_back(r.speaker_id);
  d.X = take(features.X, keep);
  d.y = Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  return out;
}

Dataset select_columns(const Dataset& d, const std::vector<std::string>& names) {
  Dataset out = d;
  out.feature_names = names;
  out.X.resize(d.X.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    auto it = std::find(d.feature_names.begin(), d.feature_names.end(), names[j]);
    if (it == d.feature_names.end()) fail(Errc::kMissingFeature, "no column " + names[j]);
    out.X.col(static_cast<Eigen::Index>(j)) = d.X.col(it - d.feature_names.begin());
  }
  return out;
}

std::vector<double> default_lambda_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2}; }

EvalReport loso_evaluate(const Dataset& data, const EvalOptions& opts) {
  check_shape(data);
  if (data.rows() < 3) fail(Errc::kInsufficientData, "LOSO needs at least 3 speakers");
  const Rows order = sorted_rows(data);
  const std::size_t n = order.size();

  std::vector<FoldResult> folds(n);
  std::vector<std::vector<double>> preds(n);
  parallel_for(n, opts.n_threads, [&](std::size_t k) {
    Rows train;
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) train.push_back(order[i]);
    const std::string& id = data.speaker_ids[static_cast<std::size_t>(order[k])];
    try {
      folds[k] = run_fold(data, train, {order[k]}, opts, id, preds[k]);
    } catch (const Error& e) {
      rethrow_in_fold(k, id, e);
    }
  });

  EvalReport rep;
  rep.scheme = Scheme::kLoso;
  rep.lambda = opts.lambda;
  rep.lambda_swept = !opts.lambda_grid.empty();
  rep.feature_names = data.feature_names;
  for (std::size_t k = 0; k < n; ++k)
    rep.predictions.push_back({data.speaker_ids[static_cast<std::size_t>(order[k])],
                               data.y(order[k]), preds[k][0]});
  rep.folds = std::move(folds);
  finish(rep);
  return rep;
}

EvalReport lodo_evaluate(const Dataset& data, Disease held_out, const EvalOptions& opts) {
  check_shape(data);
  if (data.diseases.empty()) fail(Errc::kInvalidArgument, "LODO needs disease labels");
  const Rows order = sorted_rows(data);
  Rows train, test;
  for (auto i : order) (data.diseases[static_cast<std::size_t>(i)] == held_out ? test : train).push_back(i);
  const std::string label(disease_label(held_out));
  if (test.empty()) fail(Errc::kEmptyDiseaseGroup, "no speakers with disease " + label);
  if (train.size() < 3) fail(Errc::kInsufficientData, "LODO needs at least 3 training speakers");

  EvalReport rep;
  rep.scheme = Scheme::kLodo;
  rep.held_out_disease = held_out;
  rep.lambda = opts.lambda;
  rep.lambda_swept = !opts.lambda_grid.empty();
  rep.feature_names = data.feature_names;
  std::vector<double> preds;
  try {
    rep.folds.push_back(run_fold(data, train, test, opts, label, preds));
  } catch (const Error& e) {
    rethrow_in_fold(0, label, e);
  }
  for (std::size_t i = 0; i < test.size(); ++i)
    rep.predictions.push_back({data.speaker_ids[static_cast<std::size_t>(test[i])], data.y(test[i]), preds[i]});
  finish(rep);
  return rep;
}

namespace {

bool same_column(const Eigen::MatrixXd& X, std::size_t a, std::size_t b) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double u = X(i, static_cast<Eigen::Index>(a)), v = X(i, static_cast<Eigen::Index>(b));
    if (!(u == v || (std::isnan(u) && std::isnan(v)))) return false;
  }
  return true;
}

}  // namespace

SelectionResult forward_select(const Dataset& data, const EvalOptions& opts, int max_features) {
  check_shape(data);
  if (data.X.cols() < 2) fail(Errc::kInvalidArgument, "forward selection needs at least 2 candidate features");
  if (data.rows() < 3) fail(Errc::kInsufficientData, "LOSO needs at least 3 speakers");
  const Rows order = sorted_rows(data);
  const auto p = static_cast<std::size_t>(data.X.cols());
  const std::size_t limit = max_features <= 0 ? p : std::min(p, static_cast<std::size_t>(max_features));

  auto subset = [&](const std::vector<std::size_t>& cols) {
    std::vector<std::string> names;
    for (auto c : cols) names.push_back(data.feature_names[c]);
    return select_columns(data, names);
  };

  SelectionResult res;
  res.baseline_mse = inner_loso_mse(subset({}), order, opts.lambda, opts.impute);
  double current = res.baseline_mse;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(p, false);

  while (chosen.size() < limit) {
    std::vector<double> mse(p, std::numeric_limits<double>::infinity());
    parallel_for(p, opts.n_threads, [&](std::size_t j) {
      if (used[j]) return;
      // An exact copy of a chosen column only rescales that column's penalty.
      for (auto c : chosen)
        if (same_column(data.X, c, j)) return;
      auto cols = chosen;
      cols.push_back(j);
      mse[j] = inner_loso_mse(subset(cols), order, opts.lambda, opts.impute);
    });
    std::size_t best = p;
    for (std::size_t j = 0; j < p; ++j)
      if (!used[j] && (best == p || mse[j] < mse[best])) best = j;
    if (best == p || !(mse[best] < current)) break;

    chosen.push_back(best);
    used[best] = true;
    current = mse[best];
    EvalOptions fixed = opts;
    fixed.lambda_grid.clear();
    fixed.n_threads = 1;
    const EvalReport rep = loso_evaluate(subset(chosen), fixed);
    res.selected.push_back(data.feature_names[best]);
    res.trace.push_back({static_cast<int>(chosen.size()), data.feature_names[best], rep.metrics.pcc, current});
  }
  return res;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["scheme"] = report.scheme == Scheme::kLoso ? "loso" : "lodo";
  if (report.held_out_disease) j["held_out_disease"] = std::string(disease_label(*report.held_out_disease));
  j["lambda"] = report.lambda;
  j["lambda_swept"] = report.lambda_swept;
  j["features"] = report.feature_names;
  j["n_speakers"] = report.predictions.size();
  j["mae"] = report.metrics.mae;
  j["mse"] = report.metrics.mse;
  j["pcc"] = report.metrics.pcc;
  j["pcc_defined"] = report.metrics.pcc_defined;
  auto& preds = j["predictions"] = nlohmann::ordered_json::array();
  for (const auto& p : report.predictions)
    preds.push_back({{"speaker_id", p.speaker_id}, {"actual", p.actual}, {"predicted", p.predicted}});
  auto& folds = j["folds"] = nlohmann::ordered_json::array();
  for (const auto& f : report.folds) {
    nlohmann::ordered_json fj;
    fj["held_out"] = f.held_out;
    fj["lambda"] = f.model.lambda;
    fj["intercept"] = f.model.intercept;
    fj["weights"] = std::vector<double>(f.model.weights.data(), f.model.weights.data() + f.model.weights.size());
    folds.push_back(std::move(fj));
  }
  return j.dump(2) + "\n";
}

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << report_to_json(report);
}

void write_predictions_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << "speaker_id,actual,predicted\n";
  for (const auto& p : report.predictions)
    out << csv::quote_if_needed(p.speaker_id) << ',' << csv::format_double(p.actual) << ','
        << csv::format_double(p.predicted) << '\n';
}

void write_selection_csv(const SelectionResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << "step,feature,pcc,mse\n";
  out << "0,(intercept)," << csv::format_double(std::numeric_limits<double>::quiet_NaN()) << ',' << csv::format_double(result.baseline_mse) << '\n';
  for (const auto& s : result.trace)
    out << s.step << ',' << csv::quote_if_needed(s.feature) << ',' << csv::format_double(s.pcc) << ','
        << csv::format_double(s.mse) << '\n';
}

}  // namespace nap
