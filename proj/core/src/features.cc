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
#include "nap/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "nap/csv.h"
#include "nap/error.h"
#include "nap/textgrid.h"

namespace nap {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const FeatureStat* lookup(const SpeakerFeatureVector& v, std::string_view feature) {
  ScoreKind kind;
  std::string phone;
  if (!parse_feature_name(feature, kind, phone)) return nullptr;
  const auto& map = kind == ScoreKind::kNasalization ? v.nasalization : v.articulation;
  auto it = map.find(phone);
  return it == map.end() ? nullptr : &it->second;
}

}  // namespace

double FeatureStat::mean() const { return count > 0 ? sum / count : kNaN; }

std::optional<double> SpeakerFeatureVector::value(std::string_view feature) const {
  const FeatureStat* s = lookup(*this, feature);
  if (!s || s->missing()) return std::nullopt;
  return s->mean();
}

int SpeakerFeatureVector::coverage(std::string_view feature) const {
  const FeatureStat* s = lookup(*this, feature);
  return s ? s->count : 0;
}

std::string feature_name(ScoreKind kind, std::string_view phone) {
  return std::string(kind == ScoreKind::kNasalization ? "N(" : "AP(") + std::string(phone) + ")";
}

bool parse_feature_name(std::string_view name, ScoreKind& kind, std::string& phone) {
  if (name.size() < 4 || name.back() != ')') return false;
  if (name.starts_with("N(")) {
    kind = ScoreKind::kNasalization;
    phone = name.substr(2, name.size() - 3);
  } else if (name.starts_with("AP(")) {
    kind = ScoreKind::kArticulation;
    phone = name.substr(3, name.size() - 4);
  } else {
    return false;
  }
  return !phone.empty();
}

SpeakerFeatureVector aggregate(std::span<const PhoneScore> scores, const std::string& speaker_id) {
  std::map<std::string, std::vector<double>> nas, ap;
  for (const auto& s : scores)
    (s.kind == ScoreKind::kNasalization ? nas : ap)[s.phone].push_back(s.score);

  SpeakerFeatureVector v;
  v.speaker_id = speaker_id;
  for (auto p : nasalization_phones()) v.nasalization[std::string(p)] = {};
  for (auto p : articulation_phones()) v.articulation[std::string(p)] = {};
  auto fill = [](std::map<std::string, std::vector<double>>& src, std::map<std::string, FeatureStat>& dst) {
    for (auto& [phone, values] : src) {
      std::sort(values.begin(), values.end());
      FeatureStat st;
      for (double x : values) st.sum += x;
      st.count = static_cast<int>(values.size());
      dst[phone] = st;
    }
  };
  fill(nas, v.nasalization);
  fill(ap, v.articulation);
  return v;
}

std::vector<std::string> feature_preset(std::string_view name) {
  if (name == "paper-top6") return {"N(AA)", "N(IY)", "N(B)", "N(D)", "AP(T)", "AP(F)"};
  if (name == "all") {
    std::vector<std::string> out;
    for (auto p : nasalization_phones()) out.push_back(feature_name(ScoreKind::kNasalization, p));
    for (auto p : articulation_phones()) out.push_back(feature_name(ScoreKind::kArticulation, p));
    return out;
  }
  fail(Errc::kInvalidArgument, "unknown feature preset '" + std::string(name) + "'");
}

Eigen::RowVectorXd present_column_means(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                        std::span<const std::string> names) {
  Eigen::RowVectorXd means(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (std::isnan(X(i, j))) continue;
      sum += X(i, j);
      ++n;
    }
    if (n == 0)
      fail(Errc::kMissingFeature,
           (static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                       : "column " + std::to_string(j)) +
               " has no observed value");
    means(j) = sum / n;
  }
  return means;
}

void fill_missing(Eigen::Ref<Eigen::MatrixXd> X, const Eigen::RowVectorXd& values) {
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (std::isnan(X(i, j))) X(i, j) = values(j);
}

DesignMatrix to_design_matrix(std::span<const SpeakerFeatureVector> vectors,
                              std::span<const std::string> feature_subset, MissingPolicy policy) {
  DesignMatrix d;
  d.feature_names.assign(feature_subset.begin(), feature_subset.end());
  d.X.resize(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(feature_subset.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    d.row_ids.push_back(vectors[i].speaker_id);
    for (std::size_t j = 0; j < feature_subset.size(); ++j) {
      const auto v = vectors[i].value(feature_subset[j]);
      if (!v && policy == MissingPolicy::kError)
        fail(Errc::kMissingFeature, vectors[i].speaker_id + ": " + feature_subset[j]);
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.value_or(kNaN);
    }
  }
  if (policy == MissingPolicy::kImpute && d.has_missing())
    fill_missing(d.X, present_column_means(d.X, d.feature_names));
  return d;
}

void write_feature_table(const DesignMatrix& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << "speaker_id";
  for (const auto& f : table.feature_names) out << ',' << csv::quote_if_needed(f);
  out << '\n';
  for (Eigen::Index i = 0; i < table.X.rows(); ++i) {
    out << csv::quote_if_needed(table.row_ids[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < table.X.cols(); ++j) out << ',' << csv::format_double(table.X(i, j));
    out << '\n';
  }
}

DesignMatrix read_feature_table(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  if (t.header.empty() || t.header[0] != "speaker_id")
    fail(Errc::kMalformedRow, path.string() + ":1: header must start with speaker_id");
  DesignMatrix d;
  d.feature_names.assign(t.header.begin() + 1, t.header.end());
  d.X.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(d.feature_names.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.fields.size() != t.header.size())
      fail(Errc::kMalformedRow, path.string() + ":" + std::to_string(row.line) + ": wrong field count");
    d.row_ids.push_back(row.fields[0]);
    for (std::size_t j = 1; j < row.fields.size(); ++j) {
      double v = kNaN;
      if (row.fields[j] != "NA" && !csv::parse_double(row.fields[j], v))
        fail(Errc::kMalformedRow, path.string() + ":" + std::to_string(row.line) + ": bad number '" +
                                      row.fields[j] + "'");
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = v;
    }
  }
  return d;
}

DesignMatrix select_features(const DesignMatrix& table, std::span<const std::string> names) {
  DesignMatrix d;
  d.row_ids = table.row_ids;
  d.feature_names.assign(names.begin(), names.end());
  d.X.resize(table.X.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    auto it = std::find(table.feature_names.begin(), table.feature_names.end(), names[j]);
    if (it == table.feature_names.end()) fail(Errc::kMissingFeature, "no column " + names[j]);
    d.X.col(static_cast<Eigen::Index>(j)) = table.X.col(it - table.feature_names.begin());
  }
  return d;
}

void write_scores_csv(std::span<const PhoneScore> scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << "utterance_id,phone,score,n_frames\n";
  for (const auto& s : scores)
    out << csv::quote_if_needed(s.utterance_id) << ',' << s.phone << ',' << csv::format_double(s.score)
        << ',' << s.n_frames << '\n';
}

}  // namespace nap
