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
#include "nap/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include "nap/csv.h"
#include "nap/error.h"

namespace nap {
namespace fs = std::filesystem;

namespace {

constexpr std::pair<Disease, std::string_view> kDiseaseLabels[] = {
    {Disease::kPD, "PD"},           {Disease::kAtaxia, "A"}, {Disease::kALS, "ALS"},
    {Disease::kHD, "HD"},           {Disease::kHealthy, "HEALTHY"},
    {Disease::kCLP, "CLP"},         {Disease::kOther, "OTHER"},
};

std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

void expect_header(const csv::Table& t, const std::vector<std::string>& want,
                   std::size_t optional_tail, const fs::path& path) {
  const auto& h = t.header;
  bool ok = h.size() >= want.size() - optional_tail && h.size() <= want.size();
  for (std::size_t i = 0; ok && i < h.size(); ++i) ok = h[i] == want[i];
  if (!ok) {
    std::string joined;
    for (const auto& w : want) joined += (joined.empty() ? "" : ",") + w;
    fail(Errc::kMalformedRow, where(path, 1) + ": expected header " + joined);
  }
}

}  // namespace

std::string_view disease_label(Disease d) {
  for (const auto& [value, label] : kDiseaseLabels)
    if (value == d) return label;
  return "OTHER";
}

std::optional<Disease> parse_disease(std::string_view label) {
  for (const auto& [value, name] : kDiseaseLabels)
    if (name == label) return value;
  return std::nullopt;
}

std::vector<std::string> CorpusManifest::speakers() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : entries)
    if (seen.insert(e.speaker_id).second) out.push_back(e.speaker_id);
  return out;
}

std::optional<Disease> CorpusManifest::disease_of(std::string_view speaker_id) const {
  for (const auto& e : entries)
    if (e.speaker_id == speaker_id) return e.disease;
  return std::nullopt;
}

CorpusManifest load_manifest(const fs::path& path) {
  if (!fs::exists(path)) fail(Errc::kPathNotFound, path.string());
  const auto table = csv::read(path);
  expect_header(table,
                {"speaker_id", "disease", "utterance_id", "wav_path", "textgrid_path"}, 0,
                path);
  const fs::path base = fs::absolute(path).parent_path();

  CorpusManifest manifest;
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& row : table.rows) {
    const auto& f = row.fields;
    if (f.size() != 5 || f[0].empty() || f[2].empty() || f[3].empty() || f[4].empty())
      fail(Errc::kMalformedRow, where(path, row.line) + ": expected 5 non-empty fields");
    auto disease = parse_disease(f[1]);
    if (!disease)
      fail(Errc::kUnknownDisease, where(path, row.line) + ": '" + f[1] + "'");
    if (!keys.emplace(f[0], f[2]).second)
      fail(Errc::kDuplicateUtterance,
           where(path, row.line) + ": (" + f[0] + ", " + f[2] + ") repeated");

    auto resolve = [&](const std::string& p) {
      fs::path q(p);
      if (q.is_relative()) q = base / q;
      q = q.lexically_normal();
      if (!fs::exists(q)) fail(Errc::kPathNotFound, where(path, row.line) + ": " + q.string());
      return q;
    };
    manifest.entries.push_back(
        ManifestEntry{f[0], *disease, f[2], resolve(f[3]), resolve(f[4])});
  }
  return manifest;
}

void write_manifest(const CorpusManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << "speaker_id,disease,utterance_id,wav_path,textgrid_path\n";
  for (const auto& e : manifest.entries) {
    out << csv::quote_if_needed(e.speaker_id) << ',' << disease_label(e.disease) << ','
        << csv::quote_if_needed(e.utterance_id) << ','
        << csv::quote_if_needed(e.wav_path.string()) << ','
        << csv::quote_if_needed(e.textgrid_path.string()) << '\n';
  }
}

void RatingsTable::add(Rating r) {
  auto in_range = [](double v) { return v >= kRatingMin && v <= kRatingMax; };
  if (!in_range(r.hypernasality))
    fail(Errc::kOutOfRangeRating,
         r.speaker_id + ": hypernasality " + csv::format_double(r.hypernasality));
  if (r.articulatory_precision && !in_range(*r.articulatory_precision))
    fail(Errc::kOutOfRangeRating,
         r.speaker_id + ": articulatory_precision " +
             csv::format_double(*r.articulatory_precision));
  if (index_.count(r.speaker_id)) fail(Errc::kDuplicateSpeaker, r.speaker_id);
  index_.emplace(r.speaker_id, rows_.size());
  rows_.push_back(std::move(r));
}

const Rating* RatingsTable::find(std::string_view speaker_id) const {
  auto it = index_.find(std::string(speaker_id));
  return it == index_.end() ? nullptr : &rows_[it->second];
}

double RatingsTable::mean_hypernasality() const {
  if (rows_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows_) sum += r.hypernasality;
  return sum / static_cast<double>(rows_.size());
}

bool RatingsTable::has_articulatory_precision() const {
  return std::any_of(rows_.begin(), rows_.end(),
                     [](const Rating& r) { return r.articulatory_precision.has_value(); });
}

RatingsTable load_ratings(const fs::path& path) {
  if (!fs::exists(path)) fail(Errc::kPathNotFound, path.string());
  const auto table = csv::read(path);
  expect_header(table, {"speaker_id", "hypernasality", "articulatory_precision"}, 1, path);
  const bool with_ap = table.header.size() == 3;

  RatingsTable ratings;
  for (const auto& row : table.rows) {
    const auto& f = row.fields;
    if (f.size() != table.header.size() || f[0].empty())
      fail(Errc::kMalformedRow, where(path, row.line) + ": wrong field count");
    Rating r;
    r.speaker_id = f[0];
    if (!csv::parse_double(f[1], r.hypernasality))
      fail(Errc::kMalformedRow, where(path, row.line) + ": bad number '" + f[1] + "'");
    if (with_ap && !f[2].empty() && f[2] != "NA") {
      double ap = 0.0;
      if (!csv::parse_double(f[2], ap))
        fail(Errc::kMalformedRow, where(path, row.line) + ": bad number '" + f[2] + "'");
      r.articulatory_precision = ap;
    }
    try {
      ratings.add(std::move(r));
    } catch (const Error& e) {
      fail(e.code(), where(path, row.line) + ": " + e.detail());
    }
  }
  return ratings;
}

void write_ratings(const RatingsTable& table, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  const bool with_ap = table.has_articulatory_precision();
  out << "speaker_id,hypernasality" << (with_ap ? ",articulatory_precision" : "") << '\n';
  for (const auto& r : table.rows()) {
    out << csv::quote_if_needed(r.speaker_id) << ',' << csv::format_double(r.hypernasality);
    if (with_ap)
      out << ','
          << (r.articulatory_precision ? csv::format_double(*r.articulatory_precision) : "NA");
    out << '\n';
  }
}

}  // namespace nap
