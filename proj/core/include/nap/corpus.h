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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nap {

enum class Disease { kPD, kAtaxia, kALS, kHD, kHealthy, kCLP, kOther };

// Labels as written in manifests: PD, A, ALS, HD, HEALTHY, CLP, OTHER.
std::string_view disease_label(Disease d);
std::optional<Disease> parse_disease(std::string_view label);

struct ManifestEntry {
  std::string speaker_id;
  Disease disease = Disease::kOther;
  std::string utterance_id;
  std::filesystem::path wav_path;
  std::filesystem::path textgrid_path;

  bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  // Speakers in order of first appearance.
  std::vector<std::string> speakers() const;
  std::optional<Disease> disease_of(std::string_view speaker_id) const;

  bool operator==(const CorpusManifest&) const = default;
};

// Header: speaker_id,disease,utterance_id,wav_path,textgrid_path. Relative
// paths are resolved against the manifest's directory and every path must
// exist. Throws MalformedRow, DuplicateUtterance, UnknownDisease, PathNotFound.
CorpusManifest load_manifest(const std::filesystem::path& path);

// Writes paths as stored (absolute after load_manifest).
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

struct Rating {
  std::string speaker_id;
  double hypernasality = 0.0;
  std::optional<double> articulatory_precision;

  bool operator==(const Rating&) const = default;
};

// Clinician ratings averaged upstream to one row per speaker, on the 1..7 scale.
class RatingsTable {
 public:
  RatingsTable() = default;

  // Throws DuplicateSpeaker or OutOfRangeRating.
  void add(Rating r);

  const std::vector<Rating>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  const Rating* find(std::string_view speaker_id) const;
  double mean_hypernasality() const;
  bool has_articulatory_precision() const;

 private:
  std::vector<Rating> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr double kRatingMin = 1.0;
inline constexpr double kRatingMax = 7.0;

// Header: speaker_id,hypernasality[,articulatory_precision].
RatingsTable load_ratings(const std::filesystem::path& path);
void write_ratings(const RatingsTable& table, const std::filesystem::path& path);

}  // namespace nap
