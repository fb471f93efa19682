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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nap/frontend.h"

namespace nap {

// ---- Raw Praat TextGrid -------------------------------------------------

struct TextGridInterval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string text;
  bool operator==(const TextGridInterval&) const = default;
};

struct TextGridPoint {
  double time = 0.0;
  std::string mark;
  bool operator==(const TextGridPoint&) const = default;
};

struct TextGridTier {
  std::string name;
  bool is_interval = true;  // false: TextTier (points)
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<TextGridInterval> intervals;
  std::vector<TextGridPoint> points;
  bool operator==(const TextGridTier&) const = default;
};

struct TextGrid {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<TextGridTier> tiers;

  const TextGridTier* find_tier(std::string_view name) const;  // case-insensitive
  bool operator==(const TextGrid&) const = default;
};

// Accepts long and short text formats. Text may be UTF-8 (optional BOM) or
// UTF-16 with BOM. Throws MalformedTextGrid with the offending line number.
TextGrid parse_textgrid_text(std::string_view bytes);
TextGrid read_textgrid(const std::filesystem::path& path);

std::string format_textgrid_long(const TextGrid& tg);
std::string format_textgrid_short(const TextGrid& tg);
void write_textgrid(const TextGrid& tg, const std::filesystem::path& path);

// ---- Phone inventory ----------------------------------------------------

enum class NasalClass { kNas, kOrl, kUnvoiced, kExcluded };
std::string_view nasal_class_name(NasalClass c);

// Upper-cases and strips ARPAbet stress digits (0/1/2).
std::string normalize_phone(std::string_view label);

bool is_vowel(std::string_view phone);
bool is_nasal_consonant(std::string_view phone);
bool is_voiced_consonant(std::string_view phone);
bool is_unvoiced(std::string_view phone);
bool is_silence(std::string_view label);  // "", sil, sp, spn (case-insensitive)

// Voiced phones whose nasalization score is exported as a feature.
std::span<const std::string_view> nasalization_phones();
// Unvoiced phones whose articulatory precision is exported as a feature.
std::span<const std::string_view> articulation_phones();

// ---- Aligned utterance --------------------------------------------------

struct PhoneSegment {
  std::string label;
  double t_start = 0.0;
  double t_end = 0.0;
  int word_index = -1;  // -1 when no word interval covers the phone
  NasalClass nasal_class = NasalClass::kExcluded;
  int phone_index = 0;  // index of the aligned phone this segment came from

  double duration() const { return t_end - t_start; }
  double center() const { return 0.5 * (t_start + t_end); }
  bool operator==(const PhoneSegment&) const = default;
};

struct WordSegment {
  std::string text;
  double t_start = 0.0;
  double t_end = 0.0;
  bool operator==(const WordSegment&) const = default;
};

struct AlignedUtterance {
  std::vector<PhoneSegment> phones;
  std::vector<WordSegment> words;
  double audio_duration = 0.0;
  bool operator==(const AlignedUtterance&) const = default;
};

struct TierNames {
  std::string words = "words";
  std::string phones = "phones";
};

// Throws MissingTier, MalformedTextGrid, OverlappingIntervals.
AlignedUtterance to_aligned_utterance(const TextGrid& tg, const TierNames& names = {});
AlignedUtterance parse_textgrid(const std::filesystem::path& path, const TierNames& names = {});

// Tags every phone NAS / ORL / UNVOICED / EXCLUDED. A vowel with a nasal
// consonant directly before or after it in the same word is split at its
// temporal midpoint: the half touching the nasal is NAS, the other ORL. With
// nasals on both sides the whole vowel is NAS.
AlignedUtterance assign_nasal_classes(const AlignedUtterance& u);

// One segment per aligned phone, re-joining halves produced by
// assign_nasal_classes. The class is that of the first half.
std::vector<PhoneSegment> phone_instances(const AlignedUtterance& u);

struct FrameRange {
  Eigen::Index first = 0;
  Eigen::Index count = 0;
};

// Frames whose center i*hop + length/2 lies in [t_start, t_end), clipped to
// the matrix. Throws EmptySegment when no center falls inside.
FrameRange segment_frames(double t_start, double t_end, const FrameMatrix& fm);
FrameMatrix frames_for_segment(const PhoneSegment& seg, const FrameMatrix& fm);

}  // namespace nap
