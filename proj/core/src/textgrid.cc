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
#include "nap/textgrid.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <variant>

#include "nap/csv.h"
#include "nap/error.h"

namespace nap {
namespace {

constexpr double kTimeEps = 1e-9;

// ---- encoding ----

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string to_utf8(std::string_view bytes) {
  auto u8 = [&](std::size_t i) { return static_cast<unsigned char>(bytes[i]); };
  if (bytes.size() >= 3 && u8(0) == 0xEF && u8(1) == 0xBB && u8(2) == 0xBF)
    return std::string(bytes.substr(3));
  if (bytes.size() < 2) return std::string(bytes);
  const bool le = u8(0) == 0xFF && u8(1) == 0xFE;
  const bool be = u8(0) == 0xFE && u8(1) == 0xFF;
  if (!le && !be) return std::string(bytes);

  std::string out;
  auto unit = [&](std::size_t i) -> char16_t {
    return le ? char16_t(u8(i) | u8(i + 1) << 8) : char16_t(u8(i) << 8 | u8(i + 1));
  };
  for (std::size_t i = 2; i + 1 < bytes.size(); i += 2) {
    char32_t cp = unit(i);
    if (cp >= 0xD800 && cp < 0xDC00 && i + 3 < bytes.size()) {
      const char32_t lo = unit(i + 2);
      if (lo >= 0xDC00 && lo < 0xE000) {
        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
        i += 2;
      }
    }
    append_utf8(out, cp);
  }
  return out;
}

// ---- tokenizer ----
//
// Praat's text serialization is read by pulling numbers, strings and
// <flags> in order and skipping everything else (labels, "=", "[i]:").

struct Token {
  enum Kind { kNumber, kString, kFlag } kind;
  double number = 0.0;
  std::string text;
  std::size_t line = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      Token t{Token::kString, 0.0, {}, line};
      ++i;
      bool closed = false;
      while (i < n) {
        if (s[i] == '"') {
          if (i + 1 < n && s[i + 1] == '"') {
            t.text.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (s[i] == '\n') ++line;
        t.text.push_back(s[i++]);
      }
      if (!closed) fail(Errc::kMalformedTextGrid, "line " + std::to_string(t.line) + ": unterminated string");
      out.push_back(std::move(t));
    } else if (c == '!') {
      while (i < n && s[i] != '\n') ++i;
    } else if (c == '[') {
      while (i < n && s[i] != ']' && s[i] != '\n') ++i;
      if (i < n && s[i] == ']') ++i;
    } else if (c == '<') {
      Token t{Token::kFlag, 0.0, {}, line};
      ++i;
      while (i < n && s[i] != '>' && s[i] != '\n') t.text.push_back(s[i++]);
      if (i < n && s[i] == '>') ++i;
      out.push_back(std::move(t));
    } else {
      const std::size_t start = i;
      while (i < n && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '"' &&
             s[i] != '[' && s[i] != '<')
        ++i;
      double v = 0.0;
      if (csv::parse_double(std::string_view(s).substr(start, i - start), v))
        out.push_back(Token{Token::kNumber, v, {}, line});
    }
  }
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> t) : tokens_(std::move(t)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  std::size_t line() const {
    if (tokens_.empty()) return 1;
    return tokens_[std::min(pos_, tokens_.size() - 1)].line;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::kMalformedTextGrid, "line " + std::to_string(line()) + ": " + what);
  }

  double number(const char* what) {
    if (done() || tokens_[pos_].kind != Token::kNumber) error(std::string("expected ") + what);
    return tokens_[pos_++].number;
  }

  std::string string(const char* what) {
    if (done() || tokens_[pos_].kind != Token::kString) error(std::string("expected ") + what);
    return tokens_[pos_++].text;
  }

  std::size_t count(const char* what) {
    const double v = number(what);
    if (v < 0 || v != std::floor(v) || v > 1e8) error(std::string("invalid ") + what);
    return static_cast<std::size_t>(v);
  }

  void skip_flag() {
    if (!done() && tokens_[pos_].kind == Token::kFlag) ++pos_;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string num(double v) { return csv::format_double(v); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool in_set(std::string_view phone, std::span<const std::string_view> set) {
  return std::find(set.begin(), set.end(), phone) != set.end();
}

constexpr std::array<std::string_view, 15> kVowels = {
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW"};
constexpr std::array<std::string_view, 3> kNasals = {"M", "N", "NG"};
constexpr std::array<std::string_view, 12> kVoicedConsonants = {
    "B", "D", "G", "DH", "JH", "V", "Z", "ZH", "L", "R", "W", "Y"};
constexpr std::array<std::string_view, 9> kUnvoiced = {"P",  "T", "K",  "CH", "F",
                                                       "TH", "S", "SH", "HH"};
constexpr std::array<std::string_view, 17> kNasalizationExport = {
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "D", "DH",
    "EH", "ER", "EY", "G",  "IY", "JH", "V", "Z"};

void check_tier_order(const TextGridTier& tier) {
  double prev_end = -INFINITY;
  for (const auto& iv : tier.intervals) {
    if (iv.xmax < iv.xmin - kTimeEps || iv.xmin < prev_end - kTimeEps)
      fail(Errc::kOverlappingIntervals,
           "tier '" + tier.name + "': [" + num(iv.xmin) + ", " + num(iv.xmax) +
               "] overlaps the previous interval");
    prev_end = iv.xmax;
  }
}

}  // namespace

// ---- TextGrid ----

const TextGridTier* TextGrid::find_tier(std::string_view name) const {
  const std::string want = lower(name);
  for (const auto& t : tiers)
    if (lower(t.name) == want) return &t;
  return nullptr;
}

TextGrid parse_textgrid_text(std::string_view bytes) {
  TokenStream ts(tokenize(to_utf8(bytes)));
  if (ts.string("file type") != "ooTextFile") ts.error("file type is not ooTextFile");
  if (ts.string("object class") != "TextGrid") ts.error("object class is not TextGrid");
  TextGrid tg;
  tg.xmin = ts.number("xmin");
  tg.xmax = ts.number("xmax");
  ts.skip_flag();
  const std::size_t n_tiers = ts.count("tier count");
  for (std::size_t t = 0; t < n_tiers; ++t) {
    TextGridTier tier;
    const std::string cls = ts.string("tier class");
    if (cls == "IntervalTier") {
      tier.is_interval = true;
    } else if (cls == "TextTier") {
      tier.is_interval = false;
    } else {
      ts.error("unknown tier class '" + cls + "'");
    }
    tier.name = ts.string("tier name");
    tier.xmin = ts.number("tier xmin");
    tier.xmax = ts.number("tier xmax");
    const std::size_t n = ts.count("item count");
    for (std::size_t k = 0; k < n; ++k) {
      if (tier.is_interval) {
        TextGridInterval iv;
        iv.xmin = ts.number("interval xmin");
        iv.xmax = ts.number("interval xmax");
        iv.text = ts.string("interval text");
        tier.intervals.push_back(std::move(iv));
      } else {
        TextGridPoint p;
        p.time = ts.number("point time");
        p.mark = ts.string("point mark");
        tier.points.push_back(std::move(p));
      }
    }
    tg.tiers.push_back(std::move(tier));
  }
  return tg;
}

TextGrid read_textgrid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kPathNotFound, path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_textgrid_text(bytes);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.detail());
  }
}

std::string format_textgrid_long(const TextGrid& tg) {
  std::ostringstream o;
  o << "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  o << "xmin = " << num(tg.xmin) << " \nxmax = " << num(tg.xmax) << " \ntiers? <exists> \n";
  o << "size = " << tg.tiers.size() << " \nitem []: \n";
  for (std::size_t t = 0; t < tg.tiers.size(); ++t) {
    const auto& tier = tg.tiers[t];
    o << "    item [" << t + 1 << "]:\n";
    o << "        class = \"" << (tier.is_interval ? "IntervalTier" : "TextTier") << "\" \n";
    o << "        name = " << quoted(tier.name) << " \n";
    o << "        xmin = " << num(tier.xmin) << " \n        xmax = " << num(tier.xmax) << " \n";
    if (tier.is_interval) {
      o << "        intervals: size = " << tier.intervals.size() << " \n";
      for (std::size_t k = 0; k < tier.intervals.size(); ++k) {
        const auto& iv = tier.intervals[k];
        o << "        intervals [" << k + 1 << "]:\n";
        o << "            xmin = " << num(iv.xmin) << " \n";
        o << "            xmax = " << num(iv.xmax) << " \n";
        o << "            text = " << quoted(iv.text) << " \n";
      }
    } else {
      o << "        points: size = " << tier.points.size() << " \n";
      for (std::size_t k = 0; k < tier.points.size(); ++k) {
        o << "        points [" << k + 1 << "]:\n";
        o << "            number = " << num(tier.points[k].time) << " \n";
        o << "            mark = " << quoted(tier.points[k].mark) << " \n";
      }
    }
  }
  return o.str();
}

std::string format_textgrid_short(const TextGrid& tg) {
  std::ostringstream o;
  o << "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  o << num(tg.xmin) << '\n' << num(tg.xmax) << "\n<exists>\n" << tg.tiers.size() << '\n';
  for (const auto& tier : tg.tiers) {
    o << (tier.is_interval ? "\"IntervalTier\"" : "\"TextTier\"") << '\n';
    o << quoted(tier.name) << '\n' << num(tier.xmin) << '\n' << num(tier.xmax) << '\n';
    if (tier.is_interval) {
      o << tier.intervals.size() << '\n';
      for (const auto& iv : tier.intervals)
        o << num(iv.xmin) << '\n' << num(iv.xmax) << '\n' << quoted(iv.text) << '\n';
    } else {
      o << tier.points.size() << '\n';
      for (const auto& p : tier.points) o << num(p.time) << '\n' << quoted(p.mark) << '\n';
    }
  }
  return o.str();
}

void write_textgrid(const TextGrid& tg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  out << format_textgrid_long(tg);
}

// ---- phones ----

std::string_view nasal_class_name(NasalClass c) {
  switch (c) {
    case NasalClass::kNas: return "NAS";
    case NasalClass::kOrl: return "ORL";
    case NasalClass::kUnvoiced: return "UNVOICED";
    case NasalClass::kExcluded: return "EXCLUDED";
  }
  return "EXCLUDED";
}

std::string normalize_phone(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  while (!out.empty() && (out.back() == '0' || out.back() == '1' || out.back() == '2'))
    out.pop_back();
  return out;
}

bool is_vowel(std::string_view p) { return in_set(p, kVowels); }
bool is_nasal_consonant(std::string_view p) { return in_set(p, kNasals); }
bool is_voiced_consonant(std::string_view p) { return in_set(p, kVoicedConsonants); }
bool is_unvoiced(std::string_view p) { return in_set(p, kUnvoiced); }

bool is_silence(std::string_view label) {
  const std::string l = lower(label);
  return l.empty() || l == "sil" || l == "sp" || l == "spn" ||
         l.find_first_not_of(" \t") == std::string::npos;
}

std::span<const std::string_view> nasalization_phones() { return kNasalizationExport; }
std::span<const std::string_view> articulation_phones() { return kUnvoiced; }

// ---- aligned utterance ----

AlignedUtterance to_aligned_utterance(const TextGrid& tg, const TierNames& names) {
  const TextGridTier* words = tg.find_tier(names.words);
  const TextGridTier* phones = tg.find_tier(names.phones);
  if (!words || !words->is_interval) fail(Errc::kMissingTier, "no interval tier '" + names.words + "'");
  if (!phones || !phones->is_interval)
    fail(Errc::kMissingTier, "no interval tier '" + names.phones + "'");
  check_tier_order(*words);
  check_tier_order(*phones);

  AlignedUtterance u;
  u.audio_duration = tg.xmax;
  auto check_span = [&](const TextGridInterval& iv) {
    if (iv.xmin < std::min(0.0, tg.xmin) - 1e-6 || iv.xmax > tg.xmax + 1e-6)
      fail(Errc::kMalformedTextGrid,
           "interval [" + num(iv.xmin) + ", " + num(iv.xmax) + "] outside the utterance");
    if (!(iv.xmax > iv.xmin))
      fail(Errc::kMalformedTextGrid, "zero-length labelled interval at " + num(iv.xmin));
  };
  for (const auto& iv : words->intervals) {
    if (is_silence(iv.text)) continue;
    check_span(iv);
    u.words.push_back(WordSegment{iv.text, iv.xmin, iv.xmax});
  }
  int index = 0;
  for (const auto& iv : phones->intervals) {
    if (is_silence(iv.text)) continue;
    check_span(iv);
    PhoneSegment seg;
    seg.label = normalize_phone(iv.text);
    seg.t_start = iv.xmin;
    seg.t_end = iv.xmax;
    seg.phone_index = index++;
    const double mid = seg.center();
    for (std::size_t w = 0; w < u.words.size(); ++w) {
      if (mid >= u.words[w].t_start && mid <= u.words[w].t_end) {
        seg.word_index = static_cast<int>(w);
        break;
      }
    }
    u.phones.push_back(std::move(seg));
  }
  return u;
}

AlignedUtterance parse_textgrid(const std::filesystem::path& path, const TierNames& names) {
  const TextGrid tg = read_textgrid(path);
  try {
    return to_aligned_utterance(tg, names);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.detail());
  }
}

AlignedUtterance assign_nasal_classes(const AlignedUtterance& u) {
  AlignedUtterance out;
  out.words = u.words;
  out.audio_duration = u.audio_duration;
  const auto instances = phone_instances(u);
  auto nasal_at = [&](std::size_t j, int word) {
    return word >= 0 && instances[j].word_index == word && is_nasal_consonant(instances[j].label);
  };
  for (std::size_t i = 0; i < instances.size(); ++i) {
    PhoneSegment seg = instances[i];
    const std::string& p = seg.label;
    if (is_nasal_consonant(p)) {
      seg.nasal_class = NasalClass::kNas;
    } else if (is_vowel(p)) {
      const bool before = i > 0 && nasal_at(i - 1, seg.word_index);
      const bool after = i + 1 < instances.size() && nasal_at(i + 1, seg.word_index);
      if (before && after) {
        seg.nasal_class = NasalClass::kNas;
      } else if (before || after) {
        const double mid = seg.center();
        PhoneSegment first = seg, second = seg;
        first.t_end = mid;
        second.t_start = mid;
        first.nasal_class = before ? NasalClass::kNas : NasalClass::kOrl;
        second.nasal_class = before ? NasalClass::kOrl : NasalClass::kNas;
        out.phones.push_back(std::move(first));
        out.phones.push_back(std::move(second));
        continue;
      } else {
        seg.nasal_class = NasalClass::kOrl;
      }
    } else if (is_voiced_consonant(p)) {
      seg.nasal_class = NasalClass::kOrl;
    } else if (is_unvoiced(p)) {
      seg.nasal_class = NasalClass::kUnvoiced;
    } else {
      seg.nasal_class = NasalClass::kExcluded;
    }
    out.phones.push_back(std::move(seg));
  }
  return out;
}

std::vector<PhoneSegment> phone_instances(const AlignedUtterance& u) {
  std::vector<PhoneSegment> out;
  for (const auto& seg : u.phones) {
    if (!out.empty() && out.back().phone_index == seg.phone_index) {
      out.back().t_end = std::max(out.back().t_end, seg.t_end);
      continue;
    }
    out.push_back(seg);
  }
  return out;
}

FrameRange segment_frames(double t_start, double t_end, const FrameMatrix& fm) {
  // center(i) = i*hop + len/2 in [t_start, t_end)
  const double hop = fm.frame_hop_s, half = fm.frame_length_s / 2.0;
  auto first = static_cast<Eigen::Index>(std::ceil((t_start - half) / hop - kTimeEps));
  auto last = static_cast<Eigen::Index>(std::ceil((t_end - half) / hop - kTimeEps)) - 1;
  first = std::max<Eigen::Index>(first, 0);
  last = std::min<Eigen::Index>(last, fm.rows() - 1);
  if (last < first)
    fail(Errc::kEmptySegment, "no frame centers in [" + num(t_start) + ", " + num(t_end) + ")");
  return FrameRange{first, last - first + 1};
}

FrameMatrix frames_for_segment(const PhoneSegment& seg, const FrameMatrix& fm) {
  const FrameRange r = segment_frames(seg.t_start, seg.t_end, fm);
  FrameMatrix out;
  out.frontend = fm.frontend;
  out.frame_length_s = fm.frame_length_s;
  out.frame_hop_s = fm.frame_hop_s;
  out.data = fm.data.middleRows(r.first, r.count);
  return out;
}

}  // namespace nap
