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

#include <gtest/gtest.h>

#include "support/test_util.h"

namespace nap {
namespace {

const char* kLongBe = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 0.3
tiers? <exists>
size = 2
item []:
    item [1]:
        class = "IntervalTier"
        name = "words"
        xmin = 0
        xmax = 0.3
        intervals: size = 1
        intervals [1]:
            xmin = 0
            xmax = 0.3
            text = "be"
    item [2]:
        class = "IntervalTier"
        name = "phones"
        xmin = 0
        xmax = 0.3
        intervals: size = 2
        intervals [1]:
            xmin = 0
            xmax = 0.1
            text = "B"
        intervals [2]:
            xmin = 0.1
            xmax = 0.3
            text = "IY1"
)";

const char* kShortBe = R"(File type = "ooTextFile"
Object class = "TextGrid"

0
0.3
<exists>
2
"IntervalTier"
"words"
0
0.3
1
0
0.3
"be"
"IntervalTier"
"phones"
0
0.3
3
0
0.1
"B"
0.1
0.3
"IY1"
0.3
0.3
""
)";

TextGrid grid(std::vector<std::pair<std::string, std::vector<TextGridInterval>>> tiers, double xmax) {
  TextGrid tg;
  tg.xmax = xmax;
  for (auto& [name, ivs] : tiers) {
    TextGridTier t;
    t.name = name;
    t.xmax = xmax;
    t.intervals = std::move(ivs);
    tg.tiers.push_back(std::move(t));
  }
  return tg;
}

AlignedUtterance word_of(const std::vector<std::tuple<std::string, double, double>>& phones) {
  std::vector<TextGridInterval> ph;
  for (const auto& [l, a, b] : phones) ph.push_back({a, b, l});
  const double end = std::get<2>(phones.back());
  return to_aligned_utterance(grid({{"words", {{0.0, end, "w"}}}, {"phones", ph}}, end));
}

void expect_be(const AlignedUtterance& u) {
  ASSERT_EQ(u.phones.size(), 2u);
  EXPECT_EQ(u.phones[0].label, "B");
  EXPECT_EQ(u.phones[1].label, "IY");
  EXPECT_DOUBLE_EQ(u.phones[1].t_start, 0.1);
  EXPECT_DOUBLE_EQ(u.phones[1].t_end, 0.3);
  EXPECT_EQ(u.phones[0].word_index, 0);
  ASSERT_EQ(u.words.size(), 1u);
  EXPECT_EQ(u.words[0].text, "be");
  EXPECT_DOUBLE_EQ(u.audio_duration, 0.3);
}

TEST(TextGridParseTest, LongFormat) { expect_be(to_aligned_utterance(parse_textgrid_text(kLongBe))); }

TEST(TextGridParseTest, ShortFormatDropsEmptyIntervals) {
  expect_be(to_aligned_utterance(parse_textgrid_text(kShortBe)));
}

TEST(TextGridParseTest, Utf16WithBom) {
  std::string bytes = "\xFF\xFE";
  for (char c : std::string(kLongBe)) {
    bytes.push_back(c);
    bytes.push_back('\0');
  }
  testing::TempDir dir;
  testing::write_text(dir / "be.TextGrid", bytes);
  expect_be(parse_textgrid(dir / "be.TextGrid"));
}

TEST(TextGridParseTest, MissingTier) {
  const auto tg = grid({{"words", {{0.0, 0.3, "be"}}}}, 0.3);
  EXPECT_NAP_ERROR(to_aligned_utterance(tg), Errc::kMissingTier);
  TierNames names;
  names.phones = "segments";
  EXPECT_NAP_ERROR(to_aligned_utterance(parse_textgrid_text(kLongBe), names), Errc::kMissingTier);
}

TEST(TextGridParseTest, Overlapping) {
  const auto tg = grid({{"words", {{0.0, 0.3, "w"}}}, {"phones", {{0.0, 0.2, "B"}, {0.1, 0.3, "IY"}}}}, 0.3);
  EXPECT_NAP_ERROR(to_aligned_utterance(tg), Errc::kOverlappingIntervals);
}

TEST(TextGridParseTest, MalformedReportsLine) {
  std::string bad(kLongBe);
  bad.replace(bad.find("xmax = 0.1"), 10, "xmax = zz");
  try {
    parse_textgrid_text(bad);
    FAIL() << "expected MalformedTextGrid";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMalformedTextGrid);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
  }
}

TEST(TextGridParseTest, RoundTrip) {
  const auto tg = parse_textgrid_text(kLongBe);
  EXPECT_EQ(parse_textgrid_text(format_textgrid_long(tg)), tg);
  EXPECT_EQ(parse_textgrid_text(format_textgrid_short(tg)), tg);
  testing::TempDir dir;
  write_textgrid(tg, dir / "x.TextGrid");
  EXPECT_EQ(read_textgrid(dir / "x.TextGrid"), tg);
}

TEST(PhoneLabelTest, Normalize) {
  EXPECT_EQ(normalize_phone("iy1"), "IY");
  EXPECT_EQ(normalize_phone("AA0"), "AA");
  EXPECT_EQ(normalize_phone("T"), "T");
  EXPECT_TRUE(is_silence("sp"));
  EXPECT_TRUE(is_silence("SIL"));
  EXPECT_TRUE(is_silence(""));
  EXPECT_FALSE(is_silence("M"));
}

TEST(NasalClassTest, NoNasal) {
  const auto u = assign_nasal_classes(word_of({{"B", 0.0, 0.1}, {"IY", 0.1, 0.3}}));
  ASSERT_EQ(u.phones.size(), 2u);
  EXPECT_EQ(u.phones[0].nasal_class, NasalClass::kOrl);
  EXPECT_EQ(u.phones[1].nasal_class, NasalClass::kOrl);
}

TEST(NasalClassTest, VowelAfterNasalSplits) {
  const auto u = assign_nasal_classes(word_of({{"M", 0.0, 0.1}, {"AA", 0.1, 0.3}}));
  ASSERT_EQ(u.phones.size(), 3u);
  EXPECT_EQ(u.phones[0].nasal_class, NasalClass::kNas);
  EXPECT_EQ(u.phones[1].label, "AA");
  EXPECT_DOUBLE_EQ(u.phones[1].t_start, 0.1);
  EXPECT_DOUBLE_EQ(u.phones[1].t_end, 0.2);
  EXPECT_EQ(u.phones[1].nasal_class, NasalClass::kNas);
  EXPECT_DOUBLE_EQ(u.phones[2].t_start, 0.2);
  EXPECT_DOUBLE_EQ(u.phones[2].t_end, 0.3);
  EXPECT_EQ(u.phones[2].nasal_class, NasalClass::kOrl);
  EXPECT_EQ(u.phones[1].phone_index, u.phones[2].phone_index);
}

TEST(NasalClassTest, VowelBeforeNasalSplitsNasalSide) {
  const auto u = assign_nasal_classes(word_of({{"AA", 0.0, 0.2}, {"N", 0.2, 0.3}}));
  ASSERT_EQ(u.phones.size(), 3u);
  EXPECT_EQ(u.phones[0].nasal_class, NasalClass::kOrl);
  EXPECT_EQ(u.phones[1].nasal_class, NasalClass::kNas);
  EXPECT_DOUBLE_EQ(u.phones[1].t_start, 0.1);
}

TEST(NasalClassTest, BothSidesWholeVowel) {
  const auto u = assign_nasal_classes(word_of({{"M", 0.0, 0.1}, {"AA", 0.1, 0.3}, {"N", 0.3, 0.4}}));
  ASSERT_EQ(u.phones.size(), 3u);
  for (const auto& p : u.phones) EXPECT_EQ(p.nasal_class, NasalClass::kNas);
}

TEST(NasalClassTest, NasalInOtherWordDoesNotSplit) {
  const auto tg = grid({{"words", {{0.0, 0.1, "m"}, {0.1, 0.3, "a"}}},
                        {"phones", {{0.0, 0.1, "M"}, {0.1, 0.3, "AA"}}}},
                       0.3);
  const auto u = assign_nasal_classes(to_aligned_utterance(tg));
  ASSERT_EQ(u.phones.size(), 2u);
  EXPECT_EQ(u.phones[1].nasal_class, NasalClass::kOrl);
}

TEST(NasalClassTest, UnvoicedAndTotality) {
  const auto u = assign_nasal_classes(
      word_of({{"S", 0.0, 0.1}, {"T", 0.1, 0.2}, {"AE", 0.2, 0.3}, {"NG", 0.3, 0.4}, {"Z", 0.4, 0.5}}));
  EXPECT_EQ(u.phones[0].nasal_class, NasalClass::kUnvoiced);
  EXPECT_EQ(u.phones[1].nasal_class, NasalClass::kUnvoiced);
  EXPECT_EQ(u.phones.back().nasal_class, NasalClass::kOrl);
  double covered = 0.0;
  for (const auto& p : u.phones) covered += p.duration();
  EXPECT_NEAR(covered, 0.5, 1e-12);
  EXPECT_EQ(phone_instances(u).size(), 5u);
}

FrameMatrix rows(Eigen::Index n) {
  FrameMatrix fm;
  fm.data.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) fm.data(i, 0) = static_cast<double>(i);
  return fm;
}

TEST(FramesForSegmentTest, CenterContainment) {
  // Centers i*0.01 + 0.01 in [0.10, 0.20) are i = 9..18.
  const auto fm = rows(99);
  PhoneSegment seg;
  seg.t_start = 0.10;
  seg.t_end = 0.20;
  const auto out = frames_for_segment(seg, fm);
  EXPECT_EQ(out.rows(), 10);
  EXPECT_EQ(out.data(0, 0), 9.0);
  EXPECT_EQ(out.data(9, 0), 18.0);
}

TEST(FramesForSegmentTest, EmptyAndWhole) {
  const auto fm = rows(99);
  PhoneSegment seg;
  seg.t_start = 0.101;
  seg.t_end = 0.106;
  EXPECT_NAP_ERROR(frames_for_segment(seg, fm), Errc::kEmptySegment);
  seg.t_start = 0.0;
  seg.t_end = 1.0;
  EXPECT_EQ(frames_for_segment(seg, fm).data, fm.data);
}

TEST(FramesForSegmentTest, SplitHalvesPartitionVowelFrames) {
  const auto fm = rows(99);
  const auto u = assign_nasal_classes(word_of({{"M", 0.0, 0.1}, {"AA", 0.1, 0.37}}));
  const auto a = segment_frames(u.phones[1].t_start, u.phones[1].t_end, fm);
  const auto b = segment_frames(u.phones[2].t_start, u.phones[2].t_end, fm);
  const auto whole = segment_frames(0.1, 0.37, fm);
  EXPECT_EQ(a.first, whole.first);
  EXPECT_EQ(a.first + a.count, b.first);
  EXPECT_EQ(a.count + b.count, whole.count);
}

}  // namespace
}  // namespace nap
