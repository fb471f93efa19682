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
#include "nap/alignment.h"

#include <gtest/gtest.h>

#include <random>

#include "support/test_util.h"

namespace nap {
namespace {

AlignedUtterance one_word(const std::vector<double>& centers, double duration) {
  AlignedUtterance u;
  u.audio_duration = duration;
  u.words.push_back({"w", 0.0, 1.0});
  int i = 0;
  for (double c : centers) {
    PhoneSegment p;
    p.label = "AA";
    p.t_start = c - 0.01;
    p.t_end = c + 0.01;
    p.word_index = 0;
    p.phone_index = i++;
    u.phones.push_back(p);
  }
  return u;
}

TEST(AlignmentErrorTest, HandCases) {
  EXPECT_EQ(alignment_error(0.5, 0.4, 0.6), 0.0);
  EXPECT_NEAR(alignment_error(0.7, 0.4, 0.6), 0.1, 1e-15);
  EXPECT_NEAR(alignment_error(0.3, 0.4, 0.6), 0.1, 1e-15);
  EXPECT_NAP_ERROR(alignment_error(0.5, 0.6, 0.6), Errc::kInvalidInterval);
}

TEST(AlignmentErrorTest, NonNegativeAndLipschitz) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    const double e1 = alignment_error(a, 0.2, 0.8), e2 = alignment_error(b, 0.2, 0.8);
    EXPECT_GE(e1, 0.0);
    EXPECT_EQ(e1 == 0.0, a >= 0.2 && a <= 0.8);
    EXPECT_LE(std::abs(e1 - e2), std::abs(a - b) + 1e-15);
  }
}

TEST(AuditTest, IdenticalIsZero) {
  const auto u = one_word({0.1, 0.3, 0.5}, 1.0);
  const auto a = audit_alignment(u, u);
  EXPECT_EQ(a.mean_error, 0.0);
  EXPECT_EQ(a.n_phones, 3u);
  EXPECT_EQ(a.n_unmatched, 0u);
}

TEST(AuditTest, OnePhoneOffByFiftyMs) {
  std::vector<double> centers;
  for (int i = 0; i < 9; ++i) centers.push_back(0.05 + 0.1 * i);
  centers.push_back(1.05);
  const auto automatic = one_word(centers, 1.2);
  const auto manual = one_word({}, 1.2);
  EXPECT_NEAR(audit_alignment(automatic, manual).mean_error, 0.005, 1e-12);
}

TEST(AuditTest, EmptyManualFallsBackToWholeUtterance) {
  const auto automatic = one_word({0.2, 0.4}, 1.0);
  AlignedUtterance manual;
  manual.audio_duration = 1.0;
  const auto a = audit_alignment(automatic, manual);
  EXPECT_TRUE(std::isfinite(a.mean_error));
  EXPECT_EQ(a.mean_error, 0.0);
  EXPECT_EQ(a.n_unmatched, 2u);
}

}  // namespace
}  // namespace nap
