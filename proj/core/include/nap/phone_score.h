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

#include <string>

namespace nap {

enum class ScoreKind { kNasalization, kArticulation };

// Per-frame-normalized log-likelihood ratio for one aligned phone.
struct PhoneScore {
  std::string utterance_id;
  std::string phone;
  ScoreKind kind = ScoreKind::kNasalization;
  double score = 0.0;
  int n_frames = 0;

  bool operator==(const PhoneScore&) const = default;
};

}  // namespace nap
