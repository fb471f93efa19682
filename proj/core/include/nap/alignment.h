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

#include <cstddef>

#include "nap/textgrid.h"

namespace nap {

// Distance from an automatically aligned phone center to the nearest edge of
// the manually aligned interval; zero when the center lies inside it.
// Throws InvalidInterval unless manual_start < manual_end.
double alignment_error(double auto_center, double manual_start, double manual_end);

struct AlignmentAudit {
  double mean_error = 0.0;   // seconds
  double total_error = 0.0;  // seconds, summed over phones
  std::size_t n_phones = 0;
  std::size_t n_unmatched = 0;  // phones audited against the whole utterance
};

// Matches the k-th word of the automatic alignment to the k-th interval of the
// manual tier (manual.words) and scores each automatic phone center against
// its matched interval. Phones without a match are scored against
// [0, duration] of the manual alignment.
AlignmentAudit audit_alignment(const AlignedUtterance& automatic, const AlignedUtterance& manual);

}  // namespace nap
