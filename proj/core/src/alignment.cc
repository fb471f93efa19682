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

#include <algorithm>
#include <string>

#include "nap/csv.h"
#include "nap/error.h"

namespace nap {

double alignment_error(double auto_center, double manual_start, double manual_end) {
  if (!(manual_start < manual_end))
    fail(Errc::kInvalidInterval, "[" + csv::format_double(manual_start) + ", " +
                                     csv::format_double(manual_end) + "]");
  return std::max({0.0, manual_start - auto_center, auto_center - manual_end});
}

AlignmentAudit audit_alignment(const AlignedUtterance& automatic, const AlignedUtterance& manual) {
  AlignmentAudit audit;
  const double whole_end = std::max({manual.audio_duration, automatic.audio_duration, 1e-9});
  for (const auto& phone : phone_instances(automatic)) {
    const int w = phone.word_index;
    double err = 0.0;
    if (w >= 0 && static_cast<std::size_t>(w) < manual.words.size()) {
      const auto& iv = manual.words[static_cast<std::size_t>(w)];
      err = alignment_error(phone.center(), iv.t_start, iv.t_end);
    } else {
      err = alignment_error(phone.center(), 0.0, whole_end);
      ++audit.n_unmatched;
    }
    audit.total_error += err;
    ++audit.n_phones;
  }
  if (audit.n_phones > 0) audit.mean_error = audit.total_error / static_cast<double>(audit.n_phones);
  return audit;
}

}  // namespace nap
