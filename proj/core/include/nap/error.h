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

#include <stdexcept>
#include <string>
#include <string_view>

namespace nap {

enum class Errc {
  kPathNotFound,
  kIo,
  kInvalidArgument,
  // corpus
  kMalformedRow,
  kDuplicateUtterance,
  kUnknownDisease,
  kOutOfRangeRating,
  kDuplicateSpeaker,
  // audio / frontend
  kUnsupportedEncoding,
  kCorruptHeader,
  kUpsamplingRequested,
  kSignalTooShort,
  kWrongSampleRate,
  kLevinsonSingular,
  // alignment
  kMissingTier,
  kMalformedTextGrid,
  kOverlappingIntervals,
  kEmptySegment,
  kInvalidInterval,
  // models
  kDimensionMismatch,
  kInsufficientData,
  kVersionMismatch,
  kCorruptFile,
  kUnknownPhone,
  // regression
  kMissingFeature,
  kSingularSystem,
  kEmptyDiseaseGroup,
};

std::string_view errc_name(Errc code);

// All library failures are reported through this one exception type; callers
// branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  // Message without the error-name prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace nap
