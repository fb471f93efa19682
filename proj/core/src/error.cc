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

#include "nap/error.h"

namespace nap {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kPathNotFound: return "PathNotFound";
    case Errc::kIo: return "Io";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMalformedRow: return "MalformedRow";
    case Errc::kDuplicateUtterance: return "DuplicateUtterance";
    case Errc::kUnknownDisease: return "UnknownDisease";
    case Errc::kOutOfRangeRating: return "OutOfRangeRating";
    case Errc::kDuplicateSpeaker: return "DuplicateSpeaker";
    case Errc::kUnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::kCorruptHeader: return "CorruptHeader";
    case Errc::kUpsamplingRequested: return "UpsamplingRequested";
    case Errc::kSignalTooShort: return "SignalTooShort";
    case Errc::kWrongSampleRate: return "WrongSampleRate";
    case Errc::kLevinsonSingular: return "LevinsonSingular";
    case Errc::kMissingTier: return "MissingTier";
    case Errc::kMalformedTextGrid: return "MalformedTextGrid";
    case Errc::kOverlappingIntervals: return "OverlappingIntervals";
    case Errc::kEmptySegment: return "EmptySegment";
    case Errc::kInvalidInterval: return "InvalidInterval";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kVersionMismatch: return "VersionMismatch";
    case Errc::kCorruptFile: return "CorruptFile";
    case Errc::kUnknownPhone: return "UnknownPhone";
    case Errc::kMissingFeature: return "MissingFeature";
    case Errc::kSingularSystem: return "SingularSystem";
    case Errc::kEmptyDiseaseGroup: return "EmptyDiseaseGroup";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace nap
