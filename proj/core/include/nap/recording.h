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

#include "nap/corpus.h"
#include "nap/textgrid.h"
#include "nap/wav.h"

namespace nap {

// One utterance with its audio and forced alignment.
struct Recording {
  std::string speaker_id;
  std::string utterance_id;
  AlignedUtterance alignment;
  Waveform audio;
};

Recording load_recording(const ManifestEntry& entry, const TierNames& tiers = {});

// Resamples when needed and runs the frontend that matches the rate.
FrameMatrix plp_features(const Waveform& w, const FrontendConfig& cfg = {});
FrameMatrix mfcc_features(const Waveform& w, const FrontendConfig& cfg = {});

}  // namespace nap
