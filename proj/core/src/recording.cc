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
#include "nap/recording.h"

namespace nap {

Recording load_recording(const ManifestEntry& entry, const TierNames& tiers) {
  Recording r;
  r.speaker_id = entry.speaker_id;
  r.utterance_id = entry.utterance_id;
  r.alignment = assign_nasal_classes(parse_textgrid(entry.textgrid_path, tiers));
  r.audio = read_wav(entry.wav_path);
  return r;
}

FrameMatrix plp_features(const Waveform& w, const FrontendConfig& cfg) {
  return compute_plp13(w.sample_rate == 8000 ? w : resample(w, 8000), cfg);
}

FrameMatrix mfcc_features(const Waveform& w, const FrontendConfig& cfg) {
  return compute_mfcc39(w.sample_rate == 16000 ? w : resample(w, 16000), cfg);
}

}  // namespace nap
