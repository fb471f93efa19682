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
#include "nap/nasalization.h"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "nap/error.h"
#include "nap/parallel.h"

namespace nap {
namespace {

bool is_classed(const AlignedUtterance& u) {
  return std::any_of(u.phones.begin(), u.phones.end(),
                     [](const PhoneSegment& p) { return p.nasal_class != NasalClass::kExcluded; });
}

Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks, Eigen::Index cols) {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

template <class Load>
NasalizationModel train_from(std::size_t n, Load&& load, const TrainConfig& cfg,
                             NasalizationTraces* traces) {
  std::vector<NasalizationFrames> parts(n);
  parallel_for(n, cfg.n_threads, [&](std::size_t i) {
    const Recording r = load(i);
    parts[i] = nasalization_frames(r.alignment, plp_features(r.audio));
  });
  std::vector<Eigen::MatrixXd> nas, orl;
  for (auto& p : parts) {
    nas.push_back(std::move(p.nas));
    orl.push_back(std::move(p.orl));
  }
  return train_nasalization(stack(nas, 13), stack(orl, 13), cfg, traces);
}

}  // namespace

NasalizationFrames nasalization_frames(const AlignedUtterance& u, const FrameMatrix& plp) {
  const AlignedUtterance classed = is_classed(u) ? u : assign_nasal_classes(u);
  std::vector<Eigen::MatrixXd> nas, orl;
  for (const auto& seg : classed.phones) {
    if (seg.nasal_class != NasalClass::kNas && seg.nasal_class != NasalClass::kOrl) continue;
    FrameRange r;
    try {
      r = segment_frames(seg.t_start, seg.t_end, plp);
    } catch (const Error& e) {
      if (e.code() != Errc::kEmptySegment) throw;
      continue;
    }
    auto& pool = seg.nasal_class == NasalClass::kNas ? nas : orl;
    pool.push_back(plp.data.middleRows(r.first, r.count));
  }
  return NasalizationFrames{stack(nas, plp.cols()), stack(orl, plp.cols())};
}

NasalizationModel train_nasalization(const Eigen::MatrixXd& nas_frames,
                                     const Eigen::MatrixXd& orl_frames, const TrainConfig& cfg,
                                     NasalizationTraces* traces) {
  const Eigen::Index need = 10 * static_cast<Eigen::Index>(cfg.n_components);
  if (nas_frames.rows() < need)
    fail(Errc::kInsufficientData, "NAS pool has " + std::to_string(nas_frames.rows()) +
                                      " frames, need " + std::to_string(need));
  if (orl_frames.rows() < need)
    fail(Errc::kInsufficientData, "ORL pool has " + std::to_string(orl_frames.rows()) +
                                      " frames, need " + std::to_string(need));
  NasalizationTraces local;
  NasalizationTraces& tr = traces ? *traces : local;
  NasalizationModel m{train_em(nas_frames, cfg, &tr.nas), train_em(orl_frames, cfg, &tr.orl)};
  return m;
}

NasalizationModel train_nasalization(std::span<const Recording> corpus, const TrainConfig& cfg,
                                     NasalizationTraces* traces) {
  return train_from(corpus.size(), [&](std::size_t i) { return corpus[i]; }, cfg, traces);
}

NasalizationModel train_nasalization(const CorpusManifest& corpus, const TierNames& tiers,
                                     const TrainConfig& cfg, NasalizationTraces* traces) {
  return train_from(
      corpus.entries.size(), [&](std::size_t i) { return load_recording(corpus.entries[i], tiers); },
      cfg, traces);
}

double nasalization_score(const NasalizationModel& m, const Eigen::Ref<const Eigen::MatrixXd>& frames) {
  if (frames.rows() == 0) fail(Errc::kEmptySegment, "no frames to score");
  const Eigen::VectorXd llr = m.nas.log_likelihood_matrix(frames) - m.orl.log_likelihood_matrix(frames);
  return llr.sum() / static_cast<double>(frames.rows());
}

ScoreResult score_nasalization(const NasalizationModel& m, const AlignedUtterance& u,
                               const FrameMatrix& plp, const std::string& utterance_id) {
  const auto exported = nasalization_phones();
  ScoreResult out;
  for (const auto& phone : phone_instances(u)) {
    if (std::find(exported.begin(), exported.end(), phone.label) == exported.end()) continue;
    FrameRange r;
    try {
      r = segment_frames(phone.t_start, phone.t_end, plp);
    } catch (const Error& e) {
      if (e.code() != Errc::kEmptySegment) throw;
      ++out.skipped_empty;
      continue;
    }
    out.scores.push_back(PhoneScore{utterance_id, phone.label, ScoreKind::kNasalization,
                                    nasalization_score(m, plp.data.middleRows(r.first, r.count)),
                                    static_cast<int>(r.count)});
  }
  if (out.skipped_empty > 0)
    spdlog::debug("{}: {} phones too short to score", utterance_id, out.skipped_empty);
  return out;
}

ScoreResult score_nasalization(const NasalizationModel& m, const Recording& r) {
  return score_nasalization(m, r.alignment, plp_features(r.audio), r.utterance_id);
}

void save_nasalization_model(const NasalizationModel& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_model(m.nas, dir / "nas.napg");
  save_model(m.orl, dir / "orl.napg");
}

NasalizationModel load_nasalization_model(const std::filesystem::path& dir) {
  NasalizationModel m{load_model(dir / "nas.napg"), load_model(dir / "orl.napg")};
  if (m.nas.dim() != m.orl.dim())
    fail(Errc::kDimensionMismatch, dir.string() + ": NAS and ORL models differ in dimension");
  return m;
}

}  // namespace nap
