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
#include "nap/articulation.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "nap/error.h"
#include "nap/parallel.h"

namespace nap {
namespace {

bool modeled(const std::string& p) {
  return is_vowel(p) || is_nasal_consonant(p) || is_voiced_consonant(p) || is_unvoiced(p);
}

Eigen::MatrixXd stack(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index rows = 0, cols = blocks.empty() ? 0 : blocks.front().cols();
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
ArticulationTraining train_from(std::size_t n, Load&& load, const TrainConfig& cfg) {
  std::vector<PhoneFramePools> parts(n);
  parallel_for(n, cfg.n_threads, [&](std::size_t i) {
    const Recording r = load(i);
    parts[i] = articulation_frames(r.alignment, mfcc_features(r.audio));
  });
  PhoneFramePools merged;
  for (auto& p : parts)
    for (auto& [phone, blocks] : p)
      for (auto& b : blocks) merged[phone].push_back(std::move(b));
  std::map<std::string, Eigen::MatrixXd> pools;
  for (const auto& [phone, blocks] : merged) pools.emplace(phone, stack(blocks));
  return train_articulation(pools, cfg);
}

}  // namespace

std::vector<std::string> ArticulationModel::inventory() const {
  std::vector<std::string> out;
  for (const auto& [phone, gmm] : phone_gmms) out.push_back(phone);
  return out;
}

PhoneFramePools articulation_frames(const AlignedUtterance& u, const FrameMatrix& mfcc) {
  PhoneFramePools pools;
  for (const auto& phone : phone_instances(u)) {
    if (!modeled(phone.label)) continue;
    try {
      const FrameRange r = segment_frames(phone.t_start, phone.t_end, mfcc);
      pools[phone.label].push_back(mfcc.data.middleRows(r.first, r.count));
    } catch (const Error& e) {
      if (e.code() != Errc::kEmptySegment) throw;
    }
  }
  return pools;
}

ArticulationTraining train_articulation(const std::map<std::string, Eigen::MatrixXd>& pools,
                                        const TrainConfig& cfg) {
  const Eigen::Index need = 10 * static_cast<Eigen::Index>(cfg.n_components);
  ArticulationTraining out;
  std::vector<std::string> phones;
  for (const auto& [phone, frames] : pools) {
    if (frames.rows() < need) {
      spdlog::warn("articulation: dropping phone {} ({} frames, need {})", phone, frames.rows(), need);
      out.dropped.push_back(phone);
    } else {
      phones.push_back(phone);
    }
  }
  if (phones.empty()) fail(Errc::kInsufficientData, "no phone has enough frames to train");

  // Phone models are independent; EM inside each runs single-threaded.
  TrainConfig inner = cfg;
  inner.n_threads = 1;
  std::vector<GmmModel> models(phones.size());
  std::vector<TrainTrace> traces(phones.size());
  parallel_for(phones.size(), cfg.n_threads, [&](std::size_t i) {
    models[i] = train_em(pools.at(phones[i]), inner, &traces[i]);
  });
  for (std::size_t i = 0; i < phones.size(); ++i) {
    out.model.phone_gmms.emplace(phones[i], std::move(models[i]));
    out.traces.emplace(phones[i], std::move(traces[i]));
  }
  return out;
}

ArticulationTraining train_articulation(std::span<const Recording> corpus, const TrainConfig& cfg) {
  return train_from(corpus.size(), [&](std::size_t i) { return corpus[i]; }, cfg);
}

ArticulationTraining train_articulation(const CorpusManifest& corpus, const TierNames& tiers,
                                        const TrainConfig& cfg) {
  return train_from(
      corpus.entries.size(), [&](std::size_t i) { return load_recording(corpus.entries[i], tiers); },
      cfg);
}

double articulation_score(const ArticulationModel& m, const std::string& phone,
                          const Eigen::Ref<const Eigen::MatrixXd>& frames) {
  if (frames.rows() == 0) fail(Errc::kEmptySegment, "no frames to score");
  auto own = m.phone_gmms.find(phone);
  if (own == m.phone_gmms.end()) fail(Errc::kUnknownPhone, phone);
  double own_ll = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [label, gmm] : m.phone_gmms) {
    const double ll = gmm.log_likelihood_matrix(frames).sum();
    if (label == phone) own_ll = ll;
    best = std::max(best, ll);
  }
  return (own_ll - best) / static_cast<double>(frames.rows());
}

ScoreResult score_articulation(const ArticulationModel& m, const AlignedUtterance& u,
                               const FrameMatrix& mfcc, const std::string& utterance_id,
                               bool all_phones) {
  ScoreResult out;
  for (const auto& phone : phone_instances(u)) {
    if (!all_phones && !is_unvoiced(phone.label)) continue;
    if (!m.contains(phone.label)) {
      ++out.skipped_unknown;
      continue;
    }
    FrameRange r;
    try {
      r = segment_frames(phone.t_start, phone.t_end, mfcc);
    } catch (const Error& e) {
      if (e.code() != Errc::kEmptySegment) throw;
      ++out.skipped_empty;
      continue;
    }
    out.scores.push_back(PhoneScore{utterance_id, phone.label, ScoreKind::kArticulation,
                                    articulation_score(m, phone.label, mfcc.data.middleRows(r.first, r.count)),
                                    static_cast<int>(r.count)});
  }
  return out;
}

ScoreResult score_articulation(const ArticulationModel& m, const Recording& r, bool all_phones) {
  return score_articulation(m, r.alignment, mfcc_features(r.audio), r.utterance_id, all_phones);
}

void save_articulation_model(const ArticulationModel& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json inv;
  inv["frontend"] = "MFCC39";
  inv["dim"] = m.phone_gmms.empty() ? 0 : m.phone_gmms.begin()->second.dim();
  inv["phones"] = m.inventory();
  for (const auto& [phone, gmm] : m.phone_gmms) save_model(gmm, dir / (phone + ".napg"));
  std::ofstream out(dir / "inventory.json", std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + (dir / "inventory.json").string());
  out << inv.dump(2) << '\n';
}

ArticulationModel load_articulation_model(const std::filesystem::path& dir) {
  const auto path = dir / "inventory.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::kPathNotFound, path.string());
  nlohmann::json inv;
  try {
    inv = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kCorruptFile, path.string() + ": " + e.what());
  }
  if (!inv.contains("phones") || !inv["phones"].is_array())
    fail(Errc::kCorruptFile, path.string() + ": missing phone list");
  ArticulationModel m;
  int dim = -1;
  for (const auto& p : inv["phones"]) {
    const auto phone = p.get<std::string>();
    GmmModel g = load_model(dir / (phone + ".napg"));
    if (dim >= 0 && g.dim() != dim)
      fail(Errc::kDimensionMismatch, phone + ": model dim differs from the rest of the inventory");
    dim = g.dim();
    m.phone_gmms.emplace(phone, std::move(g));
  }
  if (m.phone_gmms.empty()) fail(Errc::kCorruptFile, path.string() + ": empty inventory");
  return m;
}

}  // namespace nap
