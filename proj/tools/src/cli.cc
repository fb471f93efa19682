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
#include "nap_tools/cli.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "nap/alignment.h"
#include "nap/articulation.h"
#include "nap/csv.h"
#include "nap/error.h"
#include "nap/evaluation.h"
#include "nap/features.h"
#include "nap/nasalization.h"
#include "nap/parallel.h"
#include "nap_tools/hash.h"
#include "nap_tools/synth.h"

#ifndef NAP_VERSION
#define NAP_VERSION "0.0.0"
#endif

namespace nap::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string manifest;
  std::string ratings;
  std::string models;
  std::string out;
  std::string table;
  std::string manual;
  std::string features;
  std::string scheme = "loso";
  std::string held_out;
  std::string words_tier = "words";
  std::string phones_tier = "phones";
  std::uint64_t seed = 0;
  double lambda = 1.0;
  bool lambda_sweep = false;
  bool no_impute = false;
  int workers = 1;
  int components = 16;
  int max_iters = 100;
  double tol = 1e-6;
  int max_features = 0;
  int speakers = 20;
  int utterances = 3;
  int words = 8;
  bool healthy = false;
};

std::shared_ptr<spdlog::logger> logger() {
  if (auto l = spdlog::get("nap")) return l;
  return spdlog::stderr_color_mt("nap");
}

// ---- validation -----------------------------------------------------------

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

void require_file(const std::string& path, const char* flag) {
  require(path, flag);
  if (!fs::is_regular_file(path)) throw UsageError(std::string(flag) + ": no such file: " + path);
}

void require_dir(const std::string& path, const char* flag) {
  require(path, flag);
  if (!fs::is_directory(path)) throw UsageError(std::string(flag) + ": no such directory: " + path);
}

// Runs a loader during preflight; library errors become usage errors.
template <class Fn>
auto preflight(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> resolve_features(const std::string& spec) {
  if (spec == "paper-top6" || spec == "all") return feature_preset(spec);
  std::vector<std::string> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    ScoreKind kind;
    std::string phone;
    if (!parse_feature_name(item, kind, phone))
      throw UsageError("--features: expected paper-top6, all, or a comma list like N(AA),AP(T); got '" + item + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("--features is empty");
  return out;
}

TrainConfig train_config(const Options& o) {
  TrainConfig cfg;
  cfg.n_components = o.components;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.n_threads = o.workers;
  return cfg;
}

TierNames tiers(const Options& o) { return {o.words_tier, o.phones_tier}; }

// ---- provenance -----------------------------------------------------------

class Provenance {
 public:
  Provenance(std::string command, const CLI::App& sub, const Options& o) {
    doc_["tool"] = "nap";
    doc_["version"] = NAP_VERSION;
    doc_["command"] = std::move(command);
    doc_["seed"] = o.seed;
    json cfg = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "config") continue;
      const auto& res = opt->results();
      if (opt->get_type_size_max() == 0)
        cfg[name] = opt->count() > 0;
      else
        cfg[name] = res.empty() ? opt->get_default_str() : res.back();
    }
    doc_["config"] = std::move(cfg);
    doc_["inputs"] = json::array();
  }

  void file(const std::string& role, const fs::path& path) {
    doc_["inputs"].push_back({{"role", role}, {"path", path.generic_string()}, {"sha256", sha256_file(path)}});
  }

  void manifest(const fs::path& path, const CorpusManifest& m) {
    file("manifest", path);
    json utts = json::array();
    for (const auto& e : m.entries)
      utts.push_back({{"utterance_id", e.utterance_id},
                      {"wav_sha256", sha256_file(e.wav_path)},
                      {"textgrid_sha256", sha256_file(e.textgrid_path)}});
    doc_["utterances"] = std::move(utts);
  }

  void directory(const std::string& role, const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().filename() != "provenance.json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      doc_["inputs"].push_back({{"role", role},
                                {"path", fs::relative(f, dir).generic_string()},
                                {"sha256", sha256_file(f)}});
    }
  }

  json& extra() { return doc_["details"]; }

  void write(const fs::path& dir) const {
    std::ofstream out(dir / "provenance.json", std::ios::binary);
    if (!out) fail(Errc::kIo, "cannot write " + (dir / "provenance.json").string());
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

fs::path make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::kIo, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::kIo, "cannot write " + path.string());
  return out;
}

void write_trace_rows(std::ofstream& out, const std::string& name, const TrainTrace& t) {
  for (std::size_t i = 0; i < t.mean_log_likelihood.size(); ++i) {
    const bool reseeded = std::find(t.reseed_iterations.begin(), t.reseed_iterations.end(), static_cast<int>(i)) !=
                          t.reseed_iterations.end();
    out << name << ',' << i << ',' << csv::format_double(t.mean_log_likelihood[i]) << ',' << (reseeded ? 1 : 0)
        << '\n';
  }
}

// ---- commands -------------------------------------------------------------

int cmd_train_nasal(const Options& o, const CLI::App& sub) {
  require_file(o.manifest, "--manifest");
  require(o.out, "--out");
  const auto corpus = preflight([&] { return load_manifest(o.manifest); });

  NasalizationTraces traces;
  const NasalizationModel model = train_nasalization(corpus, tiers(o), train_config(o), &traces);
  const fs::path dir = make_out_dir(fs::path(o.out) / "nasal");
  save_nasalization_model(model, dir);
  {
    auto log = open_out(dir / "training_log.csv");
    log << "model,iteration,mean_log_likelihood,reseeded\n";
    write_trace_rows(log, "NAS", traces.nas);
    write_trace_rows(log, "ORL", traces.orl);
  }
  Provenance p("train-nasal", sub, o);
  p.manifest(o.manifest, corpus);
  p.extra() = {{"nas_iterations", traces.nas.iterations}, {"nas_converged", traces.nas.converged},
               {"orl_iterations", traces.orl.iterations}, {"orl_converged", traces.orl.converged}};
  p.write(dir);
  logger()->info("wrote NAS/ORL models to {}", dir.string());
  return kExitOk;
}

int cmd_train_artic(const Options& o, const CLI::App& sub) {
  require_file(o.manifest, "--manifest");
  require(o.out, "--out");
  const auto corpus = preflight([&] { return load_manifest(o.manifest); });

  const ArticulationTraining trained = train_articulation(corpus, tiers(o), train_config(o));
  const fs::path dir = make_out_dir(fs::path(o.out) / "artic");
  save_articulation_model(trained.model, dir);
  {
    auto log = open_out(dir / "training_log.csv");
    log << "model,iteration,mean_log_likelihood,reseeded\n";
    for (const auto& [phone, trace] : trained.traces) write_trace_rows(log, phone, trace);
  }
  Provenance p("train-artic", sub, o);
  p.manifest(o.manifest, corpus);
  p.extra() = {{"phones", trained.model.inventory()}, {"dropped", trained.dropped}};
  p.write(dir);
  logger()->info("wrote {} phone models to {}", trained.model.phone_gmms.size(), dir.string());
  return kExitOk;
}

struct UtteranceResult {
  std::vector<PhoneScore> nasal;
  std::vector<PhoneScore> artic;
  std::optional<std::string> error;
};

int cmd_extract(const Options& o, const CLI::App& sub) {
  require_file(o.manifest, "--manifest");
  require_dir(o.models, "--models");
  require(o.out, "--out");
  const auto names = resolve_features(o.features.empty() ? "all" : o.features);
  const auto corpus = preflight([&] { return load_manifest(o.manifest); });
  const fs::path models(o.models);
  const auto nasal = preflight([&] { return load_nasalization_model(models / "nasal"); });
  const auto artic = preflight([&] { return load_articulation_model(models / "artic"); });

  std::vector<UtteranceResult> results(corpus.entries.size());
  parallel_for(results.size(), o.workers, [&](std::size_t i) {
    const ManifestEntry& e = corpus.entries[i];
    try {
      const Recording r = load_recording(e, tiers(o));
      results[i].nasal = score_nasalization(nasal, r).scores;
      results[i].artic = score_articulation(artic, r).scores;
    } catch (const Error& err) {
      results[i] = {};
      results[i].error = err.what();
    }
  });

  std::vector<PhoneScore> all_nasal, all_artic;
  std::map<std::string, std::vector<PhoneScore>> by_speaker;
  json skipped = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ManifestEntry& e = corpus.entries[i];
    if (results[i].error) {
      logger()->warn("skipping {}: {}", e.utterance_id, *results[i].error);
      skipped.push_back({{"utterance_id", e.utterance_id}, {"error", *results[i].error}});
      continue;
    }
    auto& mine = by_speaker[e.speaker_id];
    for (auto* src : {&results[i].nasal, &results[i].artic}) mine.insert(mine.end(), src->begin(), src->end());
    all_nasal.insert(all_nasal.end(), results[i].nasal.begin(), results[i].nasal.end());
    all_artic.insert(all_artic.end(), results[i].artic.begin(), results[i].artic.end());
  }

  std::vector<SpeakerFeatureVector> vectors;
  for (const auto& speaker : corpus.speakers()) {
    const auto it = by_speaker.find(speaker);
    if (it == by_speaker.end()) {
      logger()->warn("speaker {} has no usable utterances; omitted from features.csv", speaker);
      continue;
    }
    vectors.push_back(aggregate(it->second, speaker));
  }
  if (vectors.empty()) fail(Errc::kInsufficientData, "no utterance could be scored");
  const DesignMatrix table = to_design_matrix(vectors, names, MissingPolicy::kKeep);

  const fs::path dir = make_out_dir(o.out);
  write_scores_csv(all_nasal, dir / "nasalization_scores.csv");
  write_scores_csv(all_artic, dir / "articulation_scores.csv");
  write_feature_table(table, dir / "features.csv");
  {
    auto cov = open_out(dir / "coverage.csv");
    cov << "speaker_id";
    for (const auto& n : names) cov << ',' << n;
    cov << '\n';
    for (const auto& v : vectors) {
      cov << v.speaker_id;
      for (const auto& n : names) cov << ',' << v.coverage(n);
      cov << '\n';
    }
  }
  Provenance p("extract", sub, o);
  p.manifest(o.manifest, corpus);
  p.directory("model", models);
  p.extra() = {{"skipped_utterances", skipped}};
  p.write(dir);
  if (!skipped.empty()) logger()->warn("{} utterance(s) skipped", skipped.size());
  std::cerr << "extract: " << vectors.size() << " speakers, " << skipped.size() << " warning(s)\n";
  return kExitOk;
}

struct EvalInputs {
  Dataset data;
  std::optional<CorpusManifest> manifest;
};

EvalInputs load_eval_inputs(const Options& o, const std::string& default_features, bool need_manifest) {
  require_file(o.table, "--table");
  require_file(o.ratings, "--ratings");
  require(o.out, "--out");
  if (need_manifest) require_file(o.manifest, "--manifest");
  if (o.lambda < 0.0) throw UsageError("--lambda must be >= 0");
  const auto names = resolve_features(o.features.empty() ? default_features : o.features);
  EvalInputs in;
  preflight([&] {
    const DesignMatrix full = read_feature_table(o.table);
    const DesignMatrix table = select_features(full, names);
    const RatingsTable ratings = load_ratings(o.ratings);
    if (!o.manifest.empty()) in.manifest = load_manifest(o.manifest);
    JoinResult joined = join_ratings(table, ratings, in.manifest ? &*in.manifest : nullptr);
    for (const auto& id : joined.unrated) logger()->warn("speaker {} has features but no rating", id);
    for (const auto& id : joined.unfeatured) logger()->warn("speaker {} has a rating but no features", id);
    in.data = std::move(joined.data);
    return 0;
  });
  // Columns never observed (phones absent from the stimuli) are dropped.
  std::vector<std::string> kept;
  for (Eigen::Index j = 0; j < in.data.X.cols(); ++j) {
    const auto& name = in.data.feature_names[static_cast<std::size_t>(j)];
    if (in.data.X.col(j).array().isNaN().all())
      logger()->warn("dropping {}: no speaker has an observation", name);
    else
      kept.push_back(name);
  }
  if (kept.empty()) throw UsageError("no requested feature has any observation");
  if (kept.size() != in.data.feature_names.size()) in.data = select_columns(in.data, kept);
  return in;
}


EvalOptions eval_options(const Options& o) {
  EvalOptions opts;
  opts.lambda = o.lambda;
  if (o.lambda_sweep) opts.lambda_grid = default_lambda_grid();
  opts.impute = !o.no_impute;
  opts.n_threads = o.workers;
  return opts;
}

int cmd_evaluate(const Options& o, const CLI::App& sub) {
  if (o.scheme != "loso" && o.scheme != "lodo") throw UsageError("--scheme must be loso or lodo");
  const bool lodo = o.scheme == "lodo";
  std::optional<Disease> held_out;
  if (lodo) {
    if (o.held_out.empty()) throw UsageError("--scheme lodo requires --held-out <disease>");
    held_out = parse_disease(o.held_out);
    if (!held_out) throw UsageError("--held-out: unknown disease '" + o.held_out + "'");
  } else if (!o.held_out.empty()) {
    throw UsageError("--held-out is only valid with --scheme lodo");
  }
  const EvalInputs in = load_eval_inputs(o, "paper-top6", lodo);
  const EvalReport report =
      lodo ? lodo_evaluate(in.data, *held_out, eval_options(o)) : loso_evaluate(in.data, eval_options(o));

  const fs::path dir = make_out_dir(o.out);
  write_report_json(report, dir / "report.json");
  write_predictions_csv(report, dir / "predictions.csv");
  Provenance p("evaluate", sub, o);
  p.file("table", o.table);
  p.file("ratings", o.ratings);
  if (!o.manifest.empty()) p.file("manifest", o.manifest);
  p.write(dir);
  std::cerr << "evaluate: " << o.scheme << " n=" << report.predictions.size()
            << " MAE=" << report.metrics.mae << " PCC=" << report.metrics.pcc
            << (report.metrics.pcc_defined ? "" : " (undefined)") << '\n';
  return kExitOk;
}

int cmd_select(const Options& o, const CLI::App& sub) {
  const EvalInputs in = load_eval_inputs(o, "all", false);
  if (in.data.X.cols() < 2) throw UsageError("select needs at least 2 candidate features");
  EvalOptions opts = eval_options(o);
  opts.lambda_grid.clear();
  const SelectionResult sel = forward_select(in.data, opts, o.max_features);

  const fs::path dir = make_out_dir(o.out);
  write_selection_csv(sel, dir / "selection_trace.csv");
  Provenance p("select", sub, o);
  p.file("table", o.table);
  p.file("ratings", o.ratings);
  p.extra() = {{"selected", sel.selected}};
  p.write(dir);
  std::cerr << "select: " << sel.selected.size() << " feature(s) selected\n";
  return kExitOk;
}

struct SpeakerAudit {
  std::size_t utterances = 0;
  std::size_t phones = 0;
  std::size_t unmatched = 0;
  double total_error = 0.0;
};

int cmd_audit_alignment(const Options& o, const CLI::App& sub) {
  require_file(o.manifest, "--manifest");
  require_dir(o.manual, "--manual");
  require(o.out, "--out");
  const auto corpus = preflight([&] { return load_manifest(o.manifest); });
  std::optional<RatingsTable> ratings;
  if (!o.ratings.empty()) {
    require_file(o.ratings, "--ratings");
    ratings = preflight([&] { return load_ratings(o.ratings); });
  }

  std::map<std::string, SpeakerAudit> audits;
  std::size_t skipped = 0;
  for (const auto& e : corpus.entries) {
    const fs::path manual = fs::path(o.manual) / e.textgrid_path.filename();
    try {
      if (!fs::exists(manual)) fail(Errc::kPathNotFound, manual.string());
      const AlignmentAudit a = audit_alignment(parse_textgrid(e.textgrid_path, tiers(o)), parse_textgrid(manual, tiers(o)));
      SpeakerAudit& s = audits[e.speaker_id];
      ++s.utterances;
      s.phones += a.n_phones;
      s.unmatched += a.n_unmatched;
      s.total_error += a.total_error;
    } catch (const Error& err) {
      logger()->warn("skipping {}: {}", e.utterance_id, err.what());
      ++skipped;
    }
  }

  const fs::path dir = make_out_dir(o.out);
  const bool with_ap = ratings && ratings->has_articulatory_precision();
  {
    auto out = open_out(dir / "alignment_audit.csv");
    out << "speaker_id,n_utterances,n_phones,n_unmatched,mean_error";
    if (with_ap) out << ",articulatory_precision";
    out << '\n';
    for (const auto& speaker : corpus.speakers()) {
      auto it = audits.find(speaker);
      if (it == audits.end()) continue;
      const SpeakerAudit& s = it->second;
      const double mean = s.phones ? s.total_error / static_cast<double>(s.phones) : 0.0;
      out << csv::quote_if_needed(speaker) << ',' << s.utterances << ',' << s.phones << ',' << s.unmatched << ','
          << csv::format_double(mean);
      if (with_ap) {
        const Rating* r = ratings->find(speaker);
        out << ',' << csv::format_double(r && r->articulatory_precision ? *r->articulatory_precision
                                                                        : std::numeric_limits<double>::quiet_NaN());
      }
      out << '\n';
    }
  }
  Provenance p("audit-alignment", sub, o);
  p.manifest(o.manifest, corpus);
  p.directory("manual", o.manual);
  if (ratings) p.file("ratings", o.ratings);
  p.extra() = {{"skipped_utterances", skipped}};
  p.write(dir);
  return kExitOk;
}

int cmd_synth(const Options& o, const CLI::App& sub) {
  require(o.out, "--out");
  if (o.speakers < 1 || o.utterances < 1 || o.words < 1)
    throw UsageError("--speakers, --utterances and --words must be positive");
  const auto speakers =
      o.healthy ? synth::healthy_speakers(o.speakers, o.utterances) : synth::clinical_speakers(o.speakers, o.utterances);
  synth::CorpusOptions opts;
  opts.seed = o.seed;
  opts.words_per_utterance = o.words;
  const fs::path dir = make_out_dir(o.out);
  synth::write_corpus(dir, speakers, opts);
  Provenance p("synth", sub, o);
  p.write(dir);
  return kExitOk;
}

// ---- argument plumbing ----------------------------------------------------

std::string json_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return csv::format_double(v.get<double>());
  throw UsageError("config key '" + key + "' must be a string, number or boolean");
}

// Config keys become flags placed before the command-line flags, so the
// command line wins under the take-last policy.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: no such file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("--config: " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("--config: top level must be an object");
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (!opt || key == "config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
      continue;
    }
    out.push_back(flag);
    out.push_back(json_scalar(value, key));
  }
  return out;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  std::optional<std::string> found;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) found = args[i + 1];
    if (args[i].starts_with("--config=")) found = args[i].substr(9);
  }
  return found;
}

struct Command {
  const char* name;
  const char* help;
  int (*fn)(const Options&, const CLI::App&);
};

constexpr Command kCommands[] = {
    {"train-nasal", "Train NAS/ORL GMMs on a healthy corpus", cmd_train_nasal},
    {"train-artic", "Train per-phone articulation GMMs", cmd_train_artic},
    {"extract", "Score a corpus and write per-speaker feature tables", cmd_extract},
    {"evaluate", "Ridge regression with LOSO or LODO cross-validation", cmd_evaluate},
    {"select", "Greedy forward feature selection", cmd_select},
    {"audit-alignment", "Compare automatic and manual alignments", cmd_audit_alignment},
    {"synth", "Write a synthetic WAV+TextGrid corpus", cmd_synth},
};

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--config", o.config, "JSON file whose keys mirror the flags");
  sub.add_option("--out", o.out, "Output directory");
  sub.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sub.add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
}

void add_tiers(CLI::App& sub, Options& o) {
  sub.add_option("--words-tier", o.words_tier, "Word tier name")->capture_default_str();
  sub.add_option("--phones-tier", o.phones_tier, "Phone tier name")->capture_default_str();
}

void add_training(CLI::App& sub, Options& o) {
  sub.add_option("--manifest", o.manifest, "Healthy training manifest CSV");
  sub.add_option("--components", o.components, "Mixture components")->check(CLI::Range(1, 4096))->capture_default_str();
  sub.add_option("--max-iters", o.max_iters, "EM iteration cap")->check(CLI::Range(1, 100000))->capture_default_str();
  sub.add_option("--tol", o.tol, "Relative log-likelihood tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_tiers(sub, o);
}

void add_regression(CLI::App& sub, Options& o) {
  sub.add_option("--table", o.table, "Feature table CSV from extract");
  sub.add_option("--ratings", o.ratings, "Ratings CSV");
  sub.add_option("--lambda", o.lambda, "Ridge penalty on standardized features")->capture_default_str();
  sub.add_option("--features", o.features, "paper-top6, all, or a comma-separated list");
  sub.add_flag("--no-impute", o.no_impute, "Fail on missing features instead of fold-mean imputation");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Hypernasality and articulation feature pipeline", "nap"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", NAP_VERSION);

  std::map<const CLI::App*, const Command*> dispatch;
  for (const Command& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(*sub, o);
    dispatch[sub] = &c;
    const std::string name = c.name;
    if (name == "train-nasal" || name == "train-artic") add_training(*sub, o);
    if (name == "extract") {
      sub->add_option("--manifest", o.manifest, "Clinical manifest CSV");
      sub->add_option("--models", o.models, "Directory holding nasal/ and artic/");
      sub->add_option("--features", o.features, "Columns of features.csv (default all)");
      add_tiers(*sub, o);
    }
    if (name == "evaluate") {
      add_regression(*sub, o);
      sub->add_option("--manifest", o.manifest, "Manifest with disease labels (required for lodo)");
      sub->add_option("--scheme", o.scheme, "loso or lodo")->capture_default_str();
      sub->add_option("--held-out", o.held_out, "Disease held out under lodo");
      sub->add_flag("--lambda-sweep", o.lambda_sweep, "Choose lambda per fold by inner LOSO");
    }
    if (name == "select") {
      add_regression(*sub, o);
      sub->add_option("--max-features", o.max_features, "Stop after this many features (0 = no limit)")
          ->capture_default_str();
    }
    if (name == "audit-alignment") {
      sub->add_option("--manifest", o.manifest, "Manifest of automatic alignments");
      sub->add_option("--manual", o.manual, "Directory of manual TextGrids with matching file names");
      sub->add_option("--ratings", o.ratings, "Ratings CSV to join articulatory precision");
      add_tiers(*sub, o);
    }
    if (name == "synth") {
      sub->add_option("--speakers", o.speakers, "Number of speakers")->capture_default_str();
      sub->add_option("--utterances", o.utterances, "Utterances per speaker")->capture_default_str();
      sub->add_option("--words", o.words, "Words per utterance")->capture_default_str();
      sub->add_flag("--healthy", o.healthy, "All speakers at severity 0");
    }
  }

  auto log = logger();
  try {
    std::vector<std::string> argv = args;
    if (!argv.empty()) {
      if (auto cfg = find_config(argv)) {
        const CLI::App* sub = nullptr;
        for (const auto& [s, c] : dispatch)
          if (argv[0] == c->name) sub = s;
        if (sub) {
          auto tokens = config_tokens(*cfg, *sub);
          argv.insert(argv.begin() + 1, tokens.begin(), tokens.end());
        }
      }
    }
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "nap: " << e.what() << '\n';
    return kExitUsage;
  }

  for (const auto& [sub, cmd] : dispatch) {
    if (!sub->parsed()) continue;
    try {
      return cmd->fn(o, *sub);
    } catch (const UsageError& e) {
      std::cerr << "nap " << cmd->name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const Error& e) {
      std::cerr << "nap " << cmd->name << ": " << e.what() << '\n';
      return kExitFailure;
    } catch (const std::exception& e) {
      std::cerr << "nap " << cmd->name << ": " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitUsage;
}

}  // namespace nap::cli
