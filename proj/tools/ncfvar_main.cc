// Copyright 2026 The ncfvar Authors.
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

// ncfvar: inject conversation-management patterns into dialog test corpora
// and evaluate responses against the original agent turns.
//
// Exit codes: 0 ok, 1 usage, 2 parse or alignment, 3 plan shortfall,
// 4 any other failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncfvar/baseline.h"
#include "ncfvar/catalog.h"
#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/metrics.h"
#include "ncfvar/patterns.h"
#include "ncfvar/planner.h"
#include "ncfvar/util.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace ncfvar {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitPlan = 3;
constexpr int kExitOther = 4;

// Records what a subcommand read and wrote. Output paths are stored
// relative to the record so a run reproduced elsewhere yields the same
// bytes.
class RunRecord {
 public:
  explicit RunRecord(std::string subcommand) { j_["subcommand"] = std::move(subcommand); }

  void Set(const std::string &key, Json value) { j_[key] = std::move(value); }
  void Input(const std::string &role, const std::string &path, const std::string &bytes) {
    inputs_.push_back({role, path, Sha256Hex(bytes)});
  }
  void Output(const fs::path &path) { outputs_.push_back(path); }

  void Write(const fs::path &record_path) {
    Json outs = Json::array();
    fs::path base = record_path.parent_path();
    for (const fs::path &p : outputs_) {
      outs.push_back(p.lexically_relative(base.empty() ? fs::path(".") : base).generic_string());
    }
    // Paths are relative to the record so a moved run directory stays valid.
    fs::path abs_base = fs::absolute(base.empty() ? fs::path(".") : base);
    Json j = j_;
    for (const InputFile &in : inputs_) {
      j["inputs"][in.role] = {
          {"path", fs::absolute(in.path).lexically_relative(abs_base).generic_string()},
          {"sha256", in.sha256}};
    }
    j["tool_version"] = NCFVAR_VERSION;
    j["outputs"] = outs;
    WriteFile(record_path.string(), j.dump(2) + "\n");
  }

 private:
  struct InputFile {
    std::string role;
    fs::path path;
    std::string sha256;
  };
  Json j_ = Json::object();
  std::vector<InputFile> inputs_;
  std::vector<fs::path> outputs_;
};

std::string Slurp(const std::string &path) {
  if (!fs::exists(path)) throw UsageError("no such file: " + path);
  return ReadFile(path);
}

struct LoadedCorpus {
  DialogCorpus corpus;
  std::string bytes;
  std::string sidecar;
};

// bAbI injected-turn marks live in "<input>.origin" when present.
LoadedCorpus LoadCorpus(const std::string &format, const std::string &path,
                        const std::string &origin_path, RunRecord *record,
                        const std::string &role = "corpus") {
  LoadedCorpus out;
  SourceFormat fmt = ParseFormatName(format);
  out.bytes = Slurp(path);
  std::string sidecar_path = origin_path;
  if (sidecar_path.empty() && fmt == SourceFormat::kBabi && fs::exists(path + ".origin")) {
    sidecar_path = path + ".origin";
  }
  if (!sidecar_path.empty()) out.sidecar = Slurp(sidecar_path);
  out.corpus = parse_corpus(fmt, out.bytes, out.sidecar);
  if (record != nullptr) {
    record->Input(role, path, out.bytes);
    if (!sidecar_path.empty()) record->Input(role + "_origin", sidecar_path, out.sidecar);
  }
  return out;
}

void Emit(const std::string &output, const std::string &data) {
  if (output.empty()) {
    std::fwrite(data.data(), 1, data.size(), stdout);
  } else {
    WriteFile(output, data);
  }
}

const PhraseBank &LoadBank(const std::string &path, std::optional<PhraseBank> &storage,
                           RunRecord *record) {
  if (path.empty()) return PhraseBank::Default();
  std::string bytes = Slurp(path);
  storage = PhraseBank::FromJson(bytes);
  if (std::string gap = storage->CheckCoverage(); !gap.empty()) {
    throw UsageError("phrase bank incomplete: " + gap);
  }
  if (record != nullptr) record->Input("phrases", path, bytes);
  return *storage;
}

PlanConfig ResolveConfig(const std::string &preset, const std::string &config_path,
                         std::optional<uint64_t> seed, bool allow_shortfall, RunRecord *record) {
  if (preset.empty() == config_path.empty()) {
    throw UsageError("exactly one of --preset or --config is required");
  }
  PlanConfig cfg;
  if (!preset.empty()) {
    cfg = preset_config(preset);
    if (record != nullptr) record->Set("preset", preset);
  } else {
    std::string bytes = Slurp(config_path);
    cfg = config_from_json(bytes);
    if (record != nullptr) record->Input("config", config_path, bytes);
  }
  if (seed) cfg.seed = *seed;
  cfg.allow_shortfall = cfg.allow_shortfall || allow_shortfall;
  if (record != nullptr) {
    record->Set("seed", cfg.seed);
    record->Set("config", Json::parse(config_to_json(cfg)));
  }
  return cfg;
}

Json ShortfallJson(const std::vector<Shortfall> &shortfalls) {
  Json out = Json::array();
  for (const Shortfall &s : shortfalls) {
    out.push_back({{"pattern", s.pattern}, {"target", s.target}, {"eligible", s.eligible}});
  }
  return out;
}

void ReportShortfalls(const std::vector<Shortfall> &shortfalls) {
  for (const Shortfall &s : shortfalls) {
    std::cerr << "shortfall: " << s.pattern << " target " << s.target << ", eligible "
              << s.eligible << "\n";
  }
}

// Writes the corpus and its companions next to `output`.
void WriteInjected(const DialogCorpus &updated, const InjectionPlan &p, const fs::path &output,
                   RunRecord &record) {
  auto put = [&](const fs::path &path, const std::string &data) {
    WriteFile(path.string(), data);
    record.Output(path);
  };
  put(output, serialize(updated));
  put(output.string() + ".origin", origin_sidecar(updated));
  put(output.string() + ".manifest.tsv", manifest_to_tsv(export_manifest(updated)));
  put(output.string() + ".plan.tsv", plan_dump(p));
  record.Set("corpus_checksum", corpus_checksum(updated));
  record.Set("shortfalls", ShortfallJson(p.shortfalls));
  record.Write(output.string() + ".run.json");
}

struct InjectFlags {
  std::string format, input, origin, preset, config, output, phrases;
  std::optional<uint64_t> seed;
  bool allow_shortfall = false;
  int jobs = 1;
};

void AddInjectFlags(CLI::App *cmd, InjectFlags &f) {
  cmd->add_option("--format", f.format, "babi or smd")->required()->check(CLI::IsMember({"babi", "smd"}));
  cmd->add_option("--input", f.input, "Test corpus")->required();
  cmd->add_option("--origin", f.origin, "Origin sidecar for a bAbI input");
  cmd->add_option("--preset", f.preset, "smd-table1 or babi-table1");
  cmd->add_option("--config", f.config, "JSON plan configuration");
  cmd->add_option("--seed", f.seed, "Overrides the configured seed");
  cmd->add_option("--phrases", f.phrases, "Phrase bank JSON replacing the built-in one");
  cmd->add_flag("--allow-shortfall", f.allow_shortfall,
                "Record unmet targets instead of failing");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

int CmdInject(const InjectFlags &f) {
  RunRecord record("inject");
  record.Set("format", f.format);
  LoadedCorpus in = LoadCorpus(f.format, f.input, f.origin, &record);
  std::optional<PhraseBank> bank_storage;
  const PhraseBank &bank = LoadBank(f.phrases, bank_storage, &record);
  PlanConfig cfg = ResolveConfig(f.preset, f.config, f.seed, f.allow_shortfall, &record);
  InjectionPlan p = plan(in.corpus, cfg, bank);
  ReportShortfalls(p.shortfalls);
  DialogCorpus updated = execute(in.corpus, p, cfg.seed, f.jobs, bank);
  if (f.output.empty()) {
    Emit("", serialize(updated));
    return 0;
  }
  WriteInjected(updated, p, f.output, record);
  return 0;
}

int CmdAblate(const InjectFlags &f, const std::vector<std::string> &patterns, bool all,
              const std::string &output_dir) {
  if (all == !patterns.empty()) throw UsageError("give either --pattern or --all");
  if (output_dir.empty()) throw UsageError("--output-dir is required");
  std::optional<PhraseBank> bank_storage;
  const PhraseBank &bank = LoadBank(f.phrases, bank_storage, nullptr);
  LoadedCorpus in = LoadCorpus(f.format, f.input, f.origin, nullptr);
  std::vector<std::string> names;
  if (all) {
    for (const PatternRecipe &r : recipes()) {
      if (r.supports(in.corpus.source_format)) names.push_back(r.id.name);
    }
  } else {
    for (const std::string &p : patterns) names.push_back(recipe_for(p).id.name);
  }
  fs::create_directories(output_dir);
  std::string ext = in.corpus.source_format == SourceFormat::kSmd ? ".json" : ".txt";
  for (const std::string &name : names) {
    RunRecord record("ablate");
    record.Set("format", f.format);
    record.Set("pattern", name);
    LoadCorpus(f.format, f.input, f.origin, &record);
    if (!f.phrases.empty()) record.Input("phrases", f.phrases, Slurp(f.phrases));
    PlanConfig base = ResolveConfig(f.preset, f.config, f.seed, f.allow_shortfall, nullptr);
    PlanConfig cfg = ablation_config(base, in.corpus, name);
    record.Set("seed", cfg.seed);
    record.Set("config", Json::parse(config_to_json(cfg)));
    InjectionPlan p = plan(in.corpus, cfg, bank);
    ReportShortfalls(p.shortfalls);
    DialogCorpus updated = execute(in.corpus, p, cfg.seed, f.jobs, bank);
    WriteInjected(updated, p, fs::path(output_dir) / (name + ext), record);
    std::cerr << "wrote " << (fs::path(output_dir) / (name + ext)).string() << "\n";
  }
  return 0;
}

int CmdStats(const std::string &format, const std::string &input, const std::string &origin,
             const std::string &output) {
  LoadedCorpus in = LoadCorpus(format, input, origin, nullptr);
  Emit(output, render_stats(corpus_stats(in.corpus)));
  return 0;
}

struct EvalFlags {
  std::string predictions, manifest, corpus, format, origin, report, compare, output;
  std::string scope = "global";
  bool json = false;
};

int CmdEval(const EvalFlags &f) {
  EvalReport current;
  if (!f.report.empty()) {
    if (!f.predictions.empty()) throw UsageError("--report and --predictions are exclusive");
    current = report_from_text(Slurp(f.report));
  } else {
    if (f.predictions.empty() || f.corpus.empty() || f.format.empty()) {
      throw UsageError("--predictions, --corpus and --format are required (or --report)");
    }
    LoadedCorpus in = LoadCorpus(f.format, f.corpus, f.origin, nullptr);
    EvalManifest manifest = f.manifest.empty() ? export_manifest(in.corpus)
                                               : manifest_from_tsv(Slurp(f.manifest));
    PredictionSet preds = read_predictions(Slurp(f.predictions), manifest);
    EntityScope scope = f.scope == "dialog" ? EntityScope::kDialog : EntityScope::kGlobal;
    current = evaluate(preds, manifest, in.corpus, scope);
    if (!current.warning.empty()) std::cerr << "warning: " << current.warning << "\n";
  }
  std::string out = f.json ? report_to_json(current) : report_to_text(current);
  if (!f.compare.empty()) {
    EvalReport original = report_from_text(Slurp(f.compare));
    out += "\n" + render_comparison(compare(original, current));
  }
  Emit(f.output, out);
  return 0;
}

int CmdReview(const std::string &format, const std::string &input, const std::string &origin,
              double fraction, uint64_t seed, const std::string &output) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw UsageError("--fraction must be in (0, 1]");
  LoadedCorpus in = LoadCorpus(format, input, origin, nullptr);
  ReviewSheet sheet = sample_review(in.corpus, fraction, seed);
  Emit(output, render_review(in.corpus, sheet));
  return 0;
}

struct BaselineFlags {
  std::string corpus, format, origin, candidates, manifest, output;
  int jobs = 1;
};

int CmdBaseline(const BaselineFlags &f) {
  RunRecord record("baseline");
  LoadedCorpus in = LoadCorpus(f.format, f.corpus, f.origin, &record);
  std::optional<CandidateSet> cands;
  if (f.candidates.empty()) {
    cands = CandidateSet::FromCorpus(in.corpus);
    record.Set("candidates", "original agent responses of the corpus");
  } else {
    std::string bytes = Slurp(f.candidates);
    cands = CandidateSet::FromFile(bytes);
    record.Input("candidates", f.candidates, bytes);
  }
  EvalManifest manifest;
  if (f.manifest.empty()) {
    manifest = export_manifest(in.corpus);
  } else {
    std::string bytes = Slurp(f.manifest);
    manifest = manifest_from_tsv(bytes);
    record.Input("manifest", f.manifest, bytes);
  }
  PredictionSet preds = predict(in.corpus, manifest, *cands, f.jobs);
  if (f.output.empty()) {
    Emit("", write_predictions(preds));
    return 0;
  }
  WriteFile(f.output, write_predictions(preds));
  record.Output(f.output);
  record.Write(f.output + ".run.json");
  return 0;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kParse: return kExitParse;
    case ErrorKind::kPlan: return kExitPlan;
    case ErrorKind::kInvalid: return kExitOther;
  }
  return kExitOther;
}

int Main(int argc, char **argv) {
  CLI::App app{"Inject conversation-management patterns into dialog test corpora"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", std::string(NCFVAR_VERSION));

  InjectFlags inject;
  CLI::App *inject_cmd = app.add_subcommand("inject", "Plan and apply pattern injections");
  AddInjectFlags(inject_cmd, inject);
  inject_cmd->add_option("--output", inject.output, "Updated corpus (stdout when absent)");

  InjectFlags ablate;
  std::vector<std::string> ablate_patterns;
  bool ablate_all = false;
  std::string ablate_dir;
  CLI::App *ablate_cmd = app.add_subcommand("ablate", "One updated corpus per pattern");
  AddInjectFlags(ablate_cmd, ablate);
  ablate_cmd->add_option("--pattern", ablate_patterns, "Pattern name or code (repeatable)");
  ablate_cmd->add_flag("--all", ablate_all, "Every pattern applicable to the format");
  ablate_cmd->add_option("--output-dir", ablate_dir, "Directory for the ablation corpora");

  std::string stats_format, stats_input, stats_origin, stats_output;
  CLI::App *stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("--format", stats_format)->required()->check(CLI::IsMember({"babi", "smd"}));
  stats_cmd->add_option("--input", stats_input)->required();
  stats_cmd->add_option("--origin", stats_origin);
  stats_cmd->add_option("--output", stats_output);

  EvalFlags eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Score predictions against the manifest");
  eval_cmd->add_option("--predictions", eval.predictions, "One response per manifest entry");
  eval_cmd->add_option("--manifest", eval.manifest, "Manifest TSV (default: from --corpus)");
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus the manifest belongs to");
  eval_cmd->add_option("--format", eval.format)->check(CLI::IsMember({"babi", "smd"}));
  eval_cmd->add_option("--origin", eval.origin);
  eval_cmd->add_option("--entity-scope", eval.scope)->check(CLI::IsMember({"global", "dialog"}));
  eval_cmd->add_option("--report", eval.report, "Use a saved report instead of scoring");
  eval_cmd->add_option("--compare", eval.compare, "Report of the original test set");
  eval_cmd->add_flag("--json", eval.json, "JSON report");
  eval_cmd->add_option("--output", eval.output);

  std::string review_format, review_input, review_origin, review_output;
  double review_fraction = 0.2;
  uint64_t review_seed = 1;
  CLI::App *review_cmd = app.add_subcommand("review", "Sample updated dialogs for manual review");
  review_cmd->add_option("--format", review_format)->required()->check(CLI::IsMember({"babi", "smd"}));
  review_cmd->add_option("--input", review_input)->required();
  review_cmd->add_option("--origin", review_origin);
  review_cmd->add_option("--fraction", review_fraction);
  review_cmd->add_option("--seed", review_seed);
  review_cmd->add_option("--output", review_output);

  BaselineFlags base;
  CLI::App *base_cmd = app.add_subcommand("baseline", "TF-IDF retrieval predictions");
  base_cmd->add_option("--corpus", base.corpus)->required();
  base_cmd->add_option("--format", base.format)->required()->check(CLI::IsMember({"babi", "smd"}));
  base_cmd->add_option("--origin", base.origin);
  base_cmd->add_option("--candidates", base.candidates,
                       "Candidate file (default: original agent responses of the corpus)");
  base_cmd->add_option("--manifest", base.manifest);
  base_cmd->add_option("--out,--output", base.output);
  base_cmd->add_option("--jobs", base.jobs)->check(CLI::PositiveNumber);

  CLI::App *patterns_cmd = app.add_subcommand("patterns", "Print the pattern catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (inject_cmd->parsed()) return CmdInject(inject);
    if (ablate_cmd->parsed()) return CmdAblate(ablate, ablate_patterns, ablate_all, ablate_dir);
    if (stats_cmd->parsed()) return CmdStats(stats_format, stats_input, stats_origin, stats_output);
    if (eval_cmd->parsed()) return CmdEval(eval);
    if (review_cmd->parsed()) {
      return CmdReview(review_format, review_input, review_origin, review_fraction, review_seed,
                       review_output);
    }
    if (base_cmd->parsed()) return CmdBaseline(base);
    if (patterns_cmd->parsed()) {
      Emit("", catalog_table());
      return 0;
    }
  } catch (const Error &e) {
    std::cerr << "ncfvar: " << e.what() << "\n";
    if (e.kind() == ErrorKind::kUsage) std::cerr << app.help();
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "ncfvar: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace ncfvar

int main(int argc, char **argv) { return ncfvar::Main(argc, argv); }
