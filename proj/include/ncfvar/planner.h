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

#ifndef NCFVAR_PLANNER_H_
#define NCFVAR_PLANNER_H_

// Seeded choice of which dialogs receive which pattern, execution of the
// resulting plan, single-pattern ablation sets, review sampling, and corpus
// statistics.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ncfvar/dialog.h"
#include "ncfvar/patterns.h"

namespace ncfvar {

struct PlanConfig {
  std::map<std::string, int> targets;       // pattern name -> dialogs
  uint64_t seed = 1;
  int max_patterns_per_dialog = 4;
  std::vector<std::string> pattern_order;   // empty: recipe order
  // Optional overlap targets: element k-1 is the wanted number of dialogs
  // carrying at least k patterns.
  std::vector<int> histogram_targets;
  bool allow_shortfall = false;

  // Deterministic text form used for digests and run records.
  std::string Canonical() const;
};

// Built-in configurations: "smd-table1" and "babi-table1".
PlanConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

// JSON object with keys targets, seed, max_patterns_per_dialog,
// pattern_order, histogram_targets. Missing keys keep their defaults.
PlanConfig config_from_json(std::string_view text);
std::string config_to_json(const PlanConfig &cfg);

struct Assignment {
  std::string dialog_id;
  PatternId pattern;
  Anchor anchor;  // relative to the dialog after earlier assignments
};

struct Shortfall {
  std::string pattern;
  int target = 0;
  int eligible = 0;
};

struct InjectionPlan {
  std::vector<Assignment> assignments;
  std::string corpus_checksum;
  std::string config_digest;
  std::vector<Shortfall> shortfalls;  // only under allow_shortfall
};

// Throws PlanError listing every pattern whose eligible dialogs fall short
// of its target, unless cfg.allow_shortfall is set.
InjectionPlan plan(const DialogCorpus &corpus, const PlanConfig &cfg,
                   const PhraseBank &bank = PhraseBank::Default());

// Applies every assignment in plan order. `jobs` worker threads split the
// dialogs; output does not depend on it.
DialogCorpus execute(const DialogCorpus &corpus, const InjectionPlan &plan, uint64_t seed,
                     int jobs = 1, const PhraseBank &bank = PhraseBank::Default());

// cfg with every target zeroed except `pattern`, and no overlap targets.
PlanConfig ablation_config(const PlanConfig &cfg, const DialogCorpus &corpus,
                           std::string_view pattern);
DialogCorpus ablate(const DialogCorpus &corpus, const PlanConfig &cfg, std::string_view pattern,
                    const PhraseBank &bank = PhraseBank::Default());

// dialog_id<TAB>pattern<TAB>turn_index per assignment.
std::string plan_dump(const InjectionPlan &plan);

// k -> number of dialogs carrying at least k patterns, for k = 1..K where
// K = max(5, largest count + 1).
std::map<int, int> overlap_histogram(const DialogCorpus &corpus);

struct ReviewSheet {
  std::vector<std::string> dialog_ids;  // corpus order
  double fraction = 0.2;
  uint64_t seed = 0;
  size_t updated_dialogs = 0;
};

ReviewSheet sample_review(const DialogCorpus &updated, double fraction, uint64_t seed);

// Markdown with injected turns prefixed "[+<pattern>]".
std::string render_review(const DialogCorpus &updated, const ReviewSheet &sheet);

struct CorpusStats {
  SourceFormat format = SourceFormat::kBabi;
  size_t dialogs = 0;
  size_t utterances = 0;
  double mean_utterances = 0.0;
  std::vector<std::pair<std::string, int>> per_pattern;  // recipe order
  std::map<int, int> histogram;
  size_t lexicon_size = 0;
  std::string checksum;
};

CorpusStats corpus_stats(const DialogCorpus &corpus);
std::string render_stats(const CorpusStats &s);

}  // namespace ncfvar

#endif  // NCFVAR_PLANNER_H_
