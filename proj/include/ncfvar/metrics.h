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

#ifndef NCFVAR_METRICS_H_
#define NCFVAR_METRICS_H_

// Evaluation over the original agent responses of a corpus (the manifest):
// corpus BLEU, micro Entity F1, and per-response / per-dialog accuracy.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ncfvar/corpus_io.h"
#include "ncfvar/dialog.h"

namespace ncfvar {

// Corpus BLEU in percent: n-gram orders 1-4, uniform weights, brevity
// penalty exp(1 - ref/hyp) when hyp < ref, lowercase whitespace
// tokenization, no smoothing. Zero when any order has no match.
double corpus_bleu(const PredictionSet &preds, const EvalManifest &manifest);

// Same computation on raw aligned string lists.
double corpus_bleu(const std::vector<std::string> &hypotheses,
                   const std::vector<std::string> &references);

enum class EntityScope { kGlobal, kDialog };

struct EntityF1Result {
  double f1 = 0.0;
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  std::string warning;  // set for the degenerate no-gold-entity case
};

// Micro-averaged over manifest entries.
EntityF1Result entity_f1(const PredictionSet &preds, const EvalManifest &manifest,
                         const DialogCorpus &corpus,
                         EntityScope scope = EntityScope::kGlobal);

// Core of entity_f1 for aligned gold/predicted entity sets.
EntityF1Result micro_f1(const std::vector<std::set<std::string>> &gold,
                        const std::vector<std::set<std::string>> &predicted);

struct Accuracy {
  double per_response = 0.0;
  double per_dialog = 0.0;
};

// Per-dialog accuracy ranges over the dialogs named by the manifest.
Accuracy response_accuracy(const PredictionSet &preds, const EvalManifest &manifest);

// Lowercase and collapse whitespace runs.
std::string normalize_response(std::string_view s);

struct EvalReport {
  double bleu = 0.0;             // percent
  double entity_f1 = 0.0;        // ratio
  double per_response_acc = 0.0;
  double per_dialog_acc = 0.0;
  size_t n_responses = 0;
  size_t n_dialogs = 0;
  std::string corpus_tag;
  std::string manifest_checksum;
  std::string predictions_checksum;
  std::string corpus_checksum;
  std::string bleu_variant = "corpus-bleu-4 uniform, brevity penalty, no smoothing, lowercase";
  std::string entity_f1_variant = "micro, global lexicon";
  std::string warning;
};

EvalReport evaluate(const PredictionSet &preds, const EvalManifest &manifest,
                    const DialogCorpus &corpus, EntityScope scope = EntityScope::kGlobal);

// "key: value" lines. Ratios are written as ratios.
std::string report_to_text(const EvalReport &r);
// Accepts report_to_text output. Missing metrics read as NaN.
EvalReport report_from_text(std::string_view text);
std::string report_to_json(const EvalReport &r);

struct ComparisonRow {
  std::string metric;
  double original = 0.0;   // display units (percent)
  double updated = 0.0;
  double delta = 0.0;      // updated - original
  double relative = 0.0;   // percent drop relative to original
};

std::vector<ComparisonRow> compare(const EvalReport &original, const EvalReport &updated);
std::string render_comparison(const std::vector<ComparisonRow> &rows);

}  // namespace ncfvar

#endif  // NCFVAR_METRICS_H_
