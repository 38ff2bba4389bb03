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

#include "ncfvar/metrics.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "ncfvar/entity_matcher.h"
#include "ncfvar/error.h"
#include "ncfvar/util.h"

namespace ncfvar {
namespace {

void CheckAligned(const PredictionSet &preds, const EvalManifest &manifest) {
  if (preds.responses.size() != manifest.entries.size()) {
    throw ParseError("expected " + std::to_string(manifest.entries.size()) + " predictions, got " +
                     std::to_string(preds.responses.size()));
  }
  if (preds.manifest_digest != manifest_digest(manifest)) {
    throw ParseError("predictions were aligned to a different manifest (digest mismatch)");
  }
}

std::vector<std::string> BleuTokens(std::string_view s) { return SplitWhitespace(ToLower(s)); }

std::string Fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

double corpus_bleu(const std::vector<std::string> &hypotheses,
                   const std::vector<std::string> &references) {
  if (hypotheses.size() != references.size()) {
    throw InvalidError("corpus_bleu: hypotheses and references differ in length");
  }
  constexpr int kMaxOrder = 4;
  long matches[kMaxOrder] = {0, 0, 0, 0};
  long totals[kMaxOrder] = {0, 0, 0, 0};
  long hyp_len = 0, ref_len = 0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    std::vector<std::string> hyp = BleuTokens(hypotheses[i]);
    std::vector<std::string> ref = BleuTokens(references[i]);
    hyp_len += static_cast<long>(hyp.size());
    ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      std::unordered_map<std::string, long> ref_counts;
      for (size_t j = 0; j + static_cast<size_t>(n) <= ref.size(); ++j) {
        std::string key = ref[j];
        for (int k = 1; k < n; ++k) key += " " + ref[j + static_cast<size_t>(k)];
        ++ref_counts[key];
      }
      std::unordered_map<std::string, long> hyp_counts;
      for (size_t j = 0; j + static_cast<size_t>(n) <= hyp.size(); ++j) {
        std::string key = hyp[j];
        for (int k = 1; k < n; ++k) key += " " + hyp[j + static_cast<size_t>(k)];
        ++hyp_counts[key];
        ++totals[n - 1];
      }
      for (const auto &[gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (matches[n] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
  }
  log_precision /= kMaxOrder;
  double brevity = hyp_len < ref_len
                       ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len))
                       : 1.0;
  return 100.0 * brevity * std::exp(log_precision);
}

double corpus_bleu(const PredictionSet &preds, const EvalManifest &manifest) {
  CheckAligned(preds, manifest);
  std::vector<std::string> refs;
  refs.reserve(manifest.entries.size());
  for (const ManifestEntry &e : manifest.entries) refs.push_back(e.gold_text);
  return corpus_bleu(preds.responses, refs);
}

EntityF1Result micro_f1(const std::vector<std::set<std::string>> &gold,
                        const std::vector<std::set<std::string>> &predicted) {
  EntityF1Result r;
  long gold_total = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    const auto &g = gold[i];
    const auto &p = predicted[i];
    gold_total += static_cast<long>(g.size());
    if (g.empty()) {
      r.false_positives += static_cast<long>(p.size());
      continue;
    }
    for (const std::string &e : p) {
      if (g.count(e)) {
        ++r.true_positives;
      } else {
        ++r.false_positives;
      }
    }
    for (const std::string &e : g) {
      if (!p.count(e)) ++r.false_negatives;
    }
  }
  if (gold_total == 0) {
    r.warning = "no scoreable entities";
    r.f1 = 0.0;
    return r;
  }
  long denom = 2 * r.true_positives + r.false_positives + r.false_negatives;
  r.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(r.true_positives) / static_cast<double>(denom);
  return r;
}

EntityF1Result entity_f1(const PredictionSet &preds, const EvalManifest &manifest,
                         const DialogCorpus &corpus, EntityScope scope) {
  CheckAligned(preds, manifest);
  std::vector<std::set<std::string>> gold, predicted;
  gold.reserve(manifest.entries.size());
  predicted.reserve(manifest.entries.size());
  if (scope == EntityScope::kGlobal) {
    if (corpus.global_entities.empty()) throw InvalidError("entity_f1: empty entity lexicon");
    EntityMatcher matcher(corpus.global_entities);
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
      gold.push_back(matcher.Find(manifest.entries[i].gold_text));
      predicted.push_back(matcher.Find(preds.responses[i]));
    }
    return micro_f1(gold, predicted);
  }
  std::unordered_map<std::string, std::set<std::string>> lexicons;
  bool any = false;
  for (const Dialog &d : corpus.dialogs) {
    DialogCorpus single;
    single.dialogs.push_back(d);
    rebuild_lexicon(single);
    any = any || !single.global_entities.empty();
    lexicons[d.id] = std::move(single.global_entities);
  }
  if (!any) throw InvalidError("entity_f1: empty entity lexicon");
  std::unordered_map<std::string, EntityMatcher> matchers;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const std::string &id = manifest.entries[i].dialog_id;
    auto it = matchers.find(id);
    if (it == matchers.end()) {
      it = matchers.emplace(id, EntityMatcher(lexicons[id])).first;
    }
    gold.push_back(it->second.Find(manifest.entries[i].gold_text));
    predicted.push_back(it->second.Find(preds.responses[i]));
  }
  return micro_f1(gold, predicted);
}

std::string normalize_response(std::string_view s) {
  return Join(SplitWhitespace(ToLower(s)), " ");
}

Accuracy response_accuracy(const PredictionSet &preds, const EvalManifest &manifest) {
  CheckAligned(preds, manifest);
  Accuracy acc;
  std::unordered_map<std::string, bool> all_correct;
  size_t correct = 0;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    bool ok = normalize_response(preds.responses[i]) ==
              normalize_response(manifest.entries[i].gold_text);
    correct += ok ? 1 : 0;
    auto [it, inserted] = all_correct.emplace(manifest.entries[i].dialog_id, true);
    it->second = it->second && ok;
  }
  size_t dialogs_correct = 0;
  for (const auto &[id, ok] : all_correct) dialogs_correct += ok ? 1 : 0;
  size_t n = manifest.entries.size();
  acc.per_response = n == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(n);
  acc.per_dialog = all_correct.empty() ? 1.0
                                       : static_cast<double>(dialogs_correct) /
                                             static_cast<double>(all_correct.size());
  return acc;
}

EvalReport evaluate(const PredictionSet &preds, const EvalManifest &manifest,
                    const DialogCorpus &corpus, EntityScope scope) {
  EvalReport r;
  r.bleu = corpus_bleu(preds, manifest);
  EntityF1Result f1 = entity_f1(preds, manifest, corpus, scope);
  r.entity_f1 = f1.f1;
  r.warning = f1.warning;
  Accuracy acc = response_accuracy(preds, manifest);
  r.per_response_acc = acc.per_response;
  r.per_dialog_acc = acc.per_dialog;
  r.n_responses = manifest.entries.size();
  std::set<std::string> ids;
  for (const ManifestEntry &e : manifest.entries) ids.insert(e.dialog_id);
  r.n_dialogs = ids.size();
  r.corpus_tag = manifest.corpus_tag;
  r.manifest_checksum = manifest_digest(manifest);
  r.predictions_checksum = Sha256Hex(write_predictions(preds));
  r.corpus_checksum = corpus_checksum(corpus);
  r.entity_f1_variant = scope == EntityScope::kGlobal ? "micro, global lexicon"
                                                      : "micro, per-dialog lexicon";
  return r;
}

std::string report_to_text(const EvalReport &r) {
  std::string out;
  out += "corpus_tag: " + r.corpus_tag + "\n";
  out += "n_responses: " + std::to_string(r.n_responses) + "\n";
  out += "n_dialogs: " + std::to_string(r.n_dialogs) + "\n";
  out += "bleu: " + Fixed(r.bleu, 4) + "\n";
  out += "entity_f1: " + Fixed(r.entity_f1, 6) + "\n";
  out += "per_response_acc: " + Fixed(r.per_response_acc, 6) + "\n";
  out += "per_dialog_acc: " + Fixed(r.per_dialog_acc, 6) + "\n";
  out += "bleu_variant: " + r.bleu_variant + "\n";
  out += "entity_f1_variant: " + r.entity_f1_variant + "\n";
  out += "manifest_checksum: " + r.manifest_checksum + "\n";
  out += "predictions_checksum: " + r.predictions_checksum + "\n";
  out += "corpus_checksum: " + r.corpus_checksum + "\n";
  if (!r.warning.empty()) out += "warning: " + r.warning + "\n";
  return out;
}

EvalReport report_from_text(std::string_view text) {
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  EvalReport r;
  r.bleu = r.entity_f1 = r.per_response_acc = r.per_dialog_acc = kNan;
  r.bleu_variant.clear();
  r.entity_f1_variant.clear();
  size_t start = 0;
  auto number = [](const std::string &key, const std::string &v) {
    try {
      size_t used = 0;
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception &) {
      throw ParseError("report: '" + key + "' is not a number: " + v);
    }
  };
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(start, nl - start));
    start = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("report: expected 'key: value', got " + line);
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    while (!value.empty() && value.front() == ' ') value.erase(value.begin());
    if (key == "bleu") r.bleu = number(key, value);
    else if (key == "entity_f1") r.entity_f1 = number(key, value);
    else if (key == "per_response_acc") r.per_response_acc = number(key, value);
    else if (key == "per_dialog_acc") r.per_dialog_acc = number(key, value);
    else if (key == "n_responses") r.n_responses = static_cast<size_t>(number(key, value));
    else if (key == "n_dialogs") r.n_dialogs = static_cast<size_t>(number(key, value));
    else if (key == "corpus_tag") r.corpus_tag = value;
    else if (key == "bleu_variant") r.bleu_variant = value;
    else if (key == "entity_f1_variant") r.entity_f1_variant = value;
    else if (key == "manifest_checksum") r.manifest_checksum = value;
    else if (key == "predictions_checksum") r.predictions_checksum = value;
    else if (key == "corpus_checksum") r.corpus_checksum = value;
    else if (key == "warning") r.warning = value;
  }
  return r;
}

std::string report_to_json(const EvalReport &r) {
  nlohmann::ordered_json j;
  j["corpus_tag"] = r.corpus_tag;
  j["n_responses"] = r.n_responses;
  j["n_dialogs"] = r.n_dialogs;
  j["bleu"] = r.bleu;
  j["entity_f1"] = r.entity_f1;
  j["per_response_acc"] = r.per_response_acc;
  j["per_dialog_acc"] = r.per_dialog_acc;
  j["bleu_variant"] = r.bleu_variant;
  j["entity_f1_variant"] = r.entity_f1_variant;
  j["manifest_checksum"] = r.manifest_checksum;
  j["predictions_checksum"] = r.predictions_checksum;
  j["corpus_checksum"] = r.corpus_checksum;
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j.dump(2) + "\n";
}

std::vector<ComparisonRow> compare(const EvalReport &original, const EvalReport &updated) {
  std::vector<ComparisonRow> rows;
  auto add = [&](const char *name, double o, double u, double scale) {
    ComparisonRow row;
    row.metric = name;
    row.original = o * scale;
    row.updated = u * scale;
    row.delta = row.updated - row.original;
    row.relative = row.original != 0.0 ? (row.original - row.updated) / row.original * 100.0 : 0.0;
    rows.push_back(row);
  };
  add("BLEU", original.bleu, updated.bleu, 1.0);
  add("Ent.F1", original.entity_f1, updated.entity_f1, 100.0);
  add("per-response acc", original.per_response_acc, updated.per_response_acc, 100.0);
  add("per-dialog acc", original.per_dialog_acc, updated.per_dialog_acc, 100.0);
  return rows;
}

std::string render_comparison(const std::vector<ComparisonRow> &rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %10s %10s %10s %10s\n", "metric", "original", "updated",
                "delta", "rel.drop%");
  std::string out = buf;
  for (const ComparisonRow &r : rows) {
    if (std::isnan(r.original) || std::isnan(r.updated)) {
      std::snprintf(buf, sizeof buf, "%-18s %10s %10s %10s %10s\n", r.metric.c_str(),
                    std::isnan(r.original) ? "-" : Fixed(r.original, 2).c_str(),
                    std::isnan(r.updated) ? "-" : Fixed(r.updated, 2).c_str(), "-", "-");
    } else {
      std::snprintf(buf, sizeof buf, "%-18s %10.2f %10.2f %10.2f %10.2f\n", r.metric.c_str(),
                    r.original, r.updated, r.delta, r.relative);
    }
    out += buf;
  }
  return out;
}

}  // namespace ncfvar
