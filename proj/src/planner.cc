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

#include "ncfvar/planner.h"

#include <algorithm>
#include <cstdio>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/util.h"

namespace ncfvar {
namespace {

std::vector<std::string> EffectiveOrder(const PlanConfig &cfg) {
  std::vector<std::string> order = cfg.pattern_order;
  if (order.empty()) {
    for (const PatternRecipe &r : recipes()) order.push_back(r.id.name);
  }
  // Targets naming patterns outside the order are appended.
  for (const auto &[name, target] : cfg.targets) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  }
  return order;
}

int TargetOf(const PlanConfig &cfg, const std::string &name) {
  auto it = cfg.targets.find(name);
  return it == cfg.targets.end() ? 0 : it->second;
}

struct Candidate {
  size_t dialog;
  std::vector<Anchor> anchors;
};

// Picks `count` candidates. Without overlap targets the draw is uniform;
// with them each dialog is weighted by how far the bucket it would move
// into is below target, shared among the dialogs that would move there.
std::vector<size_t> SelectDialogs(const std::vector<Candidate> &eligible, int count,
                                  const std::vector<int> &load,
                                  const std::vector<int> &histogram_targets,
                                  std::vector<int> &reached, Rng &rng) {
  std::vector<size_t> picked;
  if (histogram_targets.empty()) {
    std::vector<size_t> order(eligible.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.Shuffle(order);
    order.resize(static_cast<size_t>(count));
    return order;
  }
  std::vector<bool> taken(eligible.size(), false);
  auto wanted = [&](int k) {
    return k >= 1 && static_cast<size_t>(k) <= histogram_targets.size()
               ? histogram_targets[static_cast<size_t>(k - 1)]
               : 0;
  };
  auto at_least = [&](int k) {
    return static_cast<size_t>(k) < reached.size() ? reached[static_cast<size_t>(k)] : 0;
  };
  for (int n = 0; n < count; ++n) {
    std::map<int, int> level_size;
    for (size_t i = 0; i < eligible.size(); ++i) {
      if (!taken[i]) ++level_size[load[eligible[i].dialog]];
    }
    std::vector<double> weight(eligible.size(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < eligible.size(); ++i) {
      if (taken[i]) continue;
      int level = load[eligible[i].dialog];
      double deficit = std::max(0, wanted(level + 1) - at_least(level + 1));
      weight[i] = deficit / level_size[level] + 1e-6;
      total += weight[i];
    }
    double r = rng.Unit() * total;
    size_t choice = eligible.size();
    for (size_t i = 0; i < eligible.size(); ++i) {
      if (taken[i]) continue;
      choice = i;
      if (r < weight[i]) break;
      r -= weight[i];
    }
    taken[choice] = true;
    picked.push_back(choice);
    int level = load[eligible[choice].dialog] + 1;
    if (reached.size() <= static_cast<size_t>(level)) reached.resize(static_cast<size_t>(level) + 1, 0);
    ++reached[static_cast<size_t>(level)];
  }
  return picked;
}

}  // namespace

std::string PlanConfig::Canonical() const {
  return config_to_json(*this);
}

PlanConfig preset_config(std::string_view name) {
  PlanConfig cfg;
  if (name == "smd-table1") {
    cfg.targets = {{"open_request_screening", 64}, {"example_request", 23},
                   {"misunderstanding_report", 35}, {"other_correction", 24},
                   {"sequence_closer_not_helped", 6}, {"sequence_closer_repaired", 139},
                   {"capability_expansion", 151}, {"recipient_correction", 100}};
    cfg.max_patterns_per_dialog = 4;
    cfg.histogram_targets = {288, 198, 57, 7, 0};
  } else if (name == "babi-table1") {
    cfg.targets = {{"open_request_screening", 54}, {"open_request_user_detail_request", 143},
                   {"misunderstanding_report", 314}, {"other_correction", 522},
                   {"sequence_closer_not_helped", 811}, {"sequence_closer_repaired", 189},
                   {"capability_expansion", 811}};
    cfg.max_patterns_per_dialog = 5;
    cfg.histogram_targets = {1000, 981, 843, 375, 4};
  } else {
    throw UsageError("unknown preset '" + std::string(name) +
                     "' (expected smd-table1 or babi-table1)");
  }
  for (const PatternRecipe &r : recipes()) cfg.pattern_order.push_back(r.id.name);
  return cfg;
}

std::vector<std::string> preset_names() { return {"smd-table1", "babi-table1"}; }

PlanConfig config_from_json(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(std::string("plan config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("plan config must be a JSON object");
  PlanConfig cfg;
  try {
    if (j.contains("targets")) {
      for (auto &[name, value] : j["targets"].items()) {
        int target = value.get<int>();
        if (target < 0) throw UsageError("negative target for " + name);
        recipe_for(name);
        cfg.targets[name] = target;
      }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("max_patterns_per_dialog")) {
      cfg.max_patterns_per_dialog = j["max_patterns_per_dialog"].get<int>();
      if (cfg.max_patterns_per_dialog < 1) {
        throw UsageError("max_patterns_per_dialog must be positive");
      }
    }
    if (j.contains("pattern_order")) {
      cfg.pattern_order = j["pattern_order"].get<std::vector<std::string>>();
      for (const std::string &name : cfg.pattern_order) recipe_for(name);
    }
    if (j.contains("histogram_targets")) {
      cfg.histogram_targets = j["histogram_targets"].get<std::vector<int>>();
    }
    if (j.contains("allow_shortfall")) cfg.allow_shortfall = j["allow_shortfall"].get<bool>();
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(std::string("plan config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const PlanConfig &cfg) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json targets = nlohmann::ordered_json::object();
  for (const std::string &name : EffectiveOrder(cfg)) targets[name] = TargetOf(cfg, name);
  j["targets"] = targets;
  j["seed"] = cfg.seed;
  j["max_patterns_per_dialog"] = cfg.max_patterns_per_dialog;
  j["pattern_order"] = EffectiveOrder(cfg);
  j["histogram_targets"] = cfg.histogram_targets;
  j["allow_shortfall"] = cfg.allow_shortfall;
  return j.dump(2);
}

InjectionPlan plan(const DialogCorpus &corpus, const PlanConfig &cfg, const PhraseBank &bank) {
  InjectionPlan out;
  out.corpus_checksum = corpus_checksum(corpus);
  out.config_digest = Sha256Hex(cfg.Canonical() + "\n" + out.corpus_checksum);

  CorpusIndex index(corpus);
  AnchorContext ctx{&index, cfg.seed};
  std::vector<Dialog> working = corpus.dialogs;
  std::vector<int> load(working.size(), 0);
  for (size_t i = 0; i < working.size(); ++i) {
    load[i] = static_cast<int>(working[i].applied_patterns.size());
  }
  std::vector<int> reached(1, 0);  // reached[k]: dialogs with >= k patterns
  for (int l : load) {
    for (int k = 1; k <= l; ++k) {
      if (reached.size() <= static_cast<size_t>(k)) reached.resize(static_cast<size_t>(k) + 1, 0);
      ++reached[static_cast<size_t>(k)];
    }
  }

  std::vector<Shortfall> shortfalls;
  for (const std::string &name : EffectiveOrder(cfg)) {
    int target = TargetOf(cfg, name);
    if (target <= 0) continue;
    const PatternRecipe &recipe = recipe_for(name);
    if (!recipe.supports(corpus.source_format)) {
      throw UsageError("pattern not applicable to " +
                       std::string(FormatName(corpus.source_format)) + ": " + name);
    }
    std::vector<Candidate> eligible;
    for (size_t i = 0; i < working.size(); ++i) {
      if (load[i] >= cfg.max_patterns_per_dialog) continue;
      std::vector<Anchor> anchors = find_anchors(recipe, working[i], ctx);
      if (!anchors.empty()) eligible.push_back({i, std::move(anchors)});
    }
    int count = target;
    if (static_cast<int>(eligible.size()) < target) {
      shortfalls.push_back({name, target, static_cast<int>(eligible.size())});
      count = static_cast<int>(eligible.size());
    }
    Rng rng = Rng::Keyed(cfg.seed, {"plan", name});
    std::vector<size_t> picked =
        SelectDialogs(eligible, count, load, cfg.histogram_targets, reached, rng);
    std::sort(picked.begin(), picked.end());
    for (size_t p : picked) {
      Candidate &c = eligible[p];
      Rng anchor_rng = Rng::Keyed(cfg.seed, {"anchor", working[c.dialog].id, name});
      anchor_rng.Shuffle(c.anchors);
      const Anchor &anchor = c.anchors.front();
      working[c.dialog] = inject(working[c.dialog], recipe, anchor, cfg.seed, bank);
      ++load[c.dialog];
      out.assignments.push_back({working[c.dialog].id, recipe.id, anchor});
    }
  }
  if (!shortfalls.empty() && !cfg.allow_shortfall) {
    std::string msg = "eligibility shortfall:";
    for (const Shortfall &s : shortfalls) {
      msg += "\n  " + s.pattern + ": eligible " + std::to_string(s.eligible) + " < target " +
             std::to_string(s.target);
    }
    throw PlanError(msg);
  }
  out.shortfalls = std::move(shortfalls);
  return out;
}

DialogCorpus execute(const DialogCorpus &corpus, const InjectionPlan &plan, uint64_t seed,
                     int jobs, const PhraseBank &bank) {
  if (plan.corpus_checksum != corpus_checksum(corpus)) throw InvalidError("plan/corpus mismatch");
  std::unordered_map<std::string, size_t> position;
  for (size_t i = 0; i < corpus.dialogs.size(); ++i) position[corpus.dialogs[i].id] = i;
  std::vector<std::vector<const Assignment *>> per_dialog(corpus.dialogs.size());
  for (const Assignment &a : plan.assignments) {
    auto it = position.find(a.dialog_id);
    if (it == position.end()) throw InvalidError("plan/corpus mismatch");
    per_dialog[it->second].push_back(&a);
  }
  DialogCorpus out = corpus;
  auto work = [&](size_t worker, size_t workers) {
    for (size_t i = worker; i < out.dialogs.size(); i += workers) {
      for (const Assignment *a : per_dialog[i]) {
        out.dialogs[i] = inject(out.dialogs[i], recipe_for(a->pattern.name), a->anchor, seed, bank);
      }
    }
  };
  size_t workers = static_cast<size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    threads.clear();
    for (auto &e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return out;
}

PlanConfig ablation_config(const PlanConfig &cfg, const DialogCorpus &corpus,
                           std::string_view pattern) {
  const PatternRecipe &recipe = recipe_for(pattern);
  if (!recipe.supports(corpus.source_format)) {
    throw UsageError("pattern not applicable to " + std::string(FormatName(corpus.source_format)) +
                     ": " + recipe.id.name);
  }
  PlanConfig out = cfg;
  for (auto &[name, target] : out.targets) {
    if (name != recipe.id.name) target = 0;
  }
  out.histogram_targets.clear();
  return out;
}

DialogCorpus ablate(const DialogCorpus &corpus, const PlanConfig &cfg, std::string_view pattern,
                    const PhraseBank &bank) {
  PlanConfig single = ablation_config(cfg, corpus, pattern);
  InjectionPlan p = plan(corpus, single, bank);
  return execute(corpus, p, single.seed, 1, bank);
}

std::string plan_dump(const InjectionPlan &plan) {
  std::string out;
  for (const Assignment &a : plan.assignments) {
    out += a.dialog_id + "\t" + a.pattern.name + "\t" + std::to_string(a.anchor.turn_index) + "\n";
  }
  return out;
}

std::map<int, int> overlap_histogram(const DialogCorpus &corpus) {
  int largest = 0;
  for (const Dialog &d : corpus.dialogs) {
    largest = std::max(largest, static_cast<int>(d.applied_patterns.size()));
  }
  std::map<int, int> h;
  for (int k = 1; k <= std::max(5, largest + 1); ++k) h[k] = 0;
  for (const Dialog &d : corpus.dialogs) {
    for (int k = 1; k <= static_cast<int>(d.applied_patterns.size()); ++k) ++h[k];
  }
  return h;
}

ReviewSheet sample_review(const DialogCorpus &updated, double fraction, uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("review fraction must be in (0, 1]");
  }
  std::vector<size_t> pool;
  for (size_t i = 0; i < updated.dialogs.size(); ++i) {
    if (!updated.dialogs[i].applied_patterns.empty()) pool.push_back(i);
  }
  if (pool.empty()) throw InvalidError("no updated dialogs to review");
  ReviewSheet sheet;
  sheet.fraction = fraction;
  sheet.seed = seed;
  sheet.updated_dialogs = pool.size();
  auto n = static_cast<size_t>(RoundHalfUp(fraction * static_cast<double>(pool.size())));
  Rng rng = Rng::Keyed(seed, {"review"});
  rng.Shuffle(pool);
  pool.resize(std::min(n, pool.size()));
  std::sort(pool.begin(), pool.end());
  for (size_t i : pool) sheet.dialog_ids.push_back(updated.dialogs[i].id);
  return sheet;
}

std::string render_review(const DialogCorpus &updated, const ReviewSheet &sheet) {
  std::unordered_map<std::string, const Dialog *> by_id;
  for (const Dialog &d : updated.dialogs) by_id[d.id] = &d;
  char header[160];
  std::snprintf(header, sizeof header,
                "# Review sheet\n\nsampled %zu of %zu updated dialogs (fraction %.2f, seed %llu)\n",
                sheet.dialog_ids.size(), sheet.updated_dialogs, sheet.fraction,
                static_cast<unsigned long long>(sheet.seed));
  std::string out = header;
  for (const std::string &id : sheet.dialog_ids) {
    const Dialog &d = *by_id.at(id);
    std::vector<std::string> names;
    for (const PatternId &p : d.applied_patterns) names.push_back(p.name);
    out += "\n## " + id + " (" + std::string(DomainName(d.domain)) + "; " + Join(names, ", ") +
           ")\n\n";
    for (const Turn &t : d.turns) {
      out += "    ";
      if (t.origin.injected()) out += "[+" + t.origin.pattern->name + "] ";
      out += std::string(SpeakerName(t.speaker)) + ": " + t.text + "\n";
    }
  }
  return out;
}

CorpusStats corpus_stats(const DialogCorpus &corpus) {
  CorpusStats s;
  s.format = corpus.source_format;
  s.dialogs = corpus.dialogs.size();
  for (const Dialog &d : corpus.dialogs) s.utterances += utterance_count(d);
  s.mean_utterances = mean_utterances(corpus);
  for (const PatternRecipe &r : recipes()) {
    int n = 0;
    for (const Dialog &d : corpus.dialogs) n += d.applied_patterns.count(r.id) ? 1 : 0;
    s.per_pattern.emplace_back(r.id.name, n);
  }
  s.histogram = overlap_histogram(corpus);
  s.lexicon_size = corpus.global_entities.size();
  s.checksum = corpus_checksum(corpus);
  return s;
}

std::string render_stats(const CorpusStats &s) {
  char buf[64];
  std::string out;
  out += "format: " + std::string(FormatName(s.format)) + "\n";
  out += "dialogs: " + std::to_string(s.dialogs) + "\n";
  out += "utterances: " + std::to_string(s.utterances) + "\n";
  std::snprintf(buf, sizeof buf, "%.4f", s.mean_utterances);
  out += "mean_utterances: " + std::string(buf) + "\n";
  for (const auto &[name, n] : s.per_pattern) {
    out += "pattern." + name + ": " + std::to_string(n) + "\n";
  }
  for (const auto &[k, n] : s.histogram) {
    out += "dialogs_with_at_least." + std::to_string(k) + ": " + std::to_string(n) + "\n";
  }
  out += "entity_lexicon_size: " + std::to_string(s.lexicon_size) + "\n";
  out += "checksum: sha256:" + s.checksum + "\n";
  out += "assumption: bAbI recipes reuse the SMD added-turn counts\n";
  return out;
}

}  // namespace ncfvar
