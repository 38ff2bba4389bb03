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

#ifndef NCFVAR_PATTERNS_H_
#define NCFVAR_PATTERNS_H_

// The nine injection recipes: where each pattern may be anchored in a
// dialog, what turns it adds, and how those turns are worded.
//
// find_anchors() applies the per-pattern applicability heuristics and binds
// every value the recipe needs (entities, distractors, option lists).
// inject() then splices the realized turns in. Both are pure functions of
// their arguments; random choices come from streams keyed by
// (seed, dialog id, pattern name), never from call order.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ncfvar/catalog.h"
#include "ncfvar/dialog.h"
#include "ncfvar/util.h"

namespace ncfvar {

enum class AnchorKind {
  kDialogStart,
  kBeforeAgentTurn,
  kAfterAgentTurn,
  kBeforeUserTurn,
  kDialogEnd,
};

std::string_view AnchorKindName(AnchorKind k);

struct TemplateStep {
  Speaker speaker;
  std::string action;                // social action, e.g. "PRE-REQUEST"
  std::vector<std::string> slots;    // placeholders used by the phrase
  std::string binding_suffix;        // placeholder p reads bound[p + suffix]
};

struct PatternRecipe {
  PatternId id;
  int added_turn_count = 0;
  AnchorKind anchor_kind = AnchorKind::kDialogStart;
  std::vector<TemplateStep> steps;
  std::set<SourceFormat> datasets;

  bool supports(SourceFormat f) const { return datasets.count(f) > 0; }
};

// The nine recipes in assignment-priority order.
const std::vector<PatternRecipe> &recipes();

// Throws UsageError for names without a recipe.
const PatternRecipe &recipe_for(std::string_view name);

// Surface forms per (pattern, social action, domain). Domain "*" is the
// fallback for domains without their own list.
class PhraseBank {
 public:
  // The bank shipped in data/phrase_bank.json.
  static const PhraseBank &Default();
  // Throws ParseError on malformed input.
  static PhraseBank FromJson(std::string_view text);

  const std::vector<std::string> *Lookup(std::string_view pattern,
                                         std::string_view action,
                                         Domain domain) const;

  // Empty when every recipe step has at least one form for every domain
  // the recipe applies to; otherwise the first gap found.
  std::string CheckCoverage() const;

 private:
  using DomainForms = std::map<std::string, std::vector<std::string>>;
  std::map<std::string, std::map<std::string, DomainForms>> forms_;
};

struct Anchor {
  std::string dialog_id;
  size_t turn_index = 0;
  std::map<std::string, std::string> bound;

  bool operator==(const Anchor &) const = default;
};

// Attribute -> distinct values in first-seen order over every KB entry and
// slot annotation of a corpus. bAbI restaurant attributes are also
// registered under their slot names (R_cuisine -> cuisine, ...).
class CorpusIndex {
 public:
  explicit CorpusIndex(const DialogCorpus &corpus);

  SourceFormat format() const { return format_; }
  const std::vector<std::string> &values(const std::string &attribute) const;
  std::optional<std::string> attribute_of(const std::string &value) const;

 private:
  void Add(const std::string &attribute, const std::string &value);

  SourceFormat format_;
  std::unordered_map<std::string, std::vector<std::string>> values_;
  std::unordered_map<std::string, std::set<std::string>> seen_;
  std::unordered_map<std::string, std::string> attribute_of_;
};

struct AnchorContext {
  const CorpusIndex *index = nullptr;
  uint64_t seed = 0;
};

// All valid anchors of `recipe` in `d`, ordered by turn index. Empty when
// the pattern is not applicable, including when it is already applied or
// the dialog's format is not one the recipe supports.
std::vector<Anchor> find_anchors(const PatternRecipe &recipe, const Dialog &d,
                                 const AnchorContext &ctx);

// Splices the recipe's turns in at the anchor. Throws InvalidError for an
// anchor that does not fit the dialog, a pattern already applied, or an
// unbound realization slot.
Dialog inject(const Dialog &d, const PatternRecipe &recipe, const Anchor &anchor,
              uint64_t seed, const PhraseBank &bank = PhraseBank::Default());

// Picks a surface form for one social action and fills its slots. A null
// draw selects the canonical form (variant 0).
std::string realize(const PatternRecipe &recipe, std::string_view action,
                    Domain domain, const std::map<std::string, std::string> &bound,
                    Rng *draw, const PhraseBank &bank = PhraseBank::Default());

// Human-readable form of a canonical entity for the given corpus format.
std::string display_entity(const std::string &canonical, SourceFormat format);

}  // namespace ncfvar

#endif  // NCFVAR_PATTERNS_H_
