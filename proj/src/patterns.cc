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

#include "ncfvar/patterns.h"

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "ncfvar/entity_matcher.h"
#include "ncfvar/error.h"

namespace ncfvar {

// Generated from data/phrase_bank.json.
extern const char *const kDefaultPhraseBankJson;

namespace {

constexpr std::string_view kScreening = "open_request_screening";
constexpr std::string_view kDetailRequest = "open_request_user_detail_request";
constexpr std::string_view kExampleRequest = "example_request";
constexpr std::string_view kMisunderstanding = "misunderstanding_report";
constexpr std::string_view kOtherCorrection = "other_correction";
constexpr std::string_view kNotHelped = "sequence_closer_not_helped";
constexpr std::string_view kRepaired = "sequence_closer_repaired";
constexpr std::string_view kCapability = "capability_expansion";
constexpr std::string_view kRecipient = "recipient_correction";

TemplateStep U(std::string action, std::vector<std::string> slots = {},
               std::string suffix = {}) {
  return {Speaker::kUser, std::move(action), std::move(slots), std::move(suffix)};
}
TemplateStep A(std::string action, std::vector<std::string> slots = {},
               std::string suffix = {}) {
  return {Speaker::kAgent, std::move(action), std::move(slots), std::move(suffix)};
}

std::vector<PatternRecipe> BuildRecipes() {
  const std::set<SourceFormat> both = {SourceFormat::kBabi, SourceFormat::kSmd};
  const std::set<SourceFormat> babi = {SourceFormat::kBabi};
  const std::set<SourceFormat> smd = {SourceFormat::kSmd};
  auto id = [](std::string_view name) { return pattern_id(name); };
  std::vector<PatternRecipe> out;
  out.push_back({id(kScreening), 2, AnchorKind::kDialogStart,
                 {U("PRE-REQUEST", {"intent"}), A("GO-AHEAD")}, both});
  out.push_back({id(kDetailRequest), 2, AnchorKind::kBeforeUserTurn,
                 {U("DETAIL-REQUEST"), A("DETAIL", {"attribute", "options"})}, babi});
  out.push_back({id(kExampleRequest), 2, AnchorKind::kAfterAgentTurn,
                 {U("EXAMPLE-REQUEST"), A("EXAMPLE", {"example"})}, smd});
  out.push_back({id(kMisunderstanding), 4, AnchorKind::kBeforeAgentTurn,
                 {A("MISTAKEN-ANSWER", {"corrupted"}), U("MISUNDERSTANDING-REPORT"),
                  A("REPAIR-REQUEST"), U("RESTATEMENT", {"request"})},
                 both});
  out.push_back({id(kOtherCorrection), 2, AnchorKind::kBeforeUserTurn,
                 {U("SLIP", {"distractor"}), A("CORRECTION", {"distractor", "attribute"})},
                 both});
  out.push_back({id(kNotHelped), 2, AnchorKind::kAfterAgentTurn,
                 {U("CLOSER"), A("RECEIPT")}, both});
  out.push_back({id(kRepaired), 2, AnchorKind::kAfterAgentTurn,
                 {U("APPRECIATION"), A("RECEIPT")}, both});
  std::vector<TemplateStep> expansion = {
      U("CAPABILITY-CHECK"),
      A("CAPABILITY-LIST", {"capability_1", "capability_2", "capability_3"})};
  for (const char *k : {"_1", "_2", "_3"}) {
    expansion.push_back(U("EXPANSION-REQUEST", {"capability"}, k));
    expansion.push_back(A("EXPANSION", {"capability", "examples"}, k));
  }
  expansion.push_back(U("ACKNOWLEDGEMENT"));
  expansion.push_back(A("RECEIPT"));
  out.push_back({id(kCapability), 10, AnchorKind::kDialogStart, expansion, both});
  std::vector<TemplateStep> recipient;
  for (int cycle = 0; cycle < 2; ++cycle) {
    recipient.push_back(U("SIDE-REMARK"));
    recipient.push_back(A("MISTAKEN-REPLY"));
    recipient.push_back(U("RECIPIENT-CORRECTION"));
    recipient.push_back(A("STAND-BY"));
  }
  out.push_back({id(kRecipient), 8, AnchorKind::kBeforeUserTurn, recipient, smd});
  return out;
}

// ------------------------------------------------------------ text cues

bool Contains(const std::string &haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

bool ContainsAny(const std::string &lower, std::initializer_list<std::string_view> cues) {
  return std::any_of(cues.begin(), cues.end(),
                     [&](std::string_view c) { return Contains(lower, c); });
}

bool IsSilence(const Turn &t) { return t.text == "<SILENCE>"; }

bool IsQuestion(const std::string &text) {
  std::string lower = ToLower(text);
  if (Contains(lower, "?")) return true;
  for (std::string_view cue : {"which ", "what ", "where ", "when ", "how ",
                               "any preference", "do you ", "would you ",
                               "is there ", "did you ", "could you ", "can you "}) {
    if (lower.rfind(cue, 0) == 0) return true;
  }
  return false;
}

bool IsNoResult(const std::string &text) {
  return ContainsAny(ToLower(text),
                     {"no result", "there is no ", "there are no ", "there isn't",
                      "don't have", "do not have", "couldn't find", "could not find",
                      "can't find", "cannot find", "unable to", "not able to",
                      "no information", "sorry"});
}

bool IsRejection(const std::string &text) {
  return ContainsAny(ToLower(text), {"does not work", "doesn't work", "no this",
                                     "something else", "don't like"});
}

bool IsGeneralStatement(const std::string &text) {
  return ContainsAny(ToLower(text), {"there are", "there is a", "several", "options",
                                     "i can ", "you have", "nearby", "multiple"});
}

// bAbI slot an agent question asks for, or empty.
std::string AskedSlot(const std::string &text) {
  std::string lower = ToLower(text);
  if (Contains(lower, "cuisine")) return "cuisine";
  if (Contains(lower, "where should it be") || Contains(lower, "location") ||
      Contains(lower, "which city")) {
    return "location";
  }
  if (Contains(lower, "how many people")) return "party_size";
  if (Contains(lower, "price range")) return "price";
  return {};
}

std::string SlotDisplay(const std::string &slot) {
  if (slot == "party_size") return "party size";
  if (slot == "price") return "price range";
  std::string out = slot;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string IntentPhrase(Domain d) {
  switch (d) {
    case Domain::kSchedule: return "my calendar";
    case Domain::kWeather: return "a weather question";
    case Domain::kNavigate: return "directions";
    case Domain::kRestaurant: return "a restaurant reservation";
  }
  return "something";
}

// ------------------------------------------------------- dialog context

// An insertion at `pos` may not split a contiguous block of one pattern.
bool InsertionOk(const Dialog &d, size_t pos) {
  if (pos > d.turns.size()) return false;
  if (pos == 0 || pos == d.turns.size()) return true;
  const Origin &before = d.turns[pos - 1].origin;
  const Origin &after = d.turns[pos].origin;
  return !(before.injected() && after.injected() && *before.pattern == *after.pattern);
}

// Entities the dialog itself knows about, with an attribute for each.
struct DialogEntities {
  std::set<std::string> lexicon;
  std::map<std::string, std::string> attribute;  // value -> attribute
  std::map<std::string, std::vector<std::string>> by_attribute;

  void Add(const std::string &attr, const std::string &value) {
    if (entity_tokens(value).empty()) return;
    lexicon.insert(value);
    attribute.emplace(value, attr);
    auto &vals = by_attribute[attr];
    if (std::find(vals.begin(), vals.end(), value) == vals.end()) vals.push_back(value);
  }
};

DialogEntities CollectEntities(const Dialog &d, SourceFormat format) {
  DialogEntities out;
  for (const Turn &t : d.turns) {
    for (const auto &[key, value] : t.annotations) {
      if (key.rfind("slot.", 0) == 0 && !SplitWhitespace(value).empty()) {
        out.Add(key.substr(5), normalize_entity(value));
      }
    }
  }
  for (const KbEntry &e : d.kb.entries) {
    if (format == SourceFormat::kBabi) {
      out.Add("name", e.subject);
    }
    out.Add(e.attribute, e.value);
  }
  return out;
}

// Same-attribute alternatives to `value`: the dialog's own KB first, then
// the corpus index. Seeded order; first element is the distractor.
std::optional<std::string> PickDistractor(const std::string &attribute,
                                          const std::string &value,
                                          const DialogEntities &local,
                                          const CorpusIndex &index, Rng rng) {
  std::vector<std::string> candidates;
  if (auto it = local.by_attribute.find(attribute); it != local.by_attribute.end()) {
    for (const std::string &v : it->second) {
      if (v != value) candidates.push_back(v);
    }
  }
  if (candidates.empty()) {
    for (const std::string &v : index.values(attribute)) {
      if (v != value) candidates.push_back(v);
    }
  }
  if (candidates.empty()) return std::nullopt;
  rng.Shuffle(candidates);
  return candidates.front();
}

// Replaces the word span of `text` spelling `entity` with `replacement`.
std::optional<std::string> ReplaceEntity(const std::string &text, const std::string &entity,
                                         const std::string &replacement) {
  std::string target = Join(entity_tokens(entity), " ");
  struct Word {
    size_t begin, end;  // core span without edge punctuation
    std::string key;
  };
  std::vector<Word> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) {
      std::string key = Join(entity_tokens(text.substr(i, j - i)), " ");
      if (!key.empty()) {
        size_t b = i, e = j;
        while (b < e && std::ispunct(static_cast<unsigned char>(text[b])) && text[b] != '_') ++b;
        while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1])) && text[e - 1] != '_') --e;
        words.push_back({b, e, key});
      }
    }
    i = j;
  }
  for (size_t s = 0; s < words.size(); ++s) {
    std::string key;
    for (size_t e = s; e < words.size(); ++e) {
      key += (e == s ? "" : " ") + words[e].key;
      if (key.size() > target.size()) break;
      if (key == target) {
        return text.substr(0, words[s].begin) + replacement + text.substr(words[e].end);
      }
    }
  }
  return std::nullopt;
}

Rng DistractorRng(const AnchorContext &ctx, const Dialog &d, std::string_view pattern,
                  size_t turn) {
  return Rng::Keyed(ctx.seed, {d.id, pattern, "distractor", std::to_string(turn)});
}

// ------------------------------------------------------ per-pattern rules

using Bound = std::map<std::string, std::string>;

Anchor MakeAnchor(const Dialog &d, size_t pos, Bound bound = {}) {
  return Anchor{d.id, pos, std::move(bound)};
}

bool FirstOriginalIsUserRequest(const Dialog &d) {
  for (const Turn &t : d.turns) {
    if (t.origin.injected()) continue;
    return t.speaker == Speaker::kUser && !IsSilence(t);
  }
  return false;
}

void ScreeningAnchors(const Dialog &d, std::vector<Anchor> &out) {
  if (d.turns.empty() || d.turns[0].speaker != Speaker::kUser) return;
  if (!FirstOriginalIsUserRequest(d)) return;
  out.push_back(MakeAnchor(d, 0, {{"intent", IntentPhrase(d.domain)}}));
}

void DetailRequestAnchors(const Dialog &d, const AnchorContext &ctx,
                          std::vector<Anchor> &out) {
  for (size_t i = 1; i < d.turns.size(); ++i) {
    const Turn &user = d.turns[i];
    const Turn &agent = d.turns[i - 1];
    if (user.speaker != Speaker::kUser || user.origin.injected()) continue;
    if (agent.speaker != Speaker::kAgent || agent.origin.injected()) continue;
    std::string slot = AskedSlot(agent.text);
    if (slot.empty() || !InsertionOk(d, i)) continue;
    const std::vector<std::string> &values = ctx.index->values(slot);
    if (values.size() < 2) continue;
    std::vector<std::string> shown;
    for (const std::string &v : values) shown.push_back(display_entity(v, ctx.index->format()));
    out.push_back(MakeAnchor(d, i, {{"attribute", SlotDisplay(slot)},
                                    {"options", Join(shown, ", ")}}));
  }
}

void ExampleRequestAnchors(const Dialog &d, const AnchorContext &ctx,
                           std::vector<Anchor> &out) {
  if (d.kb.entries.empty()) return;
  DialogEntities local = CollectEntities(d, ctx.index->format());
  EntityMatcher matcher(local.lexicon);
  for (size_t i = 0; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    if (t.speaker != Speaker::kAgent || t.origin.injected()) continue;
    if (!InsertionOk(d, i + 1)) continue;
    if (matcher.Find(t.text).size() < 2 && !IsGeneralStatement(t.text)) continue;
    // Example: one KB fact about some subject other than its own name.
    std::vector<const KbEntry *> facts;
    for (const KbEntry &e : d.kb.entries) {
      if (e.value != e.subject && !entity_tokens(e.value).empty()) facts.push_back(&e);
    }
    if (facts.empty()) continue;
    Rng rng = Rng::Keyed(ctx.seed, {d.id, kExampleRequest, "example", std::to_string(i)});
    const KbEntry &fact = *facts[rng.Below(facts.size())];
    SourceFormat f = ctx.index->format();
    std::string example = display_entity(fact.subject, f) + ", " + SlotDisplay(fact.attribute) +
                          " " + display_entity(fact.value, f);
    out.push_back(MakeAnchor(d, i + 1, {{"example", example}}));
  }
}

void MisunderstandingAnchors(const Dialog &d, const AnchorContext &ctx,
                             std::vector<Anchor> &out) {
  DialogEntities local = CollectEntities(d, ctx.index->format());
  EntityMatcher matcher(local.lexicon);
  for (size_t i = 1; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    const Turn &prev = d.turns[i - 1];
    if (t.speaker != Speaker::kAgent || t.origin.injected()) continue;
    if (prev.speaker != Speaker::kUser || IsSilence(prev)) continue;
    if (!InsertionOk(d, i)) continue;
    for (const std::string &entity : matcher.Find(t.text)) {
      auto attr = local.attribute.find(entity);
      if (attr == local.attribute.end()) continue;
      auto distractor = PickDistractor(attr->second, entity, local, *ctx.index,
                                       DistractorRng(ctx, d, kMisunderstanding, i));
      if (!distractor) continue;
      auto corrupted =
          ReplaceEntity(t.text, entity, display_entity(*distractor, ctx.index->format()));
      if (!corrupted) continue;
      out.push_back(MakeAnchor(d, i, {{"corrupted", *corrupted},
                                      {"request", prev.text},
                                      {"entity", entity},
                                      {"distractor", *distractor}}));
      break;
    }
  }
}

void OtherCorrectionAnchors(const Dialog &d, const AnchorContext &ctx,
                            std::vector<Anchor> &out) {
  SourceFormat f = ctx.index->format();
  DialogEntities local = CollectEntities(d, f);
  EntityMatcher matcher(local.lexicon);
  for (size_t i = 0; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    if (t.speaker != Speaker::kUser || t.origin.injected() || IsSilence(t)) continue;
    if (!InsertionOk(d, i)) continue;
    // Slot values this turn carries: explicit annotations, else entities
    // of the dialog mentioned in the text.
    std::vector<std::pair<std::string, std::string>> slots;
    for (const auto &[key, value] : t.annotations) {
      if (key.rfind("slot.", 0) == 0 && !SplitWhitespace(value).empty()) {
        slots.emplace_back(key.substr(5), normalize_entity(value));
      }
    }
    if (slots.empty()) {
      for (const std::string &entity : matcher.Find(t.text)) {
        if (auto it = local.attribute.find(entity); it != local.attribute.end()) {
          slots.emplace_back(it->second, entity);
        }
      }
    }
    for (const auto &[attribute, value] : slots) {
      auto distractor = PickDistractor(attribute, value, local, *ctx.index,
                                       DistractorRng(ctx, d, kOtherCorrection, i));
      if (!distractor) continue;
      out.push_back(MakeAnchor(d, i, {{"attribute", SlotDisplay(attribute)},
                                      {"value", display_entity(value, f)},
                                      {"distractor", display_entity(*distractor, f)}}));
      break;
    }
  }
}

void NotHelpedAnchors(const Dialog &d, std::vector<Anchor> &out) {
  for (size_t i = 0; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    if (t.speaker != Speaker::kAgent || t.origin.injected()) continue;
    bool unhelpful = IsNoResult(t.text);
    if (!unhelpful && i >= 1) {
      const Turn &prev = d.turns[i - 1];
      unhelpful = prev.speaker == Speaker::kUser && !prev.origin.injected() &&
                  IsRejection(prev.text);
    }
    if (unhelpful && InsertionOk(d, i + 1)) out.push_back(MakeAnchor(d, i + 1));
  }
}

bool IsRepairPattern(const Origin &o) {
  if (!o.injected()) return false;
  const std::string &n = o.pattern->name;
  return n == kMisunderstanding || n == kExampleRequest || n == kOtherCorrection ||
         n == kDetailRequest;
}

void RepairedAnchors(const Dialog &d, std::vector<Anchor> &out) {
  for (size_t i = 1; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    if (t.speaker != Speaker::kAgent) continue;
    if (!InsertionOk(d, i + 1)) continue;
    bool resolves = false;
    if (!t.origin.injected()) {
      const Turn &prev = d.turns[i - 1];
      // Original answer after an injected repair block.
      if (prev.origin.injected() && prev.origin.pattern->name == kMisunderstanding) {
        resolves = true;
      }
      // question -> answer -> resolution, all original.
      if (!resolves && i >= 2 && !prev.origin.injected() && !IsSilence(prev)) {
        const Turn &question = d.turns[i - 2];
        resolves = question.speaker == Speaker::kAgent && !question.origin.injected() &&
                   IsQuestion(question.text);
      }
    } else if (IsRepairPattern(t.origin) && t.origin.pattern->name != kMisunderstanding) {
      // Agent turn closing an example / detail / correction block.
      bool block_end = i + 1 == d.turns.size() || d.turns[i + 1].origin != t.origin;
      resolves = block_end;
    }
    if (resolves) out.push_back(MakeAnchor(d, i + 1));
  }
}

void CapabilityAnchors(const Dialog &d, const AnchorContext &ctx, std::vector<Anchor> &out) {
  if (d.turns.empty() || d.turns[0].speaker != Speaker::kUser) return;
  if (!FirstOriginalIsUserRequest(d)) return;
  struct Capability {
    const char *name;
    const char *attribute;
  };
  static const Capability kSmd[] = {{"calendar scheduling", "event"},
                                    {"weather information", "location"},
                                    {"point-of-interest navigation", "poi_type"}};
  static const Capability kBabi[] = {{"restaurant recommendations", "cuisine"},
                                     {"table reservations", "location"},
                                     {"restaurant details", "price"}};
  SourceFormat f = ctx.index->format();
  const Capability *caps = f == SourceFormat::kSmd ? kSmd : kBabi;
  Rng rng = Rng::Keyed(ctx.seed, {d.id, kCapability, "examples"});
  Bound bound;
  for (int k = 0; k < 3; ++k) {
    std::string suffix = "_" + std::to_string(k + 1);
    bound["capability" + suffix] = caps[k].name;
    std::vector<std::string> values = ctx.index->values(caps[k].attribute);
    rng.Shuffle(values);
    if (values.size() > 2) values.resize(2);
    std::vector<std::string> shown;
    for (const std::string &v : values) shown.push_back(display_entity(v, f));
    bound["examples" + suffix] = shown.empty() ? std::string("many things") : Join(shown, " and ");
  }
  out.push_back(MakeAnchor(d, 0, std::move(bound)));
}

void RecipientAnchors(const Dialog &d, std::vector<Anchor> &out) {
  for (size_t i = 2; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    if (t.speaker != Speaker::kUser || t.origin.injected()) continue;
    if (InsertionOk(d, i)) out.push_back(MakeAnchor(d, i));
  }
}

bool AnchorFits(const Dialog &d, const PatternRecipe &recipe, size_t pos) {
  const auto &turns = d.turns;
  switch (recipe.anchor_kind) {
    case AnchorKind::kDialogStart:
      return pos == 0 && (turns.empty() || turns[0].speaker == Speaker::kUser);
    case AnchorKind::kBeforeAgentTurn:
      return pos < turns.size() && turns[pos].speaker == Speaker::kAgent &&
             InsertionOk(d, pos);
    case AnchorKind::kAfterAgentTurn:
      return pos >= 1 && pos <= turns.size() && turns[pos - 1].speaker == Speaker::kAgent &&
             InsertionOk(d, pos);
    case AnchorKind::kBeforeUserTurn:
      return pos < turns.size() && turns[pos].speaker == Speaker::kUser &&
             InsertionOk(d, pos);
    case AnchorKind::kDialogEnd:
      return pos == turns.size() && (turns.empty() || turns.back().speaker == Speaker::kAgent);
  }
  return false;
}

std::string Substitute(const std::string &form, const Bound &bound) {
  std::string out;
  size_t i = 0;
  while (i < form.size()) {
    if (form[i] == '{') {
      size_t close = form.find('}', i);
      if (close == std::string::npos) throw InvalidError("unterminated slot in '" + form + "'");
      std::string name = form.substr(i + 1, close - i - 1);
      auto it = bound.find(name);
      if (it == bound.end()) throw InvalidError("unresolvable realization slot '" + name + "'");
      out += it->second;
      i = close + 1;
      continue;
    }
    out.push_back(form[i++]);
  }
  for (char &c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

}  // namespace

std::string_view AnchorKindName(AnchorKind k) {
  switch (k) {
    case AnchorKind::kDialogStart: return "DialogStart";
    case AnchorKind::kBeforeAgentTurn: return "BeforeAgentTurn";
    case AnchorKind::kAfterAgentTurn: return "AfterAgentTurn";
    case AnchorKind::kBeforeUserTurn: return "BeforeUserTurn";
    case AnchorKind::kDialogEnd: return "DialogEnd";
  }
  return "?";
}

const std::vector<PatternRecipe> &recipes() {
  static const std::vector<PatternRecipe> all = BuildRecipes();
  return all;
}

const PatternRecipe &recipe_for(std::string_view name) {
  PatternId id = pattern_id(name);
  for (const PatternRecipe &r : recipes()) {
    if (r.id == id) return r;
  }
  std::string known;
  for (const PatternRecipe &r : recipes()) known += (known.empty() ? "" : ", ") + r.id.name;
  throw UsageError("pattern '" + std::string(name) +
                   "' has no injection recipe; recipe-bearing patterns: " + known);
}

// ------------------------------------------------------------ PhraseBank

const PhraseBank &PhraseBank::Default() {
  static const PhraseBank bank = FromJson(kDefaultPhraseBankJson);
  return bank;
}

PhraseBank PhraseBank::FromJson(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("phrase bank is not valid JSON: ") + e.what());
  }
  auto fail = [](const std::string &where) {
    return ParseError("phrase bank: expected pattern -> action -> domain -> [forms] at " + where);
  };
  if (!root.is_object()) throw fail("top level");
  PhraseBank bank;
  for (auto &[pattern, actions] : root.items()) {
    if (!actions.is_object()) throw fail(pattern);
    for (auto &[action, domains] : actions.items()) {
      if (!domains.is_object()) throw fail(pattern + "/" + action);
      for (auto &[domain, forms] : domains.items()) {
        std::string where = pattern + "/" + action + "/" + domain;
        if (!forms.is_array() || forms.empty()) throw fail(where);
        if (domain != "*" && !ParseDomainName(domain)) {
          throw ParseError("phrase bank: unknown domain at " + where);
        }
        auto &list = bank.forms_[pattern][action][domain];
        for (const auto &f : forms) {
          if (!f.is_string()) throw fail(where);
          list.push_back(f.get<std::string>());
        }
      }
    }
  }
  return bank;
}

const std::vector<std::string> *PhraseBank::Lookup(std::string_view pattern,
                                                   std::string_view action,
                                                   Domain domain) const {
  auto p = forms_.find(std::string(pattern));
  if (p == forms_.end()) return nullptr;
  auto a = p->second.find(std::string(action));
  if (a == p->second.end()) return nullptr;
  if (auto d = a->second.find(std::string(DomainName(domain))); d != a->second.end()) {
    return &d->second;
  }
  if (auto d = a->second.find("*"); d != a->second.end()) return &d->second;
  return nullptr;
}

std::string PhraseBank::CheckCoverage() const {
  for (const PatternRecipe &r : recipes()) {
    std::vector<Domain> domains;
    if (r.supports(SourceFormat::kBabi)) domains.push_back(Domain::kRestaurant);
    if (r.supports(SourceFormat::kSmd)) {
      domains.insert(domains.end(), {Domain::kSchedule, Domain::kWeather, Domain::kNavigate});
    }
    for (const TemplateStep &step : r.steps) {
      for (Domain d : domains) {
        if (!Lookup(r.id.name, step.action, d)) {
          return r.id.name + "/" + step.action + "/" + std::string(DomainName(d));
        }
      }
    }
  }
  return {};
}

// ----------------------------------------------------------- CorpusIndex

CorpusIndex::CorpusIndex(const DialogCorpus &corpus) : format_(corpus.source_format) {
  static const std::map<std::string, std::string> kBabiAlias = {
      {"R_cuisine", "cuisine"}, {"R_location", "location"},
      {"R_number", "party_size"}, {"R_price", "price"}};
  for (const Dialog &d : corpus.dialogs) {
    for (const KbEntry &e : d.kb.entries) {
      if (format_ == SourceFormat::kBabi) {
        Add("name", e.subject);
        if (auto it = kBabiAlias.find(e.attribute); it != kBabiAlias.end()) {
          Add(it->second, e.value);
        }
      }
      Add(e.attribute, e.value);
    }
    for (const Turn &t : d.turns) {
      for (const auto &[key, value] : t.annotations) {
        if (key.rfind("slot.", 0) == 0 && !SplitWhitespace(value).empty()) {
          Add(key.substr(5), normalize_entity(value));
        }
      }
    }
  }
}

void CorpusIndex::Add(const std::string &attribute, const std::string &value) {
  // Placeholders such as "-" carry no words and never match text.
  if (entity_tokens(value).empty()) return;
  if (seen_[attribute].insert(value).second) values_[attribute].push_back(value);
  attribute_of_.emplace(value, attribute);
}

const std::vector<std::string> &CorpusIndex::values(const std::string &attribute) const {
  static const std::vector<std::string> kEmpty;
  auto it = values_.find(attribute);
  return it == values_.end() ? kEmpty : it->second;
}

std::optional<std::string> CorpusIndex::attribute_of(const std::string &value) const {
  auto it = attribute_of_.find(value);
  if (it == attribute_of_.end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------ operations

std::string display_entity(const std::string &canonical, SourceFormat format) {
  if (format == SourceFormat::kBabi) return canonical;
  std::string out = canonical;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::vector<Anchor> find_anchors(const PatternRecipe &recipe, const Dialog &d,
                                 const AnchorContext &ctx) {
  if (ctx.index == nullptr) throw InvalidError("find_anchors needs a corpus index");
  std::vector<Anchor> out;
  if (!recipe.supports(ctx.index->format())) return out;
  if (d.applied_patterns.count(recipe.id)) return out;
  const std::string &name = recipe.id.name;
  if (name == kScreening) ScreeningAnchors(d, out);
  else if (name == kDetailRequest) DetailRequestAnchors(d, ctx, out);
  else if (name == kExampleRequest) ExampleRequestAnchors(d, ctx, out);
  else if (name == kMisunderstanding) MisunderstandingAnchors(d, ctx, out);
  else if (name == kOtherCorrection) OtherCorrectionAnchors(d, ctx, out);
  else if (name == kNotHelped) NotHelpedAnchors(d, out);
  else if (name == kRepaired) RepairedAnchors(d, out);
  else if (name == kCapability) CapabilityAnchors(d, ctx, out);
  else if (name == kRecipient) RecipientAnchors(d, out);
  std::stable_sort(out.begin(), out.end(), [](const Anchor &a, const Anchor &b) {
    return a.turn_index < b.turn_index;
  });
  return out;
}

std::string realize(const PatternRecipe &recipe, std::string_view action, Domain domain,
                    const std::map<std::string, std::string> &bound, Rng *draw,
                    const PhraseBank &bank) {
  const std::vector<std::string> *forms = bank.Lookup(recipe.id.name, action, domain);
  if (forms == nullptr || forms->empty()) {
    throw InvalidError("missing phrase bank entry " + recipe.id.name + "/" +
                       std::string(action) + "/" + std::string(DomainName(domain)));
  }
  size_t variant = draw ? static_cast<size_t>(draw->Below(forms->size())) : 0;
  return Substitute((*forms)[variant], bound);
}

Dialog inject(const Dialog &d, const PatternRecipe &recipe, const Anchor &anchor,
              uint64_t seed, const PhraseBank &bank) {
  if (d.applied_patterns.count(recipe.id)) {
    throw InvalidError("pattern already applied at anchor (" + recipe.id.name + " in " +
                       d.id + ")");
  }
  if (anchor.dialog_id != d.id || !AnchorFits(d, recipe, anchor.turn_index)) {
    throw InvalidError("anchor invalid for dialog " + d.id + ": " + recipe.id.name + " at turn " +
                       std::to_string(anchor.turn_index));
  }
  Rng draw = Rng::Keyed(seed, {d.id, recipe.id.name});
  std::vector<Turn> added;
  added.reserve(recipe.steps.size());
  for (const TemplateStep &step : recipe.steps) {
    Bound view;
    for (const std::string &slot : step.slots) {
      auto it = anchor.bound.find(slot + step.binding_suffix);
      if (it == anchor.bound.end()) {
        throw InvalidError("unresolvable realization slot '" + slot + step.binding_suffix +
                           "' for " + recipe.id.name);
      }
      view[slot] = it->second;
    }
    Turn t;
    t.speaker = step.speaker;
    t.text = realize(recipe, step.action, d.domain, view, &draw, bank);
    t.origin = Origin::Injected(recipe.id);
    added.push_back(std::move(t));
  }
  Dialog out = d;
  const size_t pos = anchor.turn_index;
  const int k = static_cast<int>(added.size());
  out.turns.insert(out.turns.begin() + static_cast<std::ptrdiff_t>(pos),
                   std::make_move_iterator(added.begin()), std::make_move_iterator(added.end()));
  for (KbEntry &e : out.kb.entries) {
    if (e.after_turn >= static_cast<int>(pos)) e.after_turn += k;
  }
  out.applied_patterns.insert(recipe.id);
  return out;
}

}  // namespace ncfvar
