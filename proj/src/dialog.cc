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

#include "ncfvar/dialog.h"

#include <algorithm>
#include <unordered_map>

#include "ncfvar/entity_matcher.h"
#include "ncfvar/error.h"
#include "ncfvar/util.h"

namespace ncfvar {

std::string_view SpeakerName(Speaker s) {
  return s == Speaker::kUser ? "U" : "A";
}

std::string_view DomainName(Domain d) {
  switch (d) {
    case Domain::kSchedule: return "schedule";
    case Domain::kWeather: return "weather";
    case Domain::kNavigate: return "navigate";
    case Domain::kRestaurant: return "restaurant";
  }
  return "?";
}

std::string_view FormatName(SourceFormat f) {
  return f == SourceFormat::kBabi ? "babi" : "smd";
}

SourceFormat ParseFormatName(std::string_view name) {
  if (name == "babi") return SourceFormat::kBabi;
  if (name == "smd") return SourceFormat::kSmd;
  throw UsageError("unknown format '" + std::string(name) +
                   "' (expected babi or smd)");
}

std::optional<Domain> ParseDomainName(std::string_view name) {
  if (name == "schedule") return Domain::kSchedule;
  if (name == "weather") return Domain::kWeather;
  if (name == "navigate") return Domain::kNavigate;
  if (name == "restaurant") return Domain::kRestaurant;
  return std::nullopt;
}

size_t utterance_count(const Dialog &d) { return d.turns.size(); }

double mean_utterances(const DialogCorpus &c) {
  if (c.dialogs.empty()) return 0.0;
  size_t total = 0;
  for (const Dialog &d : c.dialogs) total += utterance_count(d);
  return static_cast<double>(total) / static_cast<double>(c.dialogs.size());
}

std::string normalize_entity(std::string_view s) {
  std::vector<std::string> words = SplitWhitespace(s);
  if (words.empty()) throw InvalidError("empty entity");
  return ToLower(Join(words, "_"));
}

static bool IsEdgePunct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':': case '"':
    case '\'': case '(': case ')': case '[': case ']': case '{': case '}':
      return true;
    default:
      return false;
  }
}

static std::string StripPunct(std::string_view w) {
  size_t b = 0, e = w.size();
  while (b < e && IsEdgePunct(w[b])) ++b;
  while (e > b && IsEdgePunct(w[e - 1])) --e;
  return std::string(w.substr(b, e - b));
}

// Sub-tokens of one whitespace word.
static std::vector<std::string> WordPieces(std::string_view word) {
  std::vector<std::string> out;
  std::string lower = ToLower(word);
  size_t i = 0;
  while (i <= lower.size()) {
    size_t j = lower.find('_', i);
    if (j == std::string::npos) j = lower.size();
    std::string piece = StripPunct(std::string_view(lower).substr(i, j - i));
    if (!piece.empty()) out.push_back(std::move(piece));
    i = j + 1;
  }
  return out;
}

std::vector<std::string> entity_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const std::string &w : SplitWhitespace(s)) {
    for (std::string &p : WordPieces(w)) out.push_back(std::move(p));
  }
  return out;
}

EntityMatcher::EntityMatcher(const std::set<std::string> &lexicon) {
  for (const std::string &member : lexicon) {
    std::vector<std::string> toks = entity_tokens(member);
    if (toks.empty()) continue;
    std::string key = Join(toks, " ");
    max_words_ = std::max(max_words_, toks.size());
    // Lexicon is iterated in order, so ties resolve to the smallest member.
    keys_.emplace(std::move(key), member);
  }
}

std::set<std::string> EntityMatcher::Find(std::string_view text) const {
  std::set<std::string> found;
  if (keys_.empty()) return found;
  // Each whitespace word contributes its pieces; spans cover whole words.
  std::vector<std::string> words;
  for (const std::string &w : SplitWhitespace(text)) {
    std::vector<std::string> pieces = WordPieces(w);
    if (!pieces.empty()) words.push_back(Join(pieces, " "));
  }
  size_t i = 0;
  while (i < words.size()) {
    size_t matched = 0;
    size_t longest = std::min(max_words_, words.size() - i);
    for (size_t len = longest; len >= 1; --len) {
      std::string key = words[i];
      for (size_t k = 1; k < len; ++k) key += " " + words[i + k];
      auto it = keys_.find(key);
      if (it != keys_.end()) {
        found.insert(it->second);
        matched = len;
        break;
      }
    }
    i += matched ? matched : 1;
  }
  return found;
}

std::set<std::string> entities_in(std::string_view text,
                                  const std::set<std::string> &lexicon) {
  return EntityMatcher(lexicon).Find(text);
}

std::string validate_dialog(const Dialog &d) {
  std::set<PatternId> seen;
  for (size_t i = 0; i < d.turns.size(); ++i) {
    const Turn &t = d.turns[i];
    Speaker expected = i % 2 == 0 ? Speaker::kUser : Speaker::kAgent;
    if (t.speaker != expected) {
      return "turn " + std::to_string(i) + " breaks user/agent alternation";
    }
    if (t.text.find_first_of("\r\n") != std::string::npos) {
      return "turn " + std::to_string(i) + " contains a line break";
    }
    if (t.origin.injected()) seen.insert(*t.origin.pattern);
  }
  if (seen != d.applied_patterns) {
    return "applied_patterns does not match injected turn origins";
  }
  return {};
}

Dialog original_only(const Dialog &d) {
  Dialog out;
  out.id = d.id;
  out.domain = d.domain;
  out.payload = d.payload;
  std::vector<int> remap(d.turns.size(), -1);
  int last_kept = -1;
  for (size_t i = 0; i < d.turns.size(); ++i) {
    if (!d.turns[i].origin.injected()) {
      last_kept = static_cast<int>(out.turns.size());
      out.turns.push_back(d.turns[i]);
    }
    remap[i] = last_kept;
  }
  out.kb = d.kb;
  for (KbEntry &e : out.kb.entries) {
    if (e.after_turn >= 0) e.after_turn = remap[static_cast<size_t>(e.after_turn)];
  }
  return out;
}

void rebuild_lexicon(DialogCorpus &c) {
  c.global_entities.clear();
  auto add = [&](std::string_view v) {
    if (SplitWhitespace(v).empty()) return;
    c.global_entities.insert(normalize_entity(v));
  };
  for (const Dialog &d : c.dialogs) {
    for (const KbEntry &e : d.kb.entries) {
      add(e.subject);
      add(e.value);
    }
    for (const Turn &t : d.turns) {
      for (const auto &[key, value] : t.annotations) {
        if (key.rfind("slot.", 0) == 0) add(value);
      }
    }
  }
}

}  // namespace ncfvar
