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

#ifndef NCFVAR_DIALOG_H_
#define NCFVAR_DIALOG_H_

// In-memory model of goal-oriented dialogs shared by every other module.
//
// A Dialog is an ordered list of speaker-tagged turns, one utterance per
// turn. Each turn records whether it came from the source corpus or was
// injected by a pattern recipe, which is what masked evaluation keys off.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ncfvar {

enum class Speaker { kUser, kAgent };

enum class Domain { kSchedule, kWeather, kNavigate, kRestaurant };

enum class SourceFormat { kBabi, kSmd };

enum class PatternClass { kA, kB, kC };

std::string_view SpeakerName(Speaker s);
std::string_view DomainName(Domain d);
std::string_view FormatName(SourceFormat f);
// Throws UsageError for unknown names.
SourceFormat ParseFormatName(std::string_view name);
std::optional<Domain> ParseDomainName(std::string_view name);

struct PatternId {
  PatternClass cls = PatternClass::kA;
  std::string name;

  auto operator<=>(const PatternId &) const = default;
  bool operator==(const PatternId &) const = default;
};

// Original turns come from the source corpus; injected turns name the
// pattern that produced them.
struct Origin {
  std::optional<PatternId> pattern;

  static Origin Original() { return {}; }
  static Origin Injected(PatternId id) { return Origin{std::move(id)}; }

  bool injected() const { return pattern.has_value(); }
  bool operator==(const Origin &) const = default;
};

// Free-form annotations. Parsers use "slot.<name>" for slot values and
// "requested" for a comma-joined list of requested attributes.
using Annotations = std::map<std::string, std::string>;

struct Turn {
  Speaker speaker = Speaker::kUser;
  std::string text;
  Origin origin;
  Annotations annotations;
  // Verbatim source record (SMD turn object) used for lossless output.
  // Not part of value equality.
  std::string payload;

  bool operator==(const Turn &o) const {
    return speaker == o.speaker && text == o.text && origin == o.origin &&
           annotations == o.annotations;
  }
};

struct KbEntry {
  std::string subject;    // canonical entity
  std::string attribute;  // attribute name as found in the source
  std::string value;      // canonical entity
  // bAbI only: source line (without index) and the index of the turn the
  // fact line follows; -1 means it precedes every turn.
  std::string raw;
  int after_turn = -1;

  bool operator==(const KbEntry &) const = default;
};

struct KbRecord {
  std::vector<KbEntry> entries;
  bool operator==(const KbRecord &) const = default;
};

struct Dialog {
  std::string id;
  Domain domain = Domain::kRestaurant;
  std::vector<Turn> turns;
  KbRecord kb;
  std::set<PatternId> applied_patterns;
  // SMD: verbatim dialogue object. Not part of value equality.
  std::string payload;

  bool operator==(const Dialog &o) const {
    return id == o.id && domain == o.domain && turns == o.turns &&
           kb == o.kb && applied_patterns == o.applied_patterns;
  }
};

// Source layout details needed to reproduce an input byte for byte.
struct FormatHints {
  // bAbI: file ends with a blank line after the last dialog.
  bool trailing_blank_line = true;
  // Both: file ends with a newline.
  bool final_newline = true;
  // bAbI: lines end in "\r\n".
  bool crlf = false;
  // SMD: indentation width; 0 means single-line Python-style separators.
  int json_indent = 2;
  bool json_ensure_ascii = true;

  bool operator==(const FormatHints &) const = default;
};

struct DialogCorpus {
  std::vector<Dialog> dialogs;
  SourceFormat source_format = SourceFormat::kBabi;
  std::set<std::string> global_entities;
  FormatHints hints;

  bool operator==(const DialogCorpus &o) const {
    return dialogs == o.dialogs && source_format == o.source_format &&
           global_entities == o.global_entities;
  }
};

size_t utterance_count(const Dialog &d);

// Mean utterances per dialog; 0 for an empty corpus.
double mean_utterances(const DialogCorpus &c);

// Lowercase, trim, and collapse internal whitespace runs into "_".
// Throws InvalidError("empty entity") when nothing remains.
std::string normalize_entity(std::string_view s);

// Lexicon members found in text on token-aligned spans, longest match
// first, each span consumed at most once.
std::set<std::string> entities_in(std::string_view text,
                                  const std::set<std::string> &lexicon);

// Tokens used for entity matching: lowercase, whitespace split, surrounding
// punctuation stripped. Underscores split entity names into tokens.
std::vector<std::string> entity_tokens(std::string_view s);

// Checks alternation (User first, strict U/A alternation) and that
// applied_patterns matches the injected origins. Returns an empty string
// when valid, otherwise a description of the first violation.
std::string validate_dialog(const Dialog &d);

// The dialog restricted to its original turns, with applied_patterns
// cleared and KB fact positions remapped.
Dialog original_only(const Dialog &d);

// Recomputes global_entities from KBs and slot annotations.
void rebuild_lexicon(DialogCorpus &c);

}  // namespace ncfvar

#endif  // NCFVAR_DIALOG_H_
