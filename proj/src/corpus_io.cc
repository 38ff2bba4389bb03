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

#include "ncfvar/corpus_io.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_set>

#include "ncfvar/catalog.h"
#include "ncfvar/error.h"
#include "ncfvar/util.h"
#include "pyjson.h"

namespace ncfvar {

using internal::Json;

namespace {

std::string NormalizeNewlines(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] == '\r') {
      if (i + 1 < bytes.size() && bytes[i + 1] == '\n') continue;
      out.push_back('\n');
      continue;
    }
    out.push_back(bytes[i]);
  }
  return out;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string SingleLine(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

// ---------------------------------------------------------------- bAbI

constexpr const char *kBabiSlots[] = {"cuisine", "location", "party_size",
                                      "price"};

// api_call <cuisine> <location> <party size> <price>
void AnnotateApiCall(Dialog &d, size_t agent_turn) {
  std::vector<std::string> words = SplitWhitespace(d.turns[agent_turn].text);
  if (words.size() != 5 || words[0] != "api_call") return;
  for (size_t k = 0; k < 4; ++k) {
    const std::string key = std::string("slot.") + kBabiSlots[k];
    const std::string &value = words[k + 1];
    d.turns[agent_turn].annotations[key] = value;
    for (size_t i = 0; i < agent_turn; ++i) {
      Turn &t = d.turns[i];
      if (t.speaker != Speaker::kUser) continue;
      std::vector<std::string> toks = SplitWhitespace(t.text);
      if (std::find(toks.begin(), toks.end(), value) != toks.end()) {
        t.annotations[key] = value;
      }
    }
  }
}

struct SidecarLine {
  std::vector<std::pair<size_t, std::string>> injected;
};

std::map<std::string, SidecarLine> ParseSidecar(std::string_view text) {
  std::map<std::string, SidecarLine> out;
  std::string norm = NormalizeNewlines(text);
  size_t lineno = 0;
  for (std::string_view line : SplitLines(norm)) {
    ++lineno;
    if (line.empty()) continue;
    size_t colon = line.find(": ");
    if (colon == std::string_view::npos) {
      if (!line.empty() && line.back() == ':') {
        out[std::string(line.substr(0, line.size() - 1))];
        continue;
      }
      throw ParseError("origin sidecar line " + std::to_string(lineno) +
                       ": expected '<dialog_id>: <indices>'");
    }
    SidecarLine &entry = out[std::string(line.substr(0, colon))];
    std::string rest(line.substr(colon + 2));
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      std::string item = rest.substr(pos, comma - pos);
      pos = comma + 1;
      if (item.empty()) continue;
      size_t sep = item.find(':');
      std::string idx = item.substr(0, sep);
      size_t value = 0;
      auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), value);
      if (ec != std::errc() || ptr != idx.data() + idx.size()) {
        throw ParseError("origin sidecar line " + std::to_string(lineno) +
                         ": bad turn index '" + idx + "'");
      }
      std::string pattern = sep == std::string::npos ? "" : item.substr(sep + 1);
      if (pattern.empty()) {
        throw ParseError("origin sidecar line " + std::to_string(lineno) +
                         ": turn " + idx + " has no pattern name");
      }
      entry.injected.emplace_back(value, pattern);
    }
  }
  return out;
}

void ApplySidecar(DialogCorpus &corpus, std::string_view sidecar) {
  if (sidecar.empty()) return;
  std::map<std::string, SidecarLine> lines = ParseSidecar(sidecar);
  for (Dialog &d : corpus.dialogs) {
    auto it = lines.find(d.id);
    if (it == lines.end()) continue;
    for (const auto &[index, name] : it->second.injected) {
      if (index >= d.turns.size()) {
        throw ParseError("origin sidecar: " + d.id + " has no turn " +
                         std::to_string(index));
      }
      auto entry = find_pattern(name);
      if (!entry) throw ParseError("origin sidecar: unknown pattern " + name);
      d.turns[index].origin = Origin::Injected(entry->id);
      d.applied_patterns.insert(entry->id);
    }
  }
}

// ---------------------------------------------------------------- SMD

Json ParseJsonOrThrow(std::string_view bytes, const std::string &what) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::exception &e) {
    throw ParseError(what + ": " + e.what());
  }
}

FormatHints DetectJsonHints(std::string_view bytes) {
  FormatHints h;
  h.final_newline = !bytes.empty() && bytes.back() == '\n';
  h.json_ensure_ascii = std::none_of(bytes.begin(), bytes.end(), [](char c) {
    return static_cast<unsigned char>(c) >= 0x80;
  });
  size_t open = bytes.find_first_of("[{");
  if (open != std::string_view::npos && open + 1 < bytes.size() &&
      bytes[open + 1] == '\n') {
    size_t i = open + 2;
    int width = 0;
    while (i < bytes.size() && bytes[i] == ' ') {
      ++width;
      ++i;
    }
    h.json_indent = width;
  } else if (open != std::string_view::npos && open + 1 < bytes.size() &&
             bytes[open + 1] != ']' && bytes[open + 1] != '}') {
    h.json_indent = 0;
  }
  return h;
}

std::string SmdSpeakerTag(Speaker s) {
  return s == Speaker::kUser ? "driver" : "assistant";
}

Turn ParseSmdTurn(const Json &obj, size_t dialog_index, size_t turn_index) {
  auto fail = [&](const std::string &why) {
    return ParseError("dialog " + std::to_string(dialog_index) + " turn " +
                      std::to_string(turn_index) + ": malformed turn object (" +
                      why + ")");
  };
  if (!obj.is_object()) throw fail("not an object");
  auto tag = obj.find("turn");
  if (tag == obj.end() || !tag->is_string()) throw fail("missing 'turn'");
  Turn t;
  if (*tag == "driver") {
    t.speaker = Speaker::kUser;
  } else if (*tag == "assistant") {
    t.speaker = Speaker::kAgent;
  } else {
    throw fail("unknown speaker '" + tag->get<std::string>() + "'");
  }
  auto data = obj.find("data");
  if (data == obj.end() || !data->is_object()) throw fail("missing 'data'");
  auto utt = data->find("utterance");
  if (utt == data->end() || !utt->is_string()) throw fail("missing 'utterance'");
  t.text = SingleLine(utt->get<std::string>());
  if (auto slots = data->find("slots"); slots != data->end() && slots->is_object()) {
    for (auto it = slots->begin(); it != slots->end(); ++it) {
      if (it.value().is_string()) {
        t.annotations["slot." + it.key()] = it.value().get<std::string>();
      }
    }
  }
  if (auto req = data->find("requested"); req != data->end() && req->is_object()) {
    std::vector<std::string> keys;
    for (auto it = req->begin(); it != req->end(); ++it) {
      if (it.value().is_boolean() && it.value().get<bool>()) keys.push_back(it.key());
    }
    if (!keys.empty()) t.annotations["requested"] = Join(keys, ",");
  }
  if (auto inj = obj.find("injected"); inj != obj.end() && inj->is_boolean() &&
                                       inj->get<bool>()) {
    auto pat = obj.find("pattern");
    if (pat == obj.end() || !pat->is_string()) throw fail("injected turn without 'pattern'");
    auto entry = find_pattern(pat->get<std::string>());
    if (!entry) throw fail("unknown pattern '" + pat->get<std::string>() + "'");
    t.origin = Origin::Injected(entry->id);
  }
  t.payload = obj.dump();
  return t;
}

void ParseSmdKb(const Json &scenario, Dialog &d) {
  auto kb = scenario.find("kb");
  if (kb == scenario.end() || !kb->is_object()) return;
  auto items = kb->find("items");
  if (items == kb->end() || !items->is_array()) return;
  std::string subject_column;
  if (auto cols = kb->find("column_names");
      cols != kb->end() && cols->is_array() && !cols->empty() &&
      (*cols)[0].is_string()) {
    subject_column = (*cols)[0].get<std::string>();
  }
  for (const Json &item : *items) {
    if (!item.is_object()) continue;
    std::string subject;
    if (auto s = item.find(subject_column);
        !subject_column.empty() && s != item.end() && s->is_string()) {
      subject = s->get<std::string>();
    } else {
      for (auto it = item.begin(); it != item.end(); ++it) {
        if (it.value().is_string() && !SplitWhitespace(it.value().get<std::string>()).empty()) {
          subject = it.value().get<std::string>();
          break;
        }
      }
    }
    if (SplitWhitespace(subject).empty()) continue;
    std::string canonical_subject = normalize_entity(subject);
    for (auto it = item.begin(); it != item.end(); ++it) {
      if (!it.value().is_string()) continue;
      const std::string &value = it.value().get_ref<const std::string &>();
      if (SplitWhitespace(value).empty()) continue;
      d.kb.entries.push_back(
          KbEntry{canonical_subject, it.key(), normalize_entity(value), "", -1});
    }
  }
}

Json SynthesizeSmdTurn(const Turn &t) {
  Json obj = Json::object();
  obj["turn"] = SmdSpeakerTag(t.speaker);
  Json data = Json::object();
  data["end_dialogue"] = false;
  Json slots = Json::object();
  for (const auto &[key, value] : t.annotations) {
    if (key.rfind("slot.", 0) == 0) slots[key.substr(5)] = value;
  }
  if (auto it = t.annotations.find("requested"); it != t.annotations.end()) {
    Json req = Json::object();
    size_t pos = 0;
    const std::string &list = it->second;
    while (pos <= list.size()) {
      size_t comma = list.find(',', pos);
      if (comma == std::string::npos) comma = list.size();
      if (comma > pos) req[list.substr(pos, comma - pos)] = true;
      pos = comma + 1;
    }
    data["requested"] = req;
  }
  if (!slots.empty()) data["slots"] = slots;
  data["utterance"] = t.text;
  obj["data"] = data;
  if (t.origin.injected()) {
    obj["injected"] = true;
    obj["pattern"] = t.origin.pattern->name;
  }
  return obj;
}

Json SynthesizeSmdDialog(const Dialog &d) {
  Json items = Json::array();
  Json columns = Json::array();
  std::string current;
  Json item;
  auto flush = [&] {
    if (!item.is_null()) {
      if (columns.empty()) {
        for (auto it = item.begin(); it != item.end(); ++it) columns.push_back(it.key());
      }
      items.push_back(item);
    }
  };
  for (const KbEntry &e : d.kb.entries) {
    if (e.subject != current || item.is_null()) {
      flush();
      item = Json::object();
      current = e.subject;
    }
    item[e.attribute] = e.value;
  }
  flush();
  Json kb = Json::object();
  kb["items"] = items;
  kb["column_names"] = columns;
  Json scenario = Json::object();
  scenario["kb"] = kb;
  scenario["task"] = Json{{"intent", std::string(DomainName(d.domain))}};
  scenario["uuid"] = d.id;
  Json out = Json::object();
  out["dialogue"] = Json::array();
  out["scenario"] = scenario;
  return out;
}

std::string SerializeSmd(const DialogCorpus &corpus) {
  Json root = Json::array();
  for (const Dialog &d : corpus.dialogs) {
    Json obj = d.payload.empty() ? SynthesizeSmdDialog(d) : Json::parse(d.payload);
    Json turns = Json::array();
    for (const Turn &t : d.turns) {
      turns.push_back(t.payload.empty() ? SynthesizeSmdTurn(t) : Json::parse(t.payload));
    }
    obj["dialogue"] = std::move(turns);
    root.push_back(std::move(obj));
  }
  std::string out = internal::DumpPythonStyle(root, corpus.hints.json_indent,
                                              corpus.hints.json_ensure_ascii);
  if (corpus.hints.final_newline) out.push_back('\n');
  return out;
}

std::string SerializeBabi(const DialogCorpus &corpus) {
  std::string out;
  for (size_t di = 0; di < corpus.dialogs.size(); ++di) {
    const Dialog &d = corpus.dialogs[di];
    if (d.turns.size() % 2 != 0) {
      throw InvalidError("bAbI dialog " + d.id +
                         " has an odd number of turns and cannot be paired");
    }
    if (di > 0) out.push_back('\n');
    size_t index = 1;
    auto emit_kb = [&](int after) {
      for (const KbEntry &e : d.kb.entries) {
        int anchor = e.after_turn;
        if (anchor >= 0 && anchor % 2 == 0) ++anchor;  // mid-line: after the pair
        if (anchor != after) continue;
        std::string body = e.raw.empty() ? e.subject + " " + e.attribute + " " + e.value
                                         : e.raw;
        out += std::to_string(index++) + " " + body + "\n";
      }
    };
    emit_kb(-1);
    for (size_t i = 0; i < d.turns.size(); i += 2) {
      out += std::to_string(index++) + " " + d.turns[i].text + "\t" +
             d.turns[i + 1].text + "\n";
      emit_kb(static_cast<int>(i + 1));
    }
  }
  if (!corpus.dialogs.empty() && corpus.hints.trailing_blank_line) out.push_back('\n');
  if (!corpus.hints.final_newline && !out.empty() && out.back() == '\n') out.pop_back();
  if (!corpus.hints.crlf) return out;
  std::string crlf;
  crlf.reserve(out.size() + out.size() / 16);
  for (char c : out) {
    if (c == '\n') crlf.push_back('\r');
    crlf.push_back(c);
  }
  return crlf;
}

}  // namespace

DialogCorpus parse_babi(std::string_view bytes, std::string_view sidecar) {
  DialogCorpus corpus;
  corpus.source_format = SourceFormat::kBabi;
  std::string text = NormalizeNewlines(bytes);
  size_t first_nl = bytes.find('\n');
  corpus.hints.crlf = first_nl != std::string_view::npos && first_nl > 0 && bytes[first_nl - 1] == '\r';
  corpus.hints.final_newline = !text.empty() && text.back() == '\n';
  corpus.hints.trailing_blank_line =
      text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n';

  Dialog current;
  size_t expected_index = 1;
  bool open = false;
  auto close = [&] {
    if (!open) return;
    for (size_t i = 0; i < current.turns.size(); ++i) {
      if (current.turns[i].speaker == Speaker::kAgent) AnnotateApiCall(current, i);
    }
    current.id = "babi-" + std::to_string(corpus.dialogs.size());
    corpus.dialogs.push_back(std::move(current));
    current = Dialog{};
    open = false;
    expected_index = 1;
  };

  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (line.empty()) {
      close();
      continue;
    }
    size_t space = line.find(' ');
    size_t index = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + std::min(space, line.size()), index);
    if (space == std::string_view::npos || ec != std::errc() ||
        ptr != line.data() + space) {
      throw ParseError("line " + std::to_string(lineno) + ": missing line index");
    }
    if (index != expected_index) {
      throw ParseError("line " + std::to_string(lineno) + ": non-monotone line index " +
                       std::to_string(index) + " (expected " +
                       std::to_string(expected_index) + ")");
    }
    ++expected_index;
    open = true;
    current.domain = Domain::kRestaurant;
    std::string_view rest = line.substr(space + 1);
    size_t tab = rest.find('\t');
    if (tab != std::string_view::npos) {
      Turn user{Speaker::kUser, std::string(rest.substr(0, tab)), Origin::Original(), {}, {}};
      Turn agent{Speaker::kAgent, std::string(rest.substr(tab + 1)), Origin::Original(), {}, {}};
      current.turns.push_back(std::move(user));
      current.turns.push_back(std::move(agent));
      continue;
    }
    std::vector<std::string> toks = SplitWhitespace(rest);
    if (toks.size() != 3) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected '<user>\\t<agent>' or a three-field KB fact");
    }
    current.kb.entries.push_back(KbEntry{normalize_entity(toks[0]), toks[1],
                                         normalize_entity(toks[2]), std::string(rest),
                                         static_cast<int>(current.turns.size()) - 1});
  }
  close();
  ApplySidecar(corpus, sidecar);
  rebuild_lexicon(corpus);
  return corpus;
}

DialogCorpus parse_smd(std::string_view bytes) {
  DialogCorpus corpus;
  corpus.source_format = SourceFormat::kSmd;
  corpus.hints = DetectJsonHints(bytes);
  Json root = ParseJsonOrThrow(bytes, "SMD file is not valid JSON");
  if (!root.is_array()) throw ParseError("SMD file must hold a JSON array");
  std::vector<std::string> native_ids;
  for (size_t di = 0; di < root.size(); ++di) {
    const Json &obj = root[di];
    auto prefix = "dialog " + std::to_string(di) + ": ";
    if (!obj.is_object()) throw ParseError(prefix + "not an object");
    auto turns = obj.find("dialogue");
    if (turns == obj.end() || !turns->is_array()) {
      throw ParseError(prefix + "missing 'dialogue' array");
    }
    auto scenario = obj.find("scenario");
    if (scenario == obj.end() || !scenario->is_object()) {
      throw ParseError(prefix + "missing 'scenario'");
    }
    Dialog d;
    std::string intent;
    if (auto task = scenario->find("task"); task != scenario->end() && task->is_object()) {
      if (auto it = task->find("intent"); it != task->end() && it->is_string()) {
        intent = it->get<std::string>();
      }
    }
    auto domain = ParseDomainName(intent);
    if (!domain || *domain == Domain::kRestaurant) {
      throw ParseError(prefix + "unknown domain '" + intent + "'");
    }
    d.domain = *domain;
    for (size_t ti = 0; ti < turns->size(); ++ti) {
      d.turns.push_back(ParseSmdTurn((*turns)[ti], di, ti));
      if (d.turns.back().origin.injected()) {
        d.applied_patterns.insert(*d.turns.back().origin.pattern);
      }
    }
    ParseSmdKb(*scenario, d);
    std::string uuid;
    if (auto it = scenario->find("uuid"); it != scenario->end() && it->is_string()) {
      uuid = it->get<std::string>();
    }
    native_ids.push_back(uuid);
    Json shell = obj;
    shell["dialogue"] = Json::array();
    d.payload = shell.dump();
    corpus.dialogs.push_back(std::move(d));
  }
  // Native ids are used only if every dialog has a distinct one.
  std::unordered_set<std::string> distinct(native_ids.begin(), native_ids.end());
  bool use_native = distinct.size() == native_ids.size() && !distinct.count("");
  for (size_t i = 0; i < corpus.dialogs.size(); ++i) {
    corpus.dialogs[i].id = use_native ? native_ids[i] : "smd-" + std::to_string(i);
  }
  rebuild_lexicon(corpus);
  return corpus;
}

DialogCorpus parse_corpus(SourceFormat format, std::string_view bytes,
                          std::string_view sidecar) {
  if (format == SourceFormat::kBabi) return parse_babi(bytes, sidecar);
  return parse_smd(bytes);
}

std::string serialize(const DialogCorpus &corpus) {
  return corpus.source_format == SourceFormat::kBabi ? SerializeBabi(corpus)
                                                     : SerializeSmd(corpus);
}

std::string origin_sidecar(const DialogCorpus &corpus) {
  std::string out;
  for (const Dialog &d : corpus.dialogs) {
    out += d.id + ":";
    bool first = true;
    for (size_t i = 0; i < d.turns.size(); ++i) {
      if (!d.turns[i].origin.injected()) continue;
      out += first ? " " : ",";
      first = false;
      out += std::to_string(i) + ":" + d.turns[i].origin.pattern->name;
    }
    out += "\n";
  }
  return out;
}

std::string corpus_checksum(const DialogCorpus &corpus) {
  return Sha256Hex(serialize(corpus));
}

EvalManifest export_manifest(const DialogCorpus &corpus) {
  EvalManifest m;
  m.corpus_tag = std::string(FormatName(corpus.source_format));
  for (const Dialog &d : corpus.dialogs) {
    for (size_t i = 0; i < d.turns.size(); ++i) {
      const Turn &t = d.turns[i];
      if (t.speaker == Speaker::kAgent && !t.origin.injected()) {
        m.entries.push_back(ManifestEntry{d.id, i, t.text});
      }
    }
  }
  return m;
}

std::string manifest_to_tsv(const EvalManifest &m) {
  std::string out = "# corpus_tag: " + m.corpus_tag + "\n";
  for (const ManifestEntry &e : m.entries) {
    out += e.dialog_id + "\t" + std::to_string(e.turn_index) + "\t" + e.gold_text + "\n";
  }
  return out;
}

EvalManifest manifest_from_tsv(std::string_view bytes) {
  EvalManifest m;
  std::string text = NormalizeNewlines(bytes);
  size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kTag = "# corpus_tag: ";
      if (line.substr(0, kTag.size()) == kTag) m.corpus_tag = std::string(line.substr(kTag.size()));
      continue;
    }
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ParseError("manifest line " + std::to_string(lineno) + ": expected 3 fields");
    }
    ManifestEntry e;
    e.dialog_id = std::string(line.substr(0, t1));
    std::string_view idx = line.substr(t1 + 1, t2 - t1 - 1);
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), e.turn_index);
    if (ec != std::errc() || ptr != idx.data() + idx.size()) {
      throw ParseError("manifest line " + std::to_string(lineno) + ": bad turn index");
    }
    e.gold_text = std::string(line.substr(t2 + 1));
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::string manifest_digest(const EvalManifest &m) {
  std::string text;
  for (const ManifestEntry &e : m.entries) text += e.dialog_id + "\t" + e.gold_text + "\n";
  return Sha256Hex(text);
}

size_t find_invalid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t extra;
    uint32_t min;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      min = 0x10000;
    } else {
      return i;
    }
    if (i + extra >= s.size()) return i;
    uint32_t cp = c & (0x3F >> extra);
    for (size_t k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += extra + 1;
  }
  return std::string_view::npos;
}

PredictionSet read_predictions(std::string_view bytes, const EvalManifest &manifest) {
  if (size_t bad = find_invalid_utf8(bytes); bad != std::string_view::npos) {
    throw ParseError("predictions: invalid UTF-8 at byte offset " + std::to_string(bad));
  }
  PredictionSet p;
  p.manifest_digest = manifest_digest(manifest);
  std::string text = NormalizeNewlines(bytes);
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    p.responses.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (p.responses.size() != manifest.entries.size()) {
    throw ParseError("expected " + std::to_string(manifest.entries.size()) +
                     " predictions, got " + std::to_string(p.responses.size()));
  }
  return p;
}

std::string write_predictions(const PredictionSet &p) {
  std::string out;
  for (const std::string &r : p.responses) out += SingleLine(r) + "\n";
  return out;
}

}  // namespace ncfvar
