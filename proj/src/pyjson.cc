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

#include "pyjson.h"

#include <cstdint>

namespace ncfvar::internal {
namespace {

void AppendHex4(std::string &out, uint32_t v) {
  static const char kHex[] = "0123456789abcdef";
  out += "\\u";
  for (int shift = 12; shift >= 0; shift -= 4) out.push_back(kHex[(v >> shift) & 15]);
}

// Decodes one UTF-8 sequence at s[i]; advances i. Invalid bytes decode as
// themselves so output never throws.
uint32_t DecodeUtf8(const std::string &s, size_t &i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : 0;
  if (extra == 0 || i + static_cast<size_t>(extra) >= s.size()) {
    ++i;
    return c;
  }
  uint32_t cp = c & (0x3F >> extra);
  for (int k = 1; k <= extra; ++k) {
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + static_cast<size_t>(k)]) & 0x3F);
  }
  i += static_cast<size_t>(extra) + 1;
  return cp;
}

void AppendString(std::string &out, const std::string &s, bool ensure_ascii) {
  out.push_back('"');
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    switch (c) {
      case '"': out += "\\\""; ++i; continue;
      case '\\': out += "\\\\"; ++i; continue;
      case '\n': out += "\\n"; ++i; continue;
      case '\r': out += "\\r"; ++i; continue;
      case '\t': out += "\\t"; ++i; continue;
      case '\b': out += "\\b"; ++i; continue;
      case '\f': out += "\\f"; ++i; continue;
      default: break;
    }
    if (c < 0x20) {
      AppendHex4(out, c);
      ++i;
    } else if (c < 0x7F) {
      out.push_back(static_cast<char>(c));
      ++i;
    } else if (!ensure_ascii) {
      out.push_back(static_cast<char>(c));
      ++i;
    } else if (c == 0x7F) {
      AppendHex4(out, c);
      ++i;
    } else {
      uint32_t cp = DecodeUtf8(s, i);
      if (cp >= 0x10000) {
        cp -= 0x10000;
        AppendHex4(out, 0xD800 + (cp >> 10));
        AppendHex4(out, 0xDC00 + (cp & 0x3FF));
      } else {
        AppendHex4(out, cp);
      }
    }
  }
  out.push_back('"');
}

void Dump(std::string &out, const Json &v, int indent, int level,
          bool ensure_ascii) {
  auto newline = [&](int lvl) {
    out.push_back('\n');
    out.append(static_cast<size_t>(indent * lvl), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += indent > 0 ? "," : ", ";
        first = false;
        if (indent > 0) newline(level + 1);
        AppendString(out, it.key(), ensure_ascii);
        out += ": ";
        Dump(out, it.value(), indent, level + 1, ensure_ascii);
      }
      if (indent > 0) newline(level);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out.push_back('[');
      bool first = true;
      for (const Json &item : v) {
        if (!first) out += indent > 0 ? "," : ", ";
        first = false;
        if (indent > 0) newline(level + 1);
        Dump(out, item, indent, level + 1, ensure_ascii);
      }
      if (indent > 0) newline(level);
      out.push_back(']');
      return;
    }
    case Json::value_t::string:
      AppendString(out, v.get_ref<const std::string &>(), ensure_ascii);
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string DumpPythonStyle(const Json &value, int indent, bool ensure_ascii) {
  std::string out;
  Dump(out, value, indent, 0, ensure_ascii);
  return out;
}

}  // namespace ncfvar::internal
