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

#ifndef NCFVAR_CATALOG_H_
#define NCFVAR_CATALOG_H_

// Registry of the conversation-analysis patterns the toolkit knows about.
// Only nine of them carry an injection recipe; the rest are metadata.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncfvar/dialog.h"

namespace ncfvar {

struct PatternCatalogEntry {
  PatternId id;
  std::string ncf_code;     // e.g. "A2.3"
  std::string description;  // display title, e.g. "Open Request Screening"
  bool has_recipe = false;
};

// All 32 entries, ordered by class then code.
const std::vector<PatternCatalogEntry> &list_patterns();

// Lookups accept either the canonical name or the NCF code.
std::optional<PatternCatalogEntry> find_pattern(std::string_view name_or_code);

// Like find_pattern but throws UsageError listing recipe-bearing patterns.
PatternId pattern_id(std::string_view name_or_code);

std::string_view ClassName(PatternClass c);

// Tab-separated catalog dump: code, class, name, has_recipe, description.
std::string catalog_table();

}  // namespace ncfvar

#endif  // NCFVAR_CATALOG_H_
