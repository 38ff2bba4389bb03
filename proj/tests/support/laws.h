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

#ifndef NCFVAR_TESTS_SUPPORT_LAWS_H_
#define NCFVAR_TESTS_SUPPORT_LAWS_H_

// Pattern-engine laws checked against inject() output, written without
// reference to the engine's own helpers.

#include <string>

#include "ncfvar/dialog.h"
#include "ncfvar/patterns.h"

namespace ncfvar::laws {

// Empty when `after = inject(before, recipe, ...)` satisfies the turn-count
// law, the original-subsequence law, and alternation; otherwise the first
// violation.
inline std::string Check(const Dialog &before, const Dialog &after, const PatternRecipe &recipe) {
  if (after.turns.size() != before.turns.size() + static_cast<size_t>(recipe.added_turn_count)) {
    return "turn-count law: " + std::to_string(before.turns.size()) + " + " +
           std::to_string(recipe.added_turn_count) + " != " + std::to_string(after.turns.size());
  }
  // Dropping this recipe's turns must give back `before` exactly, in order.
  std::vector<const Turn *> kept;
  size_t added = 0;
  for (const Turn &t : after.turns) {
    if (t.origin.injected() && *t.origin.pattern == recipe.id &&
        !before.applied_patterns.count(recipe.id)) {
      ++added;
      continue;
    }
    kept.push_back(&t);
  }
  if (added != static_cast<size_t>(recipe.added_turn_count)) return "added turns not marked";
  if (kept.size() != before.turns.size()) return "original-subsequence law: length";
  for (size_t i = 0; i < kept.size(); ++i) {
    if (!(*kept[i] == before.turns[i])) {
      return "original-subsequence law: turn " + std::to_string(i) + " changed";
    }
  }
  if (!after.turns.empty() && after.turns[0].speaker != Speaker::kUser) {
    return "alternation: first turn is not the user";
  }
  for (size_t i = 1; i < after.turns.size(); ++i) {
    if (after.turns[i].speaker == after.turns[i - 1].speaker) {
      return "alternation: turns " + std::to_string(i - 1) + " and " + std::to_string(i);
    }
  }
  if (!after.applied_patterns.count(recipe.id)) return "pattern not recorded";
  return "";
}

}  // namespace ncfvar::laws

#endif  // NCFVAR_TESTS_SUPPORT_LAWS_H_
