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

#ifndef NCFVAR_ENTITY_MATCHER_H_
#define NCFVAR_ENTITY_MATCHER_H_

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ncfvar {

// Precompiled form of entities_in() for repeated lookups against one
// lexicon.
class EntityMatcher {
 public:
  explicit EntityMatcher(const std::set<std::string> &lexicon);

  std::set<std::string> Find(std::string_view text) const;
  bool empty() const { return keys_.empty(); }

 private:
  std::unordered_map<std::string, std::string> keys_;
  size_t max_words_ = 0;
};

}  // namespace ncfvar

#endif  // NCFVAR_ENTITY_MATCHER_H_
