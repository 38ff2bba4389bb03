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

#ifndef NCFVAR_SRC_PYJSON_H_
#define NCFVAR_SRC_PYJSON_H_

#include <string>

#include "json.hpp"

namespace ncfvar::internal {

using Json = nlohmann::ordered_json;

// Renders JSON the way Python's json.dumps does, so files written by the
// usual Python tooling round-trip unchanged. indent == 0 selects the
// single-line form with ", " and ": " separators.
std::string DumpPythonStyle(const Json &value, int indent, bool ensure_ascii);

}  // namespace ncfvar::internal

#endif  // NCFVAR_SRC_PYJSON_H_
