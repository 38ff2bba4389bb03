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

#ifndef NCFVAR_ERROR_H_
#define NCFVAR_ERROR_H_

#include <stdexcept>
#include <string>

namespace ncfvar {

// Broad failure classes. The CLI maps each one to a stable exit code.
enum class ErrorKind {
  kUsage,     // bad arguments or configuration
  kParse,     // malformed input file or misaligned inputs
  kPlan,      // planner could not satisfy its targets
  kInvalid,   // precondition violated by a caller
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ParseError(const std::string &what) {
  return Error(ErrorKind::kParse, what);
}
inline Error UsageError(const std::string &what) {
  return Error(ErrorKind::kUsage, what);
}
inline Error PlanError(const std::string &what) {
  return Error(ErrorKind::kPlan, what);
}
inline Error InvalidError(const std::string &what) {
  return Error(ErrorKind::kInvalid, what);
}

}  // namespace ncfvar

#endif  // NCFVAR_ERROR_H_
