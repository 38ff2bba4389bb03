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

#ifndef NCFVAR_UTIL_H_
#define NCFVAR_UTIL_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace ncfvar {

// Lowercase hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

// Reads a whole file; throws ParseError if it cannot be opened.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view bytes);

// ASCII lowercase. Non-ASCII bytes pass through unchanged.
std::string ToLower(std::string_view s);

// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> SplitWhitespace(std::string_view s);

std::string Join(const std::vector<std::string> &parts, std::string_view sep);

// Round half up, e.g. 57.5 -> 58.
int64_t RoundHalfUp(double x);

// Stable 64-bit string hash (FNV-1a). Used to key random streams.
uint64_t HashString(std::string_view s);

// Deterministic random stream (splitmix64). Bounded draws use rejection
// sampling so results are identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Stream keyed by a seed plus any number of string labels.
  static Rng Keyed(uint64_t seed, std::initializer_list<std::string_view> keys);

  uint64_t Next();

  // Uniform integer in [0, n). n must be > 0.
  uint64_t Below(uint64_t n);

  // Uniform double in [0, 1).
  double Unit();

  template <typename T>
  void Shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace ncfvar

#endif  // NCFVAR_UTIL_H_
