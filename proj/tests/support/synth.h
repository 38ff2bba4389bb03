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

#ifndef NCFVAR_TESTS_SUPPORT_SYNTH_H_
#define NCFVAR_TESTS_SUPPORT_SYNTH_H_

// Seeded generators for stand-in corpora shaped like the SMD test file and
// the bAbI dialog task-5 test file.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ncfvar::synth {

struct SmdOptions {
  size_t dialogs = 304;
  // Total turns across the corpus; 0 lets lengths fall where they may.
  size_t utterances = 1626;
  uint64_t seed = 2019;
  int indent = 2;
};

struct BabiOptions {
  size_t dialogs = 1000;
  uint64_t seed = 2019;
};

std::string GenerateSmd(const SmdOptions &opts);
std::string GenerateBabi(const BabiOptions &opts);

// Candidate file ("<n> <response>" per line) with every agent utterance of
// a bAbI corpus, in first-seen order.
std::string BabiCandidates(std::string_view babi_bytes);

}  // namespace ncfvar::synth

#endif  // NCFVAR_TESTS_SUPPORT_SYNTH_H_
