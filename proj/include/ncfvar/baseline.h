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

#ifndef NCFVAR_BASELINE_H_
#define NCFVAR_BASELINE_H_

// TF-IDF retrieval baseline: picks, for each manifest entry, the candidate
// response closest to the dialog history.

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ncfvar/corpus_io.h"
#include "ncfvar/dialog.h"

namespace ncfvar {

class CandidateSet {
 public:
  // Deduplicates, keeping first occurrences. Throws on an empty list.
  explicit CandidateSet(std::vector<std::string> responses);

  // One candidate per line. A leading "<n> " index is dropped when every
  // line carries one (bAbI candidate files).
  static CandidateSet FromFile(std::string_view bytes);
  // The original agent responses of a corpus.
  static CandidateSet FromCorpus(const DialogCorpus &corpus);

  const std::vector<std::string> &responses() const { return responses_; }
  size_t size() const { return responses_.size(); }

  // Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
  double Idf(const std::string &term) const;

 private:
  std::vector<std::string> responses_;
  std::unordered_map<std::string, size_t> df_;
};

std::vector<std::string> baseline_tokens(std::string_view text);

// Cosine similarity of tf-idf vectors. Zero when either side is empty.
double score(const std::vector<Turn> &history, std::string_view candidate,
             const CandidateSet &candidates);

PredictionSet predict(const DialogCorpus &corpus, const EvalManifest &manifest,
                      const CandidateSet &candidates, int jobs = 1);

}  // namespace ncfvar

#endif  // NCFVAR_BASELINE_H_
