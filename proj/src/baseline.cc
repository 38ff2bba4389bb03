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

#include "ncfvar/baseline.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "ncfvar/error.h"
#include "ncfvar/util.h"

namespace ncfvar {
namespace {

using Vector = std::unordered_map<std::string, double>;

Vector Weigh(const std::vector<std::string> &tokens, const CandidateSet &candidates) {
  Vector v;
  for (const std::string &t : tokens) v[t] += 1.0;
  for (auto &[term, w] : v) w *= candidates.Idf(term);
  return v;
}

double Norm(const Vector &v) {
  double s = 0.0;
  for (const auto &[term, w] : v) s += w * w;
  return std::sqrt(s);
}

double Cosine(const Vector &a, double norm_a, const Vector &b, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  const Vector &small = a.size() <= b.size() ? a : b;
  const Vector &large = a.size() <= b.size() ? b : a;
  double dot = 0.0;
  for (const auto &[term, w] : small) {
    auto it = large.find(term);
    if (it != large.end()) dot += w * it->second;
  }
  return dot / (norm_a * norm_b);
}

std::vector<std::string> HistoryTokens(const std::vector<Turn> &history) {
  std::vector<std::string> out;
  for (const Turn &t : history) {
    std::vector<std::string> words = baseline_tokens(t.text);
    out.insert(out.end(), words.begin(), words.end());
  }
  return out;
}

bool AllIndexed(const std::vector<std::string> &lines) {
  for (const std::string &l : lines) {
    size_t sp = l.find(' ');
    if (sp == 0 || sp == std::string::npos) return false;
    if (!std::all_of(l.begin(), l.begin() + static_cast<long>(sp),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> baseline_tokens(std::string_view text) {
  return SplitWhitespace(ToLower(text));
}

CandidateSet::CandidateSet(std::vector<std::string> responses) {
  std::set<std::string> seen;
  for (std::string &r : responses) {
    if (seen.insert(r).second) responses_.push_back(std::move(r));
  }
  if (responses_.empty()) throw InvalidError("empty candidate set");
  for (const std::string &r : responses_) {
    std::vector<std::string> toks = baseline_tokens(r);
    std::set<std::string> unique(toks.begin(), toks.end());
    for (const std::string &t : unique) ++df_[t];
  }
}

CandidateSet CandidateSet::FromFile(std::string_view bytes) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < bytes.size()) {
    size_t nl = bytes.find('\n', start);
    if (nl == std::string_view::npos) nl = bytes.size();
    std::string line(bytes.substr(start, nl - start));
    start = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
  }
  if (AllIndexed(lines)) {
    for (std::string &l : lines) l = l.substr(l.find(' ') + 1);
  }
  return CandidateSet(std::move(lines));
}

CandidateSet CandidateSet::FromCorpus(const DialogCorpus &corpus) {
  std::vector<std::string> out;
  for (const Dialog &d : corpus.dialogs) {
    for (const Turn &t : d.turns) {
      if (t.speaker == Speaker::kAgent && !t.origin.injected()) out.push_back(t.text);
    }
  }
  return CandidateSet(std::move(out));
}

double CandidateSet::Idf(const std::string &term) const {
  auto it = df_.find(term);
  double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(responses_.size())) / (1.0 + df)) + 1.0;
}

double score(const std::vector<Turn> &history, std::string_view candidate,
             const CandidateSet &candidates) {
  Vector h = Weigh(HistoryTokens(history), candidates);
  Vector c = Weigh(baseline_tokens(candidate), candidates);
  return Cosine(h, Norm(h), c, Norm(c));
}

PredictionSet predict(const DialogCorpus &corpus, const EvalManifest &manifest,
                      const CandidateSet &candidates, int jobs) {
  std::unordered_map<std::string, const Dialog *> by_id;
  for (const Dialog &d : corpus.dialogs) by_id[d.id] = &d;
  for (const ManifestEntry &e : manifest.entries) {
    auto it = by_id.find(e.dialog_id);
    if (it == by_id.end()) throw InvalidError("manifest names unknown dialog " + e.dialog_id);
    if (e.turn_index >= it->second->turns.size()) {
      throw InvalidError("manifest turn index out of range in " + e.dialog_id);
    }
  }

  std::vector<Vector> cand_vecs;
  std::vector<double> cand_norms;
  for (const std::string &r : candidates.responses()) {
    cand_vecs.push_back(Weigh(baseline_tokens(r), candidates));
    cand_norms.push_back(Norm(cand_vecs.back()));
  }

  PredictionSet out;
  out.manifest_digest = manifest_digest(manifest);
  out.responses.resize(manifest.entries.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const ManifestEntry &e = manifest.entries[i];
      const Dialog &d = *by_id.at(e.dialog_id);
      std::vector<Turn> history(d.turns.begin(),
                                d.turns.begin() + static_cast<long>(e.turn_index));
      Vector h = Weigh(HistoryTokens(history), candidates);
      double hn = Norm(h);
      size_t best = 0;
      double best_score = -1.0;
      for (size_t c = 0; c < cand_vecs.size(); ++c) {
        double s = Cosine(h, hn, cand_vecs[c], cand_norms[c]);
        if (s > best_score) {
          best_score = s;
          best = c;
        }
      }
      out.responses[i] = candidates.responses()[best];
    }
  };
  size_t n = manifest.entries.size();
  size_t workers = std::clamp<size_t>(static_cast<size_t>(std::max(jobs, 1)), 1, std::max<size_t>(n, 1));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> threads;
    size_t chunk = (n + workers - 1) / workers;
    for (size_t b = 0; b < n; b += chunk) threads.emplace_back(work, b, std::min(n, b + chunk));
  }
  return out;
}

}  // namespace ncfvar
