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

#ifndef NCFVAR_CORPUS_IO_H_
#define NCFVAR_CORPUS_IO_H_

// Readers and writers for the bAbI dialog-task text format, the SMD JSON
// format, origin sidecars, evaluation manifests, and prediction files.
//
// Un-injected corpora round-trip byte for byte. Injected turns are marked
// in-band for SMD ("injected"/"pattern" fields on the turn object) and in
// a sidecar for bAbI.

#include <string>
#include <string_view>
#include <vector>

#include "ncfvar/dialog.h"

namespace ncfvar {

// bAbI dialog-task text. `origin_sidecar`, when non-empty, marks injected
// turns (see origin_sidecar()).
DialogCorpus parse_babi(std::string_view bytes,
                        std::string_view origin_sidecar = {});

DialogCorpus parse_smd(std::string_view bytes);

DialogCorpus parse_corpus(SourceFormat format, std::string_view bytes,
                          std::string_view origin_sidecar = {});

std::string serialize(const DialogCorpus &corpus);

// One line per dialog: "<dialog_id>: <i>:<pattern>,<j>:<pattern>".
std::string origin_sidecar(const DialogCorpus &corpus);

// SHA-256 of the serialized corpus.
std::string corpus_checksum(const DialogCorpus &corpus);

struct ManifestEntry {
  std::string dialog_id;
  size_t turn_index = 0;
  std::string gold_text;

  bool operator==(const ManifestEntry &) const = default;
};

// The original agent responses of a corpus, in corpus order. Injected
// turns never appear here, so a manifest is stable under injection up to
// turn indices.
struct EvalManifest {
  std::vector<ManifestEntry> entries;
  std::string corpus_tag;
};

EvalManifest export_manifest(const DialogCorpus &corpus);

// "# corpus_tag: <tag>" header, then dialog_id<TAB>turn_index<TAB>gold_text.
std::string manifest_to_tsv(const EvalManifest &m);
EvalManifest manifest_from_tsv(std::string_view bytes);
// Digest of the (dialog_id, gold_text) sequence. Turn indices are left out
// so a manifest and its post-injection counterpart share one digest.
std::string manifest_digest(const EvalManifest &m);

struct PredictionSet {
  std::vector<std::string> responses;
  std::string manifest_digest;
};

// One prediction per line, aligned to manifest order.
PredictionSet read_predictions(std::string_view bytes,
                               const EvalManifest &manifest);
std::string write_predictions(const PredictionSet &p);

// Byte offset of the first invalid UTF-8 sequence, or npos.
size_t find_invalid_utf8(std::string_view bytes);

}  // namespace ncfvar

#endif  // NCFVAR_CORPUS_IO_H_
