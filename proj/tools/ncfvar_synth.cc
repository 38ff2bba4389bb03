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

// Writes the seeded stand-in corpora used by the acceptance suite.
//
//   ncfvar_synth smd  [--dialogs N] [--utterances N] [--seed S] OUT
//   ncfvar_synth babi [--dialogs N] [--seed S] OUT
//   ncfvar_synth babi-candidates BABI_FILE OUT

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ncfvar/util.h"
#include "synth.h"

int main(int argc, char **argv) {
  CLI::App app{"Generate stand-in dialog corpora"};
  app.require_subcommand(1);
  std::string out;

  ncfvar::synth::SmdOptions smd;
  CLI::App *smd_cmd = app.add_subcommand("smd", "SMD-format corpus");
  smd_cmd->add_option("--dialogs", smd.dialogs);
  smd_cmd->add_option("--utterances", smd.utterances);
  smd_cmd->add_option("--seed", smd.seed);
  smd_cmd->add_option("output", out)->required();

  ncfvar::synth::BabiOptions babi;
  CLI::App *babi_cmd = app.add_subcommand("babi", "bAbI task-5 corpus");
  babi_cmd->add_option("--dialogs", babi.dialogs);
  babi_cmd->add_option("--seed", babi.seed);
  babi_cmd->add_option("output", out)->required();

  std::string source;
  CLI::App *cand_cmd = app.add_subcommand("babi-candidates", "Candidate file for a bAbI corpus");
  cand_cmd->add_option("input", source)->required();
  cand_cmd->add_option("output", out)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (smd_cmd->parsed()) ncfvar::WriteFile(out, ncfvar::synth::GenerateSmd(smd));
    if (babi_cmd->parsed()) ncfvar::WriteFile(out, ncfvar::synth::GenerateBabi(babi));
    if (cand_cmd->parsed()) {
      ncfvar::WriteFile(out, ncfvar::synth::BabiCandidates(ncfvar::ReadFile(source)));
    }
  } catch (const std::exception &e) {
    std::cerr << "ncfvar_synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
