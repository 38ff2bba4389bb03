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

#include <gtest/gtest.h>

#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/planner.h"
#include "synth.h"
#include "test_support.h"

namespace ncfvar {
namespace {

using testing::MakeCorpus;
using testing::MakeDialog;

const DialogCorpus &SmallSmd() {
  static const DialogCorpus c = parse_smd(synth::GenerateSmd({60, 0, 8, 2}));
  return c;
}

std::map<std::string, int> Counts(const DialogCorpus &c) {
  std::map<std::string, int> out;
  for (const Dialog &d : c.dialogs) {
    for (const PatternId &p : d.applied_patterns) ++out[p.name];
  }
  return out;
}

TEST(Plan, ZeroTargetsGiveEmptyPlanAndIdentity) {
  PlanConfig cfg;
  InjectionPlan p = plan(SmallSmd(), cfg);
  EXPECT_TRUE(p.assignments.empty());
  DialogCorpus out = execute(SmallSmd(), p, cfg.seed);
  EXPECT_EQ(serialize(out), serialize(SmallSmd()));
}

TEST(Plan, ExactCountsWhenFeasible) {
  PlanConfig cfg;
  cfg.targets = {{"open_request_screening", 10}, {"capability_expansion", 12},
                 {"recipient_correction", 7}, {"sequence_closer_repaired", 9}};
  InjectionPlan p = plan(SmallSmd(), cfg);
  DialogCorpus out = execute(SmallSmd(), p, cfg.seed);
  auto counts = Counts(out);
  for (const auto &[name, target] : cfg.targets) EXPECT_EQ(counts[name], target) << name;
  for (const Dialog &d : out.dialogs) {
    EXPECT_LE(static_cast<int>(d.applied_patterns.size()), cfg.max_patterns_per_dialog);
    EXPECT_EQ(validate_dialog(d), "");
  }
}

TEST(Plan, ShortfallIsLoud) {
  std::vector<Dialog> ds;
  for (int i = 0; i < 10; ++i) {
    // Only the first three dialogs have a user turn at index >= 2.
    ds.push_back(i < 3 ? MakeDialog("d" + std::to_string(i), Domain::kWeather, {"u", "a", "u", "a"})
                       : MakeDialog("d" + std::to_string(i), Domain::kWeather, {"u", "a"}));
  }
  DialogCorpus c = MakeCorpus(SourceFormat::kSmd, ds);
  PlanConfig cfg;
  cfg.targets = {{"recipient_correction", 5}};
  try {
    plan(c, cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPlan);
    EXPECT_NE(std::string(e.what()).find("eligible 3 < target 5"), std::string::npos) << e.what();
  }
  cfg.allow_shortfall = true;
  InjectionPlan p = plan(c, cfg);
  ASSERT_EQ(p.shortfalls.size(), 1u);
  EXPECT_EQ(p.shortfalls[0].eligible, 3);
  EXPECT_EQ(p.assignments.size(), 3u);
}

TEST(Plan, NotApplicablePattern) {
  PlanConfig cfg;
  cfg.targets = {{"open_request_user_detail_request", 1}};
  try {
    plan(SmallSmd(), cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUsage);
    EXPECT_NE(std::string(e.what()).find("pattern not applicable to smd"), std::string::npos);
  }
}

TEST(Plan, SeedChangesChoiceNotCounts) {
  PlanConfig a;
  a.targets = {{"capability_expansion", 20}};
  PlanConfig b = a;
  b.seed = 2;
  InjectionPlan pa = plan(SmallSmd(), a), pb = plan(SmallSmd(), b);
  EXPECT_EQ(pa.assignments.size(), pb.assignments.size());
  EXPECT_NE(plan_dump(pa), plan_dump(pb));
  EXPECT_EQ(plan_dump(pa), plan_dump(plan(SmallSmd(), a)));
}

TEST(Execute, JobsDoNotChangeOutput) {
  PlanConfig cfg = preset_config("smd-table1");
  for (auto &[name, t] : cfg.targets) t = t / 6;
  cfg.histogram_targets.clear();
  InjectionPlan p = plan(SmallSmd(), cfg);
  std::string one = serialize(execute(SmallSmd(), p, cfg.seed, 1));
  EXPECT_EQ(serialize(execute(SmallSmd(), p, cfg.seed, 4)), one);
  EXPECT_EQ(serialize(execute(SmallSmd(), p, cfg.seed, 13)), one);
}

TEST(Execute, RejectsForeignPlan) {
  PlanConfig cfg;
  cfg.targets = {{"capability_expansion", 2}};
  InjectionPlan p = plan(SmallSmd(), cfg);
  DialogCorpus other = parse_smd(synth::GenerateSmd({5, 0, 99, 2}));
  EXPECT_THROW(execute(other, p, cfg.seed), Error);
}

// Mean after a single-pattern ablation: original mean + count * added / n.
TEST(Ablate, MeanFollowsArithmetic) {
  PlanConfig cfg;
  cfg.targets = {{"capability_expansion", 15}, {"other_correction", 6}};
  const DialogCorpus &c = SmallSmd();
  double base = mean_utterances(c);
  double n = static_cast<double>(c.dialogs.size());
  EXPECT_NEAR(mean_utterances(ablate(c, cfg, "capability_expansion")), base + 15 * 10 / n, 1e-12);
  EXPECT_NEAR(mean_utterances(ablate(c, cfg, "other_correction")), base + 6 * 2 / n, 1e-12);
  EXPECT_THROW(ablate(c, cfg, "open_request_user_detail_request"), Error);
}

TEST(Histogram, Definition) {
  DialogCorpus c = MakeCorpus(SourceFormat::kSmd, {MakeDialog("a", Domain::kWeather, {"u", "a"})});
  auto h0 = overlap_histogram(c);
  for (const auto &[k, n] : h0) EXPECT_EQ(n, 0) << k;
  c.dialogs[0].applied_patterns = {pattern_id("open_request_screening"),
                                   pattern_id("capability_expansion"),
                                   pattern_id("recipient_correction")};
  auto h = overlap_histogram(c);
  EXPECT_EQ(h[1], 1);
  EXPECT_EQ(h[2], 1);
  EXPECT_EQ(h[3], 1);
  EXPECT_EQ(h[4], 0);
}

TEST(Review, SampleSizesAndDeterminism) {
  PlanConfig cfg;
  cfg.targets = {{"capability_expansion", 40}};
  DialogCorpus up = execute(SmallSmd(), plan(SmallSmd(), cfg), 1);
  ReviewSheet s = sample_review(up, 0.2, 4);
  EXPECT_EQ(s.dialog_ids.size(), 8u);
  EXPECT_EQ(s.updated_dialogs, 40u);
  EXPECT_EQ(sample_review(up, 1.0, 4).dialog_ids.size(), 40u);
  EXPECT_EQ(sample_review(up, 0.2, 4).dialog_ids, s.dialog_ids);
  std::string md = render_review(up, s);
  EXPECT_NE(md.find("[+capability_expansion]"), std::string::npos);
}

// round(0.2 * 288) = 58 on a corpus with exactly 288 updated dialogs.
TEST(Review, TwoHundredEightyEightUpdated) {
  DialogCorpus c = parse_smd(synth::GenerateSmd({300, 0, 4, 0}));
  PlanConfig cfg;
  cfg.targets = {{"capability_expansion", 288}};
  DialogCorpus up = execute(c, plan(c, cfg), 1);
  EXPECT_EQ(sample_review(up, 0.2, 1).dialog_ids.size(), 58u);
}

TEST(Config, JsonRoundTripAndValidation) {
  PlanConfig cfg = preset_config("babi-table1");
  PlanConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.Canonical(), cfg.Canonical());
  EXPECT_THROW(config_from_json("{\"targets\": {\"nope\": 1}}"), Error);
  EXPECT_THROW(config_from_json("{\"targets\": {\"capability_expansion\": -1}}"), Error);
  EXPECT_THROW(config_from_json("[]"), Error);
  EXPECT_THROW(preset_config("smd-table9"), Error);
}

TEST(Stats, UninjectedCountsZero) {
  CorpusStats s = corpus_stats(SmallSmd());
  for (const auto &[name, n] : s.per_pattern) EXPECT_EQ(n, 0) << name;
  EXPECT_EQ(s.dialogs, 60u);
  std::string text = render_stats(s);
  EXPECT_NE(text.find("mean_utterances: "), std::string::npos);
}

}  // namespace
}  // namespace ncfvar
