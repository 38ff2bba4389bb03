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

#include <cmath>
#include <random>

#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/metrics.h"
#include "oracles.h"
#include "test_support.h"

namespace ncfvar {
namespace {

using testing::MakeCorpus;
using testing::MakeDialog;

EvalManifest Manifest(const std::vector<std::pair<std::string, std::string>> &entries) {
  EvalManifest m;
  m.corpus_tag = "t";
  size_t turn = 1;
  for (const auto &[id, gold] : entries) m.entries.push_back({id, turn += 2, gold});
  return m;
}

PredictionSet Preds(const EvalManifest &m, std::vector<std::string> responses) {
  return {std::move(responses), manifest_digest(m)};
}

TEST(Bleu, WorkedFixture) {
  std::vector<std::string> hyp = {"the cat sat", "a b c d"};
  std::vector<std::string> ref = {"the cat sat down", "a b c d"};
  // p1 7/7, p2 5/5, p3 3/3, p4 1/1; BP exp(1 - 8/7).
  double expect = 100.0 * std::exp(1.0 - 8.0 / 7.0);
  EXPECT_NEAR(corpus_bleu(hyp, ref), expect, 1e-9);
  EXPECT_NEAR(oracle::Bleu(hyp, ref), expect, 1e-9);
}

TEST(Bleu, IdentityAndEmpty) {
  std::vector<std::string> golds = {"hello there", "the station is 3 miles away", "ok"};
  EXPECT_NEAR(corpus_bleu(golds, golds), 100.0, 1e-9);
  EXPECT_EQ(corpus_bleu({"", "", ""}, golds), 0.0);
  EXPECT_EQ(corpus_bleu(std::vector<std::string>{}, {}), 0.0);
  // Case and spacing are not significant.
  EXPECT_NEAR(corpus_bleu({"HELLO   There"}, {"hello there"}), 0.0, 1e-12);  // no 3/4-grams
  EXPECT_NEAR(corpus_bleu({"A  B C D"}, {"a b c d"}), 100.0, 1e-9);
  EXPECT_THROW(corpus_bleu({"a"}, {}), Error);
}

TEST(Bleu, ClippingAndBrevity) {
  // "the the the the" vs "the cat": unigram 1/4 after clipping, no bigrams.
  EXPECT_EQ(corpus_bleu({"the the the the"}, {"the cat"}), 0.0);
  std::vector<std::string> h = {"the the cat sat on the mat"};
  std::vector<std::string> r = {"the cat sat on the mat today"};
  EXPECT_NEAR(corpus_bleu(h, r), oracle::Bleu(h, r), 1e-9);
}

TEST(Bleu, MatchesBruteForceOracle) {
  std::mt19937_64 gen(7);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "The", "the", "x", "y"};
  int nonzero = 0;
  for (int fixture = 0; fixture < 300; ++fixture) {
    size_t sentences = 1 + gen() % 6;
    std::vector<std::string> hyps, refs;
    for (size_t s = 0; s < sentences; ++s) {
      auto sentence = [&](size_t len) {
        std::string out;
        for (size_t k = 0; k < len; ++k) out += (k ? " " : "") + vocab[gen() % vocab.size()];
        return out;
      };
      std::string ref = sentence(gen() % 12);
      std::string hyp = gen() % 3 == 0 ? ref : sentence(gen() % 12);
      refs.push_back(ref);
      hyps.push_back(hyp);
    }
    double got = corpus_bleu(hyps, refs);
    EXPECT_NEAR(got, oracle::Bleu(hyps, refs), 1e-6) << fixture;
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 100.0 + 1e-9);
    nonzero += got > 0 ? 1 : 0;
  }
  EXPECT_GT(nonzero, 50);
}

TEST(Bleu, PredictionSetChecksAlignment) {
  EvalManifest m = Manifest({{"d", "a b c d"}});
  EXPECT_NEAR(corpus_bleu(Preds(m, {"a b c d"}), m), 100.0, 1e-9);
  PredictionSet wrong = Preds(m, {"a b c d"});
  wrong.manifest_digest = "0";
  try {
    corpus_bleu(wrong, m);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
  }
  EXPECT_THROW(corpus_bleu(Preds(m, {"a", "b"}), m), Error);
}

TEST(MicroF1, HandCases) {
  EntityF1Result r = micro_f1({{"a", "b"}}, {{"a", "c"}});
  EXPECT_EQ(r.true_positives, 1);
  EXPECT_EQ(r.false_positives, 1);
  EXPECT_EQ(r.false_negatives, 1);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
  // Empty gold entries only contribute false positives.
  r = micro_f1({{"a"}, {}}, {{"a"}, {"z", "y"}});
  EXPECT_EQ(r.false_positives, 2);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 / 4.0);
  r = micro_f1({{}, {}}, {{}, {}});
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.warning, "no scoreable entities");
}

// Cases built from chosen TP/FP/FN counts, so the expected score is known
// before the sets exist.
TEST(MicroF1, ConstructedCases) {
  std::mt19937_64 gen(3);
  for (int c = 0; c < 200; ++c) {
    size_t entries = 1 + gen() % 5;
    std::vector<std::set<std::string>> gold(entries), pred(entries);
    long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < entries; ++i) {
      long t = static_cast<long>(gen() % 3), p = static_cast<long>(gen() % 3),
           n = static_cast<long>(gen() % 3);
      for (long k = 0; k < t; ++k) {
        gold[i].insert("t" + std::to_string(k));
        pred[i].insert("t" + std::to_string(k));
      }
      for (long k = 0; k < p; ++k) pred[i].insert("p" + std::to_string(k));
      for (long k = 0; k < n; ++k) gold[i].insert("n" + std::to_string(k));
      if (gold[i].empty()) {
        fp += p;  // t == 0 and n == 0 here
      } else {
        tp += t;
        fp += p;
        fn += n;
      }
    }
    EntityF1Result r = micro_f1(gold, pred);
    if (tp + fn == 0) {
      EXPECT_EQ(r.f1, 0.0);
      continue;
    }
    EXPECT_EQ(r.true_positives, tp);
    EXPECT_EQ(r.false_positives, fp);
    EXPECT_EQ(r.false_negatives, fn);
    EXPECT_DOUBLE_EQ(r.f1, 2.0 * double(tp) / double(2 * tp + fp + fn));
  }
}

DialogCorpus EntityCorpus() {
  Dialog d = MakeDialog("d0", Domain::kNavigate, {"where is a gas station", "chevron is 3 miles away",
                                                  "thanks", "you're welcome"});
  d.kb.entries = {{"chevron", "distance", "3 miles"}, {"valero", "distance", "5 miles"}};
  Dialog e = MakeDialog("d1", Domain::kWeather, {"weather in boston", "sunny in boston"});
  e.kb.entries = {{"boston", "monday", "sunny"}};
  return MakeCorpus(SourceFormat::kSmd, {d, e});
}

TEST(EntityF1, GlobalAndDialogScope) {
  DialogCorpus c = EntityCorpus();
  EvalManifest m = export_manifest(c);
  ASSERT_EQ(m.entries.size(), 3u);
  EXPECT_DOUBLE_EQ(entity_f1(Preds(m, {m.entries[0].gold_text, m.entries[1].gold_text,
                                       m.entries[2].gold_text}),
                             m, c)
                       .f1,
                   1.0);
  // "valero" is a corpus entity, so it counts as a false positive; word
  // order does not matter.
  EntityF1Result r =
      entity_f1(Preds(m, {"valero 3 miles", "no", "boston sunny"}), m, c);
  EXPECT_EQ(r.true_positives, 3);
  EXPECT_EQ(r.false_positives, 1);
  EXPECT_EQ(r.false_negatives, 1);
  // Under dialog scope "boston" of d1 is unknown inside d0.
  EntityF1Result g = entity_f1(Preds(m, {"boston", "no", "no"}), m, c, EntityScope::kGlobal);
  EntityF1Result l = entity_f1(Preds(m, {"boston", "no", "no"}), m, c, EntityScope::kDialog);
  EXPECT_EQ(g.false_positives, 1);
  EXPECT_EQ(l.false_positives, 0);
}

TEST(EntityF1, AddingCorrectEntityNeverHurts) {
  DialogCorpus c = EntityCorpus();
  EvalManifest m = export_manifest(c);
  double before = entity_f1(Preds(m, {"valero", "no", "rain"}), m, c).f1;
  double after = entity_f1(Preds(m, {"valero chevron", "no", "rain"}), m, c).f1;
  EXPECT_GE(after, before);
}

TEST(EntityF1, EmptyLexiconIsAnError) {
  DialogCorpus c = MakeCorpus(SourceFormat::kSmd, {MakeDialog("x", Domain::kWeather, {"u", "a"})});
  EvalManifest m = export_manifest(c);
  EXPECT_THROW(entity_f1(Preds(m, {"a"}), m, c), Error);
}

TEST(Accuracy, Examples) {
  EvalManifest m = Manifest({{"a", "x"}, {"a", "y"}, {"b", "z"}, {"b", "w"}});
  Accuracy all = response_accuracy(Preds(m, {"x", "Y", " z ", "w"}), m);
  EXPECT_EQ(all.per_response, 1.0);
  EXPECT_EQ(all.per_dialog, 1.0);
  Accuracy one = response_accuracy(Preds(m, {"x", "y", "z", "nope"}), m);
  EXPECT_DOUBLE_EQ(one.per_response, 0.75);
  EXPECT_DOUBLE_EQ(one.per_dialog, 0.5);
  EXPECT_EQ(normalize_response("  Hello \t  World "), "hello world");
}

// With equally many entries per dialog a correct dialog contributes its
// whole share of correct responses, so per_dialog <= per_response.
TEST(Accuracy, PerDialogBoundWithEqualDialogSizes) {
  std::mt19937_64 gen(11);
  for (int f = 0; f < 1000; ++f) {
    size_t dialogs = 1 + gen() % 6, per = 1 + gen() % 4;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::string> preds;
    for (size_t d = 0; d < dialogs; ++d) {
      for (size_t k = 0; k < per; ++k) {
        entries.emplace_back("d" + std::to_string(d), "gold");
        preds.push_back(gen() % 3 == 0 ? "bad" : "gold");
      }
    }
    EvalManifest m = Manifest(entries);
    Accuracy a = response_accuracy(Preds(m, preds), m);
    EXPECT_LE(a.per_dialog, a.per_response + 1e-12);
  }
}

// Unequal dialog sizes break the bound: one short correct dialog beside a
// long wrong one.
TEST(Accuracy, PerDialogBoundFailsForUnequalSizes) {
  EvalManifest m = Manifest({{"a", "x"}, {"b", "y"}, {"b", "y"}, {"b", "y"}});
  Accuracy a = response_accuracy(Preds(m, {"x", "n", "n", "n"}), m);
  EXPECT_DOUBLE_EQ(a.per_response, 0.25);
  EXPECT_DOUBLE_EQ(a.per_dialog, 0.5);
}

EvalReport Report(double bleu, double f1, double resp, double dlg) {
  EvalReport r;
  r.bleu = bleu;
  r.entity_f1 = f1;
  r.per_response_acc = resp;
  r.per_dialog_acc = dlg;
  return r;
}

TEST(Compare, PublishedDrops) {
  // GLMP on SMD: BLEU 14.22 -> 4.73, Ent.F1 55.38 -> 21.05.
  auto rows = compare(Report(14.22, 0.5538, NAN, NAN), Report(4.73, 0.2105, NAN, NAN));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].metric, "Ent.F1");
  EXPECT_NEAR(rows[1].relative, 62.0, 0.1);
  EXPECT_NEAR(rows[1].delta, 21.05 - 55.38, 1e-9);
  auto babi = compare(Report(NAN, NAN, 0.992, 0.885), Report(NAN, NAN, 0.8724, 0.127));
  EXPECT_NEAR(babi[3].relative, 85.6, 0.1);
  std::string table = render_comparison(babi);
  EXPECT_NE(table.find("per-dialog acc"), std::string::npos);
  EXPECT_NE(table.find("-"), std::string::npos);
}

TEST(Compare, IdenticalReportsGiveZeroDeltas) {
  EvalReport r = Report(20.5, 0.4, 0.9, 0.3);
  for (const ComparisonRow &row : compare(r, r)) {
    EXPECT_EQ(row.delta, 0.0);
    EXPECT_EQ(row.relative, 0.0);
  }
}

TEST(Report, TextRoundTrip) {
  DialogCorpus c = EntityCorpus();
  EvalManifest m = export_manifest(c);
  EvalReport r = evaluate(Preds(m, {"chevron is 3 miles away", "you're welcome", "rain"}), m, c);
  EXPECT_EQ(r.n_responses, 3u);
  EXPECT_EQ(r.n_dialogs, 2u);
  EvalReport back = report_from_text(report_to_text(r));
  EXPECT_NEAR(back.bleu, r.bleu, 1e-4);
  EXPECT_NEAR(back.entity_f1, r.entity_f1, 1e-6);
  EXPECT_NEAR(back.per_response_acc, r.per_response_acc, 1e-6);
  EXPECT_EQ(back.manifest_checksum, r.manifest_checksum);
  EXPECT_EQ(report_to_text(back), report_to_text(r));
  EXPECT_TRUE(std::isnan(report_from_text("bleu: 1.0\n").entity_f1));
  EXPECT_THROW(report_from_text("bleu: abc\n"), Error);
  EXPECT_NE(report_to_json(r).find("\"bleu\""), std::string::npos);
}

}  // namespace
}  // namespace ncfvar
