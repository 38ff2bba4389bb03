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

#include <algorithm>
#include <cctype>
#include <sstream>

#include "ncfvar/dialog.h"
#include "ncfvar/entity_matcher.h"
#include "ncfvar/error.h"
#include "ncfvar/util.h"
#include "test_support.h"

namespace ncfvar {
namespace {

using testing::MakeCorpus;
using testing::MakeDialog;

// Every span of whole words whose tokens spell a lexicon member.
std::set<std::string> SpanScanOracle(const std::string &text, const std::set<std::string> &lexicon) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) {
    std::string lower;
    for (char c : w) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (!lower.empty() && std::ispunct(static_cast<unsigned char>(lower.back())) &&
           lower.back() != '_') {
      lower.pop_back();
    }
    words.push_back(lower);
  }
  std::set<std::string> out;
  for (size_t i = 0; i < words.size(); ++i) {
    std::string span;
    for (size_t j = i; j < words.size(); ++j) {
      span += (j == i ? "" : "_") + words[j];
      if (lexicon.count(span)) out.insert(span);
    }
  }
  return out;
}

TEST(UtteranceCount, Definition) {
  Dialog empty;
  EXPECT_EQ(utterance_count(empty), 0u);
  EXPECT_EQ(utterance_count(MakeDialog("d", Domain::kWeather, {"u", "a", "u", "a", "u", "a"})), 6u);
  DialogCorpus none;
  EXPECT_EQ(mean_utterances(none), 0.0);
  DialogCorpus two = MakeCorpus(SourceFormat::kSmd,
                                {MakeDialog("a", Domain::kWeather, {"u", "a"}),
                                 MakeDialog("b", Domain::kWeather, {"u", "a", "u", "a", "u"})});
  EXPECT_DOUBLE_EQ(mean_utterances(two), 3.5);
}

TEST(NormalizeEntity, Examples) {
  EXPECT_EQ(normalize_entity("Dish Parking"), "dish_parking");
  EXPECT_EQ(normalize_entity("dish_parking"), "dish_parking");
  EXPECT_EQ(normalize_entity("  783 Arcadia Pl "), "783_arcadia_pl");
  EXPECT_EQ(normalize_entity(normalize_entity("A  B\tC")), normalize_entity("A  B\tC"));
  try {
    normalize_entity("   ");
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "empty entity");
  }
}

TEST(EntitiesIn, Examples) {
  EXPECT_TRUE(entities_in("thanks", {"chevron"}).empty());
  std::set<std::string> lex = {"chevron", "783_arcadia_pl"};
  std::string text = "chevron is at 783 arcadia pl";
  EXPECT_EQ(entities_in(text, lex), SpanScanOracle(text, lex));
  EXPECT_EQ(entities_in(text, lex), (std::set<std::string>{"chevron", "783_arcadia_pl"}));
  EXPECT_EQ(entities_in("gas station chevron chevron", {"chevron"}),
            (std::set<std::string>{"chevron"}));
}

TEST(EntitiesIn, PunctuationAndUnderscores) {
  std::set<std::string> lex = {"dish_parking", "resto_rome_cheap_thai_2stars_phone"};
  EXPECT_EQ(entities_in("Dish Parking.", lex), (std::set<std::string>{"dish_parking"}));
  EXPECT_EQ(entities_in("here it is resto_rome_cheap_thai_2stars_phone", lex),
            (std::set<std::string>{"resto_rome_cheap_thai_2stars_phone"}));
  // Spans cover whole words only.
  EXPECT_TRUE(entities_in("dishparking", lex).empty());
}

TEST(EntitiesIn, LongestMatchWins) {
  std::set<std::string> lex = {"palo_alto", "palo_alto_garage_r"};
  EXPECT_EQ(entities_in("go to palo alto garage r now", lex),
            (std::set<std::string>{"palo_alto_garage_r"}));
}

// Against the brute-force span scan on lexicons whose members share no
// words, where longest-first matching and exhaustive scanning coincide.
TEST(EntitiesIn, AgreesWithSpanScanOnRandomTexts) {
  const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "eps",
                                          "zeta",  "eta",  "theta", "iota",  "kappa"};
  Rng rng(99);
  for (int round = 0; round < 300; ++round) {
    std::vector<std::string> words = vocab;
    rng.Shuffle(words);
    std::set<std::string> lex;
    size_t used = 0;
    while (used + 3 <= 8) {
      size_t len = 1 + rng.Below(3);
      std::vector<std::string> parts(words.begin() + static_cast<long>(used),
                                     words.begin() + static_cast<long>(used + len));
      lex.insert(Join(parts, "_"));
      used += len;
    }
    std::string text;
    size_t n = 1 + rng.Below(12);
    for (size_t i = 0; i < n; ++i) {
      text += (i ? " " : "") + vocab[rng.Below(vocab.size())];
      if (rng.Below(5) == 0) text += ",";
    }
    EXPECT_EQ(entities_in(text, lex), SpanScanOracle(text, lex)) << text;
    EntityMatcher m(lex);
    EXPECT_EQ(m.Find(text), entities_in(text, lex));
  }
}

TEST(ValidateDialog, Alternation) {
  EXPECT_EQ(validate_dialog(MakeDialog("d", Domain::kWeather, {"u", "a", "u"})), "");
  Dialog bad = MakeDialog("d", Domain::kWeather, {"u", "a"});
  bad.turns[1].speaker = Speaker::kUser;
  EXPECT_NE(validate_dialog(bad), "");
  Dialog agent_first = MakeDialog("d", Domain::kWeather, {"u", "a"});
  std::swap(agent_first.turns[0].speaker, agent_first.turns[1].speaker);
  EXPECT_NE(validate_dialog(agent_first), "");
}

TEST(OriginalOnly, DropsInjectedTurnsAndRemapsKb) {
  Dialog d = MakeDialog("d", Domain::kRestaurant, {"x", "y", "u1", "a1", "u2", "a2"});
  PatternId ors{PatternClass::kA, "open_request_screening"};
  d.turns[0].origin = Origin::Injected(ors);
  d.turns[1].origin = Origin::Injected(ors);
  d.applied_patterns.insert(ors);
  d.kb.entries.push_back({"r", "R_phone", "r_phone", "r R_phone r_phone", 3});
  EXPECT_EQ(validate_dialog(d), "");
  Dialog o = original_only(d);
  ASSERT_EQ(o.turns.size(), 4u);
  EXPECT_EQ(o.turns[0].text, "u1");
  EXPECT_TRUE(o.applied_patterns.empty());
  EXPECT_EQ(o.kb.entries[0].after_turn, 1);
}

TEST(Lexicon, FromKbAndSlots) {
  Dialog d = MakeDialog("d", Domain::kNavigate, {"where is chevron", "chevron is close"});
  d.kb.entries.push_back({"chevron", "address", "783_arcadia_pl", "", -1});
  d.turns[1].annotations["slot.poi_type"] = "gas station";
  DialogCorpus c = MakeCorpus(SourceFormat::kSmd, {d});
  EXPECT_EQ(c.global_entities,
            (std::set<std::string>{"chevron", "783_arcadia_pl", "gas_station"}));
}

TEST(Names, RoundTrip) {
  EXPECT_EQ(ParseFormatName(FormatName(SourceFormat::kSmd)), SourceFormat::kSmd);
  EXPECT_EQ(ParseFormatName("babi"), SourceFormat::kBabi);
  EXPECT_THROW(ParseFormatName("csv"), Error);
  EXPECT_EQ(ParseDomainName("navigate"), Domain::kNavigate);
  EXPECT_FALSE(ParseDomainName("hotel").has_value());
}

}  // namespace
}  // namespace ncfvar
