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

#include "ncfvar/catalog.h"
#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/patterns.h"
#include "synth.h"
#include "test_support.h"

namespace ncfvar {
namespace {

using testing::ReadData;

ErrorKind KindOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalid;
}

std::string MessageOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

TEST(ParseBabi, LineFormats) {
  DialogCorpus c = parse_babi("1 hi\thello what can i help you with today\n"
                              "2 resto_1 r_phone resto_1_phone\n\n");
  ASSERT_EQ(c.dialogs.size(), 1u);
  const Dialog &d = c.dialogs[0];
  ASSERT_EQ(d.turns.size(), 2u);
  EXPECT_EQ(d.turns[0].speaker, Speaker::kUser);
  EXPECT_EQ(d.turns[0].text, "hi");
  EXPECT_EQ(d.turns[1].speaker, Speaker::kAgent);
  EXPECT_EQ(d.turns[1].text, "hello what can i help you with today");
  ASSERT_EQ(d.kb.entries.size(), 1u);
  EXPECT_EQ(d.kb.entries[0].subject, "resto_1");
  EXPECT_EQ(d.kb.entries[0].attribute, "r_phone");
  EXPECT_EQ(d.kb.entries[0].value, "resto_1_phone");
}

TEST(ParseBabi, Errors) {
  EXPECT_EQ(KindOf([] { parse_babi("1 hi\thello\n3 x\ty\n"); }), ErrorKind::kParse);
  EXPECT_NE(MessageOf([] { parse_babi("1 hi\thello\n3 x\ty\n"); }).find("non-monotone"),
            std::string::npos);
  std::string msg = MessageOf([] { parse_babi("1 hi\thello\n2 just two\n"); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(ParseBabi, ApiCallSlots) {
  DialogCorpus c = parse_babi(ReadData("babi_small.txt"));
  bool found = false;
  for (const Turn &t : c.dialogs[0].turns) {
    if (t.text.rfind("api_call", 0) == 0) {
      found = true;
      EXPECT_TRUE(t.annotations.count("slot.cuisine"));
      EXPECT_TRUE(t.annotations.count("slot.location"));
      EXPECT_TRUE(t.annotations.count("slot.party_size"));
      EXPECT_TRUE(t.annotations.count("slot.price"));
    }
  }
  EXPECT_TRUE(found);
}

TEST(RoundTrip, ShippedFixturesByteIdentical) {
  for (const char *name : {"smd_small.json", "smd_small_compact.json", "smd_small_utf8.json"}) {
    std::string bytes = ReadData(name);
    EXPECT_EQ(serialize(parse_smd(bytes)), bytes) << name;
  }
  std::string babi = ReadData("babi_small.txt");
  EXPECT_EQ(serialize(parse_babi(babi)), babi);
}

TEST(RoundTrip, BabiLayoutVariants) {
  for (std::string bytes : {std::string("1 hi\tho\n2 a\tb\n"), std::string("1 hi\tho\n\n1 x\ty\n"),
                            std::string("1 hi\tho\r\n2 a\tb\r\n\r\n"),
                            std::string("1 hi\tho\n\n1 x\ty\n\n"), std::string("1 hi\tho")}) {
    EXPECT_EQ(serialize(parse_babi(bytes)), bytes);
  }
}

TEST(RoundTrip, GeneratedCorpora) {
  for (uint64_t seed : {1, 2, 3}) {
    std::string smd = synth::GenerateSmd({20, 0, seed, seed == 2 ? 0 : 4});
    EXPECT_EQ(serialize(parse_smd(smd)), smd);
    std::string babi = synth::GenerateBabi({15, seed});
    EXPECT_EQ(serialize(parse_babi(babi)), babi);
  }
}

TEST(RoundTrip, SmdReparseEqual) {
  DialogCorpus a = parse_smd(ReadData("smd_small.json"));
  DialogCorpus b = parse_smd(serialize(a));
  EXPECT_EQ(a, b);
}

TEST(ParseSmd, NullKbAndCounts) {
  DialogCorpus c = parse_smd(ReadData("smd_small.json"));
  EXPECT_EQ(c.dialogs.size(), 9u);
  EXPECT_TRUE(c.dialogs[0].kb.entries.empty());
  EXPECT_FALSE(c.dialogs[1].kb.entries.empty());
  for (const Dialog &d : c.dialogs) EXPECT_EQ(validate_dialog(d), "") << d.id;
}

TEST(ParseSmd, SixTurnDialogue) {
  std::string json = R"([{"dialogue": [)";
  for (int i = 0; i < 6; ++i) {
    json += std::string(i ? ", " : "") + R"({"turn": ")" + (i % 2 ? "assistant" : "driver") +
            R"(", "data": {"end_dialogue": false, "utterance": "t)" + std::to_string(i) + "\"}}";
  }
  json += R"(], "scenario": {"kb": {"items": null, "column_names": []}, "task": {"intent": "weather"}, "uuid": "u1"}}])";
  DialogCorpus c = parse_smd(json);
  ASSERT_EQ(c.dialogs.size(), 1u);
  EXPECT_EQ(c.dialogs[0].turns.size(), 6u);
  EXPECT_EQ(c.dialogs[0].id, "u1");
  EXPECT_EQ(serialize(c), json);
}

TEST(ParseSmd, Errors) {
  EXPECT_EQ(KindOf([] { parse_smd("{not json"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { parse_smd("{}"); }), ErrorKind::kParse);
  std::string bad_domain =
      R"([{"dialogue": [], "scenario": {"task": {"intent": "hotel"}}}])";
  EXPECT_NE(MessageOf([&] { parse_smd(bad_domain); }).find("unknown domain"), std::string::npos);
  std::string bad_turn =
      R"([{"dialogue": [{"turn": "driver"}], "scenario": {"task": {"intent": "weather"}}}])";
  EXPECT_NE(MessageOf([&] { parse_smd(bad_turn); }).find("malformed turn"), std::string::npos);
}

TEST(Serialize, BabiRenumbersAfterLeadingInjection) {
  DialogCorpus c = parse_babi("1 hi\thello\n2 book\tok\n\n");
  const PatternRecipe &ors = recipe_for("open_request_screening");
  CorpusIndex index(c);
  AnchorContext ctx{&index, 1};
  std::vector<Anchor> anchors = find_anchors(ors, c.dialogs[0], ctx);
  ASSERT_EQ(anchors.size(), 1u);
  c.dialogs[0] = inject(c.dialogs[0], ors, anchors[0], 1);
  std::string out = serialize(c);
  EXPECT_NE(out.find("\n2 hi\thello\n3 book\tok\n"), std::string::npos) << out;
  std::string sidecar = origin_sidecar(c);
  EXPECT_EQ(sidecar, "babi-0: 0:open_request_screening,1:open_request_screening\n");
  DialogCorpus back = parse_babi(out, sidecar);
  EXPECT_EQ(back.dialogs[0].turns, c.dialogs[0].turns);
  EXPECT_EQ(back.dialogs[0].applied_patterns, c.dialogs[0].applied_patterns);
}

TEST(Manifest, MaskingRule) {
  DialogCorpus c = parse_babi("1 hi\thello\n2 book\tok\n3 thanks\tbye\n\n");
  EvalManifest before = export_manifest(c);
  EXPECT_EQ(before.entries.size(), 3u);
  const PatternRecipe &ors = recipe_for("open_request_screening");
  CorpusIndex index(c);
  AnchorContext ctx{&index, 1};
  c.dialogs[0] = inject(c.dialogs[0], ors, find_anchors(ors, c.dialogs[0], ctx)[0], 1);
  EvalManifest after = export_manifest(c);
  ASSERT_EQ(after.entries.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(after.entries[i].gold_text, before.entries[i].gold_text);
    EXPECT_EQ(after.entries[i].turn_index, before.entries[i].turn_index + 2);
  }
  EXPECT_EQ(manifest_digest(after), manifest_digest(before));
}

TEST(Manifest, TsvRoundTrip) {
  EvalManifest m = export_manifest(parse_smd(ReadData("smd_small.json")));
  EvalManifest back = manifest_from_tsv(manifest_to_tsv(m));
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_EQ(back.corpus_tag, m.corpus_tag);
  EXPECT_EQ(KindOf([] { manifest_from_tsv("a\tnot-a-number\tx\n"); }), ErrorKind::kParse);
}

TEST(Predictions, Alignment) {
  EvalManifest m;
  m.entries = {{"d", 1, "a"}, {"d", 3, "b"}, {"e", 1, "c"}};
  EXPECT_EQ(read_predictions("x\ny\nz\n", m).responses.size(), 3u);
  EXPECT_EQ(MessageOf([&] { read_predictions("x\ny\n", m); }), "expected 3 predictions, got 2");
  EXPECT_EQ(KindOf([&] { read_predictions("x\ny\n", m); }), ErrorKind::kParse);
  EvalManifest empty;
  EXPECT_TRUE(read_predictions("", empty).responses.empty());
  PredictionSet p = read_predictions("x\n\nz\n", m);
  EXPECT_EQ(p.responses[1], "");
  EXPECT_EQ(read_predictions(write_predictions(p), m).responses, p.responses);
}

TEST(Predictions, InvalidUtf8Offset) {
  EvalManifest m;
  m.entries = {{"d", 1, "a"}};
  std::string bad = "ok \xC3\x28\n";
  EXPECT_EQ(find_invalid_utf8(bad), 3u);
  std::string msg = MessageOf([&] { read_predictions(bad, m); });
  EXPECT_NE(msg.find("byte offset 3"), std::string::npos) << msg;
  EXPECT_EQ(find_invalid_utf8("caf\xC3\xA9"), std::string::npos);
  EXPECT_EQ(find_invalid_utf8("\xE2\x82"), 0u);
}

}  // namespace
}  // namespace ncfvar
