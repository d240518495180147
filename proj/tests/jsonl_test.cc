// Copyright 2026 The StructInfer Authors.
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

#include "structinfer/jsonl.h"

#include <random>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "testing/generators.h"

namespace structinfer {
namespace {

// Serializes to text and back so the check covers the real wire format.
template <typename T, typename To, typename From>
T RoundTrip(const T& value, To to_json, From from_json) {
  const std::string line = to_json(value).dump();
  absl::StatusOr<T> back = from_json(Json::parse(line));
  EXPECT_TRUE(back.ok()) << back.status() << "\n" << line;
  return back.ok() ? *back : T{};
}

TEST(RoundTripTest, ElrondInstance) {
  const SrlInstance value = testing::ElrondInstance();
  EXPECT_EQ(RoundTrip(value, SrlInstanceToJson, SrlInstanceFromJson), value);
}

TEST(RoundTripTest, RandomValuesOfEveryType) {
  std::mt19937_64 rng(51);
  testing::SrlShape srl;
  testing::CorefShape coref;
  coref.max_mentions = 10;
  for (int i = 0; i < 1000; ++i) {
    const std::string id = absl::StrCat("id", i, "\xe2\x9c\x93");
    const SrlInstance a = testing::RandomSrlInstance(rng, srl, id);
    EXPECT_EQ(RoundTrip(a, SrlInstanceToJson, SrlInstanceFromJson), a);
    const CorefInstance b = testing::RandomCorefInstance(rng, coref, id);
    EXPECT_EQ(RoundTrip(b, CorefInstanceToJson, CorefInstanceFromJson), b);
    const SrlStructure c = testing::RandomSrlStructure(rng, id);
    EXPECT_EQ(RoundTrip(c, SrlStructureToJson, SrlStructureFromJson), c);
    const SrlGold d = testing::RandomSrlGold(rng, id);
    EXPECT_EQ(RoundTrip(d, SrlGoldToJson, SrlGoldFromJson), d);
    const CorefGold e = testing::RandomCorefGold(rng, id);
    EXPECT_EQ(RoundTrip(e, CorefGoldToJson, CorefGoldFromJson), e);
    const CorefPredictionRecord f = testing::RandomCorefPrediction(rng, id);
    EXPECT_TRUE(RoundTrip(f, CorefPredictionToJson, CorefPredictionFromJson) ==
                f);
  }
}

TEST(RoundTripTest, NonRoundScoresSurvive) {
  SrlInstance value = testing::ElrondInstance();
  value.roles[0].candidates[0].score = 0.1 + 0.2;
  value.roles[0].candidates[1].score = -1.0 / 3.0;
  EXPECT_EQ(RoundTrip(value, SrlInstanceToJson, SrlInstanceFromJson), value);
}

std::string FiveLinesWithBadThird() {
  std::string text;
  for (int i = 0; i < 5; ++i) {
    SrlInstance instance = testing::ElrondInstance();
    instance.id = absl::StrCat("e", i);
    text += i == 2 ? "{\"schema_version\": 1, \"task\": \"srl\", \"id\": "
                   : SrlInstanceToJson(instance).dump();
    text += "\n";
  }
  return text;
}

TEST(LoadTest, StrictModeNamesTheBadLine) {
  std::istringstream in(FiveLinesWithBadThird());
  auto result =
      LoadJsonlStream<SrlInstance>(in, SrlInstanceFromJson, LoadOptions{});
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(result.status().message().find("line 3"), std::string::npos)
      << result.status();
}

TEST(LoadTest, PartialModeKeepsTheRest) {
  std::istringstream in(FiveLinesWithBadThird());
  auto result = LoadJsonlStream<SrlInstance>(in, SrlInstanceFromJson,
                                             LoadOptions{/*partial=*/true});
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result->values.size(), 4u);
  ASSERT_EQ(result->diagnostics.size(), 1u);
  EXPECT_EQ(result->diagnostics[0].line, 3);
  EXPECT_EQ(result->values[2].id, "e3");
}

TEST(LoadTest, SkipsHeadersAndBlankLines) {
  std::ostringstream out;
  WriteJsonl(out, MakeHeader({{"k", 3}}),
             {SrlInstanceToJson(testing::ElrondInstance())});
  std::istringstream in(out.str() + "\n   \n");
  auto result = LoadJsonlStream<SrlInstance>(in, SrlInstanceFromJson);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->values.size(), 1u);
  EXPECT_EQ(result->values[0], testing::ElrondInstance());
}

TEST(LoadTest, SchemaVersionIsMandatory) {
  Json j = SrlInstanceToJson(testing::ElrondInstance());
  j.erase("schema_version");
  EXPECT_FALSE(SrlInstanceFromJson(j).ok());
  j["schema_version"] = 2;
  EXPECT_FALSE(SrlInstanceFromJson(j).ok());
}

TEST(LoadTest, RejectsWrongTaskAndUnknownMentions) {
  EXPECT_FALSE(
      CorefInstanceFromJson(SrlInstanceToJson(testing::ElrondInstance())).ok());
  Json j = Json::parse(
      R"({"schema_version":1,"task":"coref","document_id":"d",)"
      R"("mentions":[{"id":"m1","text":"Al","sentence":0}],)"
      R"("pair_scores":[{"m1":"m1","m2":"m9","score":1}]})");
  EXPECT_FALSE(CorefInstanceFromJson(j).ok());
}

TEST(LoadTest, GoldAnswersMayBeSingleStrings) {
  absl::StatusOr<SrlGold> g = SrlGoldFromJson(Json::parse(
      R"({"schema_version":1,"id":"x","answers":{"a":"Elrond","b":["x","y"]}})"));
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->answers.at("a"), (std::vector<std::string>{"Elrond"}));
  EXPECT_EQ(g->answers.at("b").size(), 2u);
}

TEST(LoadTest, MissingFileIsNotFound) {
  auto result = LoadSrlInstances("/nonexistent/path.jsonl");
  ASSERT_FALSE(result.ok());
  EXPECT_EQ(result.status().code(), absl::StatusCode::kNotFound);
}

TEST(FixtureTest, ElrondFixtureMatchesBuiltInInstance) {
  auto result = LoadSrlInstances(
      absl::StrCat(STRUCTINFER_FIXTURE_DIR, "/elrond_scored.jsonl"));
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->values.size(), 1u);
  EXPECT_EQ(result->values[0], testing::ElrondInstance());
}

}  // namespace
}  // namespace structinfer
