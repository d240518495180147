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

#include "structinfer/types.h"

#include "gtest/gtest.h"
#include "testing/generators.h"

namespace structinfer {
namespace {

TEST(TokenSpanTest, OverlapIsHalfOpen) {
  EXPECT_TRUE(SpansOverlap({0, 2}, {1, 3}));
  EXPECT_FALSE(SpansOverlap({0, 2}, {2, 3}));
  EXPECT_TRUE(SpansOverlap({2, 5}, {3, 5}));
  EXPECT_FALSE(SpansOverlap({3, 5}, {0, 1}));
}

TEST(CandidateListTest, RequiresRanksAndMonotoneScores) {
  EXPECT_TRUE(ValidateCandidateList({{"a", 2, 1}, {"b", 2, 2}}).ok());
  EXPECT_FALSE(ValidateCandidateList({{"a", 2, 2}}).ok());
  EXPECT_FALSE(ValidateCandidateList({{"a", 1, 1}, {"b", 2, 2}}).ok());
}

TEST(SrlInstanceTest, ValidationRejectsBadShapes) {
  SrlInstance ok = testing::ElrondInstance();
  EXPECT_TRUE(ValidateSrlInstance(ok).ok());

  SrlInstance no_tokens = ok;
  no_tokens.tokens.clear();
  EXPECT_FALSE(ValidateSrlInstance(no_tokens).ok());

  SrlInstance bad_predicate = ok;
  bad_predicate.predicate_index = 5;
  EXPECT_FALSE(ValidateSrlInstance(bad_predicate).ok());

  SrlInstance duplicate_role = ok;
  duplicate_role.roles[1].role_id = "a";
  EXPECT_FALSE(ValidateSrlInstance(duplicate_role).ok());

  SrlInstance skeleton = ok;
  for (RoleQuestion& q : skeleton.roles) q.candidates.clear();
  EXPECT_FALSE(ValidateSrlInstance(skeleton).ok());
  EXPECT_TRUE(ValidateSrlInstance(skeleton, /*require_candidates=*/false).ok());
}

TEST(CorefInstanceTest, PairsAreNormalizedAndLookedUp) {
  CorefInstance instance;
  instance.mentions = testing::PlainMentions(3);
  instance.pair_scores = {{2, 1, 1.5}, {0, 1, 2.0}, {0, 2, -3.0}};
  NormalizePairs(instance.pair_scores);
  ASSERT_TRUE(ValidateCorefInstance(instance).ok());
  EXPECT_EQ(instance.pair_scores[0], (PairScore{0, 1, 2.0}));
  EXPECT_EQ(instance.pair_scores[2], (PairScore{1, 2, 1.5}));
  EXPECT_EQ(instance.ScoreOf(2, 1), 1.5);
  EXPECT_EQ(instance.ScoreOf(0, 2), -3.0);
  EXPECT_EQ(instance.IndexOf("m2"), 2);
  EXPECT_EQ(instance.IndexOf("zz"), -1);
}

TEST(CorefInstanceTest, RejectsDuplicatePairsAndIds) {
  CorefInstance instance;
  instance.mentions = testing::PlainMentions(2);
  instance.pair_scores = {{0, 1, 1.0}, {0, 1, 2.0}};
  EXPECT_FALSE(ValidateCorefInstance(instance).ok());
  instance.pair_scores = {};
  instance.mentions[1].id = "m0";
  EXPECT_FALSE(ValidateCorefInstance(instance).ok());
}

TEST(ClusteringTest, FromLabelsIsCanonical) {
  const std::vector<Mention> mentions = testing::PlainMentions(4);
  const Clustering a = Clustering::FromLabels(mentions, {7, 3, 7, 1});
  const Clustering b = Clustering::FromLabels(mentions, {0, 1, 0, 2});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.mention_count(), 4u);
  EXPECT_EQ(a.LabelsFor(mentions), (std::vector<int>{0, 1, 0, 2}));
}

TEST(ClusteringTest, ValidateRejectsRepeatsAndEmpties) {
  EXPECT_FALSE(Clustering({{"a"}, {"a"}}).Validate().ok());
  EXPECT_FALSE(Clustering({{"a"}, {}}).Validate().ok());
  EXPECT_TRUE(Clustering({{"a", "b"}, {"c"}}).Validate().ok());
}

TEST(DecisionsTest, FollowScoredPairsOnly) {
  CorefInstance instance;
  instance.mentions = testing::PlainMentions(3);
  instance.pair_scores = {{0, 1, 1.0}, {1, 2, -1.0}};
  const Clustering all = Clustering({{"m0", "m1", "m2"}});
  const LinkDecisionSet d = DecisionsFromClustering(instance, all);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_TRUE(d[0].link);
  EXPECT_TRUE(d[1].link);
  EXPECT_EQ(ClusteringObjective(instance, {0, 0, 0}), 0.0);
  EXPECT_EQ(ClusteringObjective(instance, {0, 0, 1}), 1.0);
}

TEST(TokensTest, SplitAndJoin) {
  EXPECT_EQ(SplitTokens("  the  sword "),
            (std::vector<std::string>{"the", "sword"}));
  EXPECT_EQ(JoinTokens({"a", "b", "c"}, 1, 3), "b c");
}

}  // namespace
}  // namespace structinfer
