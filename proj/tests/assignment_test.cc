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

#include "structinfer/assignment.h"

#include <random>

#include "gtest/gtest.h"
#include "testing/oracles.h"

namespace structinfer {
namespace {

TEST(AssignmentTest, SmallSquare) {
  const AssignmentResult r = MaxWeightAssignment({{1, 2}, {3, 1}});
  EXPECT_EQ(r.total, 5.0);
  EXPECT_EQ(r.row_to_col, (std::vector<int>{1, 0}));
}

TEST(AssignmentTest, EmptyAndRectangular) {
  EXPECT_EQ(MaxWeightAssignment({}).total, 0.0);
  const AssignmentResult wide = MaxWeightAssignment({{0.5, 0.25, 0.75}});
  EXPECT_EQ(wide.total, 0.75);
  EXPECT_EQ(wide.row_to_col, (std::vector<int>{2}));
  const AssignmentResult tall = MaxWeightAssignment({{0.5}, {0.75}, {0.25}});
  EXPECT_EQ(tall.total, 0.75);
  int assigned = 0;
  for (int c : tall.row_to_col) assigned += c >= 0;
  EXPECT_EQ(assigned, 1);
}

TEST(AssignmentTest, MatchesPermutationOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = std::uniform_int_distribution<int>(1, 6)(rng);
    const int cols = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<std::vector<double>> w(rows, std::vector<double>(cols));
    for (auto& row : w) {
      for (double& v : row) v = std::uniform_int_distribution<int>(0, 16)(rng) / 8.0;
    }
    const AssignmentResult r = MaxWeightAssignment(w);
    EXPECT_EQ(r.total, testing::PermutationMaxAssignment(w)) << "trial " << trial;
    double recomputed = 0.0;
    std::vector<bool> used(cols, false);
    for (int row = 0; row < rows; ++row) {
      const int c = r.row_to_col[row];
      if (c < 0) continue;
      EXPECT_FALSE(used[c]);
      used[c] = true;
      recomputed += w[row][c];
    }
    EXPECT_EQ(recomputed, r.total);
  }
}

}  // namespace
}  // namespace structinfer
