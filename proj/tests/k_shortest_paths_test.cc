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

#include "structinfer/k_shortest_paths.h"

#include <random>
#include <string>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "structinfer/span_graph.h"
#include "testing/generators.h"
#include "testing/oracles.h"

namespace structinfer {
namespace {

// Renders a path as "1a,1b" (rank then role), or "-" for the empty path.
std::string Describe(const SpanGraph& g, const GraphPath& p) {
  std::string out;
  for (int e : p.edges) {
    const Edge& edge = g.edges[e];
    if (edge.is_null()) continue;
    if (!out.empty()) out += ",";
    absl::StrAppend(&out, edge.label->rank, edge.label->role_id);
  }
  return out.empty() ? "-" : out;
}

SpanGraph ElrondGraph() {
  absl::StatusOr<SpanGraphBuild> build =
      BuildSpanGraph(testing::ElrondInstance());
  EXPECT_TRUE(build.ok());
  return build->graph;
}

TEST(YenTest, ElrondPathOrder) {
  const SpanGraph g = ElrondGraph();
  const std::vector<GraphPath> paths = YenKShortestPaths(g, 8);
  ASSERT_EQ(paths.size(), 8u);
  const std::vector<std::string> expected = {"1a,1b", "1a,1c", "1a", "1b",
                                             "1c",    "-",     "1a,1b,2c"};
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(Describe(g, paths[i]), expected[i]) << "path " << i + 1;
    EXPECT_EQ(paths[i].weight, i < 6 ? 0.0 : 1.0);
  }
  // Several weight-1 paths have two span edges; the one opening with the
  // rank-1 span of role a sorts first.
  EXPECT_EQ(Describe(g, paths[7]), "1a,2c");
  EXPECT_EQ(paths[7].weight, 1.0);
}

TEST(YenTest, PathsAreLooplessContiguousAndDistinct) {
  const SpanGraph g = ElrondGraph();
  const std::vector<GraphPath> paths = YenKShortestPaths(g, 1000);
  for (size_t i = 0; i < paths.size(); ++i) {
    EXPECT_TRUE(IsContiguousPath(g, paths[i]));
    for (size_t j = 0; j < i; ++j) EXPECT_FALSE(paths[i] == paths[j]);
    if (i > 0) EXPECT_FALSE(PathLess(g, paths[i], paths[i - 1]));
  }
}

TEST(YenTest, ReturnsFewerPathsWhenGraphIsSmall) {
  const SpanGraph g = ElrondGraph();
  const size_t total = testing::AllPathsSorted(g).size();
  EXPECT_EQ(YenKShortestPaths(g, 100000).size(), total);
  EXPECT_TRUE(YenKShortestPaths(g, 0).empty());
}

TEST(YenTest, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(7);
  testing::SrlShape shape;
  shape.max_roles = 4;
  shape.max_candidates = 4;
  shape.max_tokens = 8;
  shape.repeat_probability = 0.2;
  for (int trial = 0; trial < 300; ++trial) {
    const SrlInstance instance =
        testing::RandomSrlInstance(rng, shape, absl::StrCat("t", trial));
    absl::StatusOr<SpanGraphBuild> build = BuildSpanGraph(instance);
    ASSERT_TRUE(build.ok()) << build.status();
    const SpanGraph& g = build->graph;
    const std::vector<GraphPath> all = testing::AllPathsSorted(g);
    const int k = 1 + trial % 40;
    const std::vector<GraphPath> yen = YenKShortestPaths(g, k);
    ASSERT_EQ(yen.size(), std::min<size_t>(k, all.size())) << "trial " << trial;
    for (size_t i = 0; i < yen.size(); ++i) {
      ASSERT_EQ(yen[i].edges, all[i].edges)
          << "trial " << trial << " path " << i;
      EXPECT_EQ(yen[i].weight, all[i].weight);
    }
  }
}

TEST(PathTotalsTest, SumsLeftToRight) {
  const SpanGraph g = ElrondGraph();
  GraphPath p = YenKShortestPaths(g, 7).back();
  const double weight = p.weight;
  p.weight = -1;
  ComputePathTotals(g, p);
  EXPECT_EQ(p.weight, weight);
  EXPECT_EQ(p.span_edge_count, 3);
}

}  // namespace
}  // namespace structinfer
