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

// Yen's K loopless shortest paths over a span graph.
//
// Paths are ranked by a total order: total weight ascending, then number of
// span edges descending, then the left-to-right sequence of span labels
// compared lexicographically by (role_id, rank, start). Paths differing only
// in edge identity (parallel edges of different roles) are distinct.

#ifndef STRUCTINFER_K_SHORTEST_PATHS_H_
#define STRUCTINFER_K_SHORTEST_PATHS_H_

#include <vector>

#include "structinfer/span_graph.h"

namespace structinfer {

struct GraphPath {
  std::vector<int> edges;  // edge ids, contiguous from source to target
  double weight = 0.0;
  int span_edge_count = 0;

  friend bool operator==(const GraphPath& a, const GraphPath& b) {
    return a.edges == b.edges;
  }
};

// Fills weight and span_edge_count from the edge list. Weight is summed left
// to right.
void ComputePathTotals(const SpanGraph& graph, GraphPath& path);

// Strict weak order implementing the ranking above.
bool PathLess(const SpanGraph& graph, const GraphPath& a, const GraphPath& b);

// True iff consecutive edges share endpoints and the path runs from source
// to target without repeating a vertex.
bool IsContiguousPath(const SpanGraph& graph, const GraphPath& path);

// Up to `k` best paths from vertex 0 to the last vertex in ranking order.
// Requires k >= 1, non-negative weights and left-to-right edges.
std::vector<GraphPath> YenKShortestPaths(const SpanGraph& graph, int k);

}  // namespace structinfer

#endif  // STRUCTINFER_K_SHORTEST_PATHS_H_
