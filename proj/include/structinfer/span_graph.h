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

// Boundary-vertex span graph for SRL argument selection.
//
// Vertex j sits between token j-1 and token j, so a sentence of n tokens has
// n+1 vertices. Every consecutive vertex pair is joined by a zero-weight null
// edge; every locatable candidate of a role contributes a span edge from
// span.start to span.end weighted by its score gap to the role's best
// locatable candidate. A path from vertex 0 to vertex n therefore selects a
// set of pairwise non-overlapping spans.

#ifndef STRUCTINFER_SPAN_GRAPH_H_
#define STRUCTINFER_SPAN_GRAPH_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "structinfer/types.h"

namespace structinfer {

struct SpanLabel {
  std::string role_id;
  int rank = 1;
  std::string text;
  TokenSpan span;

  friend bool operator==(const SpanLabel&, const SpanLabel&) = default;
};

struct Edge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
  std::optional<SpanLabel> label;  // nullopt for null edges

  bool is_null() const { return !label.has_value(); }
};

struct SpanGraph {
  int vertex_count = 0;
  std::vector<Edge> edges;
  // Outgoing edge ids per vertex, ordered by (label key) with null edges
  // last. Built by Finalize().
  std::vector<std::vector<int>> out_edges;

  int source() const { return 0; }
  int target() const { return vertex_count - 1; }

  void Finalize();
};

struct SpanGraphOptions {
  // Only candidates with rank <= top_n are used.
  int top_n = 20;
  // Retry occurrence lookup ignoring ASCII case when the exact lookup fails.
  bool case_insensitive_fallback = false;
  // Fail when a role has no locatable candidate.
  bool strict = false;
};

struct SpanGraphDiagnostics {
  int dropped_candidates = 0;
  std::vector<std::string> unassignable_roles;
};

struct SpanGraphBuild {
  SpanGraph graph;
  SpanGraphDiagnostics diagnostics;
};

// All token-aligned occurrences of the whitespace-tokenized `span_text`.
std::vector<TokenSpan> LocateSpanOccurrences(
    const std::vector<std::string>& sentence_tokens,
    const std::string& span_text, bool case_insensitive = false);

absl::StatusOr<SpanGraphBuild> BuildSpanGraph(
    const SrlInstance& instance, const SpanGraphOptions& options = {});

// Orders span labels by (role_id, rank, start).
bool SpanLabelLess(const SpanLabel& a, const SpanLabel& b);

}  // namespace structinfer

#endif  // STRUCTINFER_SPAN_GRAPH_H_
