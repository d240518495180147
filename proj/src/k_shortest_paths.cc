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

#include <cassert>
#include <limits>
#include <optional>
#include <set>

namespace structinfer {
namespace {

// Compares two span-label sequences produced by walking edge lists.
template <typename NextA, typename NextB>
bool LabelSequenceLess(NextA next_a, NextB next_b) {
  while (true) {
    const SpanLabel* a = next_a();
    const SpanLabel* b = next_b();
    if (a == nullptr || b == nullptr) return a == nullptr && b != nullptr;
    if (SpanLabelLess(*a, *b)) return true;
    if (SpanLabelLess(*b, *a)) return false;
  }
}

// Best suffix from every vertex to the target under the path ranking,
// restricted to unblocked vertices and edges. Edges only go left to right,
// so vertices are relaxed in descending index order.
class SuffixTable {
 public:
  SuffixTable(const SpanGraph& graph, const std::vector<char>& blocked_vertex,
              const std::vector<char>& blocked_edge, int lowest_vertex)
      : graph_(graph),
        next_(graph.vertex_count, -1),
        weight_(graph.vertex_count, std::numeric_limits<double>::infinity()),
        count_(graph.vertex_count, 0) {
    const int target = graph.target();
    weight_[target] = 0.0;
    for (int v = target - 1; v >= lowest_vertex; --v) {
      if (blocked_vertex[v]) continue;
      for (int e : graph.out_edges[v]) {
        if (blocked_edge[e]) continue;
        const Edge& edge = graph.edges[e];
        assert(edge.from < edge.to);
        if (blocked_vertex[edge.to] || !Reachable(edge.to)) continue;
        if (next_[v] < 0 || Better(e, next_[v])) next_[v] = e;
      }
      if (next_[v] >= 0) {
        const Edge& edge = graph.edges[next_[v]];
        weight_[v] = edge.weight + weight_[edge.to];
        count_[v] = (edge.is_null() ? 0 : 1) + count_[edge.to];
      }
    }
  }

  bool Reachable(int v) const {
    return v == graph_.target() || next_[v] >= 0;
  }

  // Appends the best suffix from `v` to `edges`.
  void AppendPath(int v, std::vector<int>& edges) const {
    while (v != graph_.target()) {
      edges.push_back(next_[v]);
      v = graph_.edges[next_[v]].to;
    }
  }

 private:
  // Yields span labels along "edge then best suffix", skipping null edges.
  auto Walker(int first_edge) const {
    return [this, e = first_edge]() mutable -> const SpanLabel* {
      while (e >= 0) {
        const Edge& edge = graph_.edges[e];
        e = edge.to == graph_.target() ? -1 : next_[edge.to];
        if (!edge.is_null()) return &*edge.label;
      }
      return nullptr;
    };
  }

  // Ranks "edge a then best suffix" against "edge b then best suffix".
  bool Better(int a, int b) const {
    const Edge& ea = graph_.edges[a];
    const Edge& eb = graph_.edges[b];
    const double wa = ea.weight + weight_[ea.to];
    const double wb = eb.weight + weight_[eb.to];
    if (wa != wb) return wa < wb;
    const int ca = (ea.is_null() ? 0 : 1) + count_[ea.to];
    const int cb = (eb.is_null() ? 0 : 1) + count_[eb.to];
    if (ca != cb) return ca > cb;
    return LabelSequenceLess(Walker(a), Walker(b));
  }

  const SpanGraph& graph_;
  std::vector<int> next_;
  std::vector<double> weight_;
  std::vector<int> count_;
};

bool SharesRoot(const GraphPath& path, const std::vector<int>& root) {
  if (path.edges.size() <= root.size()) return false;
  for (size_t i = 0; i < root.size(); ++i) {
    if (path.edges[i] != root[i]) return false;
  }
  return true;
}

}  // namespace

void ComputePathTotals(const SpanGraph& graph, GraphPath& path) {
  path.weight = 0.0;
  path.span_edge_count = 0;
  for (int e : path.edges) {
    path.weight += graph.edges[e].weight;
    if (!graph.edges[e].is_null()) ++path.span_edge_count;
  }
}

bool PathLess(const SpanGraph& graph, const GraphPath& a, const GraphPath& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  if (a.span_edge_count != b.span_edge_count) {
    return a.span_edge_count > b.span_edge_count;
  }
  auto walker = [&graph](const GraphPath& p) {
    return [&graph, &p, i = size_t{0}]() mutable -> const SpanLabel* {
      while (i < p.edges.size()) {
        const Edge& edge = graph.edges[p.edges[i++]];
        if (!edge.is_null()) return &*edge.label;
      }
      return nullptr;
    };
  };
  return LabelSequenceLess(walker(a), walker(b));
}

bool IsContiguousPath(const SpanGraph& graph, const GraphPath& path) {
  int at = graph.source();
  std::vector<char> seen(graph.vertex_count, 0);
  seen[at] = 1;
  for (int e : path.edges) {
    if (e < 0 || e >= static_cast<int>(graph.edges.size())) return false;
    const Edge& edge = graph.edges[e];
    if (edge.from != at || seen[edge.to]) return false;
    at = edge.to;
    seen[at] = 1;
  }
  return at == graph.target();
}

std::vector<GraphPath> YenKShortestPaths(const SpanGraph& graph, int k) {
  std::vector<GraphPath> accepted;
  if (k < 1 || graph.vertex_count < 1) return accepted;

  const size_t edge_count = graph.edges.size();
  std::vector<char> blocked_vertex(graph.vertex_count, 0);
  std::vector<char> blocked_edge(edge_count, 0);

  {
    SuffixTable table(graph, blocked_vertex, blocked_edge, graph.source());
    if (!table.Reachable(graph.source())) return accepted;
    GraphPath first;
    table.AppendPath(graph.source(), first.edges);
    ComputePathTotals(graph, first);
    accepted.push_back(std::move(first));
  }

  auto less = [&graph](const GraphPath& a, const GraphPath& b) {
    return PathLess(graph, a, b);
  };
  std::set<GraphPath, decltype(less)> pending(less);

  while (static_cast<int>(accepted.size()) < k) {
    const GraphPath& previous = accepted.back();
    std::vector<int> root;
    for (size_t i = 0; i < previous.edges.size(); ++i) {
      const int spur = graph.edges[previous.edges[i]].from;
      for (const GraphPath& p : accepted) {
        if (SharesRoot(p, root)) blocked_edge[p.edges[i]] = 1;
      }
      for (int e : root) blocked_vertex[graph.edges[e].from] = 1;

      SuffixTable table(graph, blocked_vertex, blocked_edge, spur);
      if (table.Reachable(spur)) {
        GraphPath candidate;
        candidate.edges = root;
        table.AppendPath(spur, candidate.edges);
        ComputePathTotals(graph, candidate);
        pending.insert(std::move(candidate));
      }

      for (const GraphPath& p : accepted) {
        if (SharesRoot(p, root)) blocked_edge[p.edges[i]] = 0;
      }
      for (int e : root) blocked_vertex[graph.edges[e].from] = 0;
      root.push_back(previous.edges[i]);
    }
    if (pending.empty()) break;
    accepted.push_back(*pending.begin());
    pending.erase(pending.begin());
  }
  return accepted;
}

}  // namespace structinfer
