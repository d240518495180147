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

#include "testing/oracles.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

namespace structinfer::testing {
namespace {

std::vector<std::string> Words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

using LabelKey = std::tuple<std::string, int, int>;

std::vector<LabelKey> LabelKeys(const SpanGraph& graph, const GraphPath& p) {
  std::vector<LabelKey> keys;
  for (int e : p.edges) {
    const Edge& edge = graph.edges[e];
    if (edge.label) {
      keys.emplace_back(edge.label->role_id, edge.label->rank,
                        edge.label->span.start);
    }
  }
  return keys;
}

}  // namespace

std::vector<GraphPath> AllPathsSorted(const SpanGraph& graph) {
  std::vector<GraphPath> paths;
  GraphPath current;
  std::function<void(int)> walk = [&](int v) {
    if (v == graph.target()) {
      GraphPath p;
      p.edges = current.edges;
      for (int e : p.edges) {
        p.weight += graph.edges[e].weight;
        if (graph.edges[e].label) ++p.span_edge_count;
      }
      paths.push_back(std::move(p));
      return;
    }
    for (size_t e = 0; e < graph.edges.size(); ++e) {
      if (graph.edges[e].from != v) continue;
      current.edges.push_back(static_cast<int>(e));
      walk(graph.edges[e].to);
      current.edges.pop_back();
    }
  };
  walk(graph.source());
  std::sort(paths.begin(), paths.end(),
            [&](const GraphPath& a, const GraphPath& b) {
              if (a.weight != b.weight) return a.weight < b.weight;
              if (a.span_edge_count != b.span_edge_count) {
                return a.span_edge_count > b.span_edge_count;
              }
              return LabelKeys(graph, a) < LabelKeys(graph, b);
            });
  return paths;
}

std::optional<double> ExhaustiveSrlOptimum(const SrlInstance& instance,
                                           int top_n) {
  struct Option {
    int start;
    int end;
    double cost;
  };
  std::vector<std::vector<Option>> options;
  const int n = static_cast<int>(instance.tokens.size());
  for (const RoleQuestion& q : instance.roles) {
    std::vector<std::pair<double, std::pair<int, int>>> located;
    for (const ScoredCandidate& c : q.candidates) {
      if (c.rank > top_n) continue;
      const std::vector<std::string> words = Words(c.text);
      const int len = static_cast<int>(words.size());
      for (int s = 0; len > 0 && s + len <= n; ++s) {
        if (std::equal(words.begin(), words.end(), instance.tokens.begin() + s)) {
          located.push_back({c.score, {s, s + len}});
        }
      }
    }
    if (located.empty()) return std::nullopt;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : located) best = std::max(best, l.first);
    std::vector<Option> role;
    for (const auto& [score, span] : located) {
      role.push_back({span.first, span.second, best - score});
    }
    options.push_back(std::move(role));
  }

  std::optional<double> best;
  std::vector<const Option*> chosen;
  std::function<void(size_t, double)> choose = [&](size_t r, double cost) {
    if (r == options.size()) {
      if (!best || cost < *best) best = cost;
      return;
    }
    for (const Option& o : options[r]) {
      bool clash = false;
      for (const Option* c : chosen) {
        if (o.start < c->end && c->start < o.end) clash = true;
      }
      if (clash) continue;
      chosen.push_back(&o);
      choose(r + 1, cost + o.cost);
      chosen.pop_back();
    }
  };
  choose(0, 0.0);
  return best;
}

double BellOptimum(const CorefInstance& instance) {
  const int n = static_cast<int>(instance.mentions.size());
  std::vector<int> rgs(n, 0);
  double best = 0.0;
  bool first = true;
  // Restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
  std::function<void(int, int)> rec = [&](int i, int max_label) {
    if (i == n) {
      double objective = 0.0;
      for (const PairScore& p : instance.pair_scores) {
        if (rgs[p.first] == rgs[p.second]) objective += p.score;
      }
      if (first || objective > best) best = objective;
      first = false;
      return;
    }
    for (int c = 0; c <= max_label + 1; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(max_label, c));
    }
  };
  if (n == 0) return 0.0;
  rgs[0] = 0;
  rec(1, 0);
  return best;
}

long long BellNumber(int n) {
  // Bell triangle.
  std::vector<long long> row = {1};
  for (int i = 1; i <= n; ++i) {
    std::vector<long long> next = {row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

double PermutationMaxAssignment(const std::vector<std::vector<double>>& w) {
  const size_t rows = w.size();
  const size_t cols = rows == 0 ? 0 : w[0].size();
  const size_t n = std::max(rows, cols);
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double total = 0.0;
    for (size_t r = 0; r < rows; ++r) {
      if (perm[r] < cols) total += w[r][perm[r]];
    }
    best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace structinfer::testing
