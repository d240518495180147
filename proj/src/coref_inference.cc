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

#include "structinfer/coref_inference.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"

namespace structinfer {
namespace {

// Exact correlation clustering of one component by depth-first branch and
// bound. Mentions are assigned in document order; each either joins an
// existing cluster or opens the next one.
class PartitionSearch {
 public:
  PartitionSearch(std::vector<std::vector<double>> scores, int64_t node_budget)
      : n_(static_cast<int>(scores.size())),
        scores_(std::move(scores)),
        node_budget_(node_budget),
        labels_(n_, -1),
        reach_(n_, std::vector<double>(n_, 0.0)),
        suffix_positive_(n_ + 1, 0.0) {
    for (int d = n_ - 1; d >= 0; --d) {
      double row = 0.0;
      for (int v = d + 1; v < n_; ++v) row += std::max(0.0, scores_[d][v]);
      suffix_positive_[d] = suffix_positive_[d + 1] + row;
    }
  }

  void SeedIncumbent(const std::vector<int>& labels, double objective) {
    best_labels_ = labels;
    best_ = objective;
  }

  void Run() { Descend(0, 0, 0.0); }

  const std::vector<int>& best_labels() const { return best_labels_; }
  int64_t nodes() const { return nodes_; }
  bool exhausted_budget() const { return aborted_; }

 private:
  // reach_[c][u] holds the score mass between cluster c and unassigned u.
  double Bound(int depth, int clusters, double objective) const {
    double bound = objective + suffix_positive_[depth];
    for (int u = depth; u < n_; ++u) {
      double gain = 0.0;
      for (int c = 0; c < clusters; ++c) gain = std::max(gain, reach_[c][u]);
      bound += gain;
    }
    return bound;
  }

  void Apply(int depth, int cluster, int sign) {
    for (int u = depth + 1; u < n_; ++u) {
      reach_[cluster][u] += sign * scores_[depth][u];
    }
  }

  void Descend(int depth, int clusters, double objective) {
    if (aborted_) return;
    if (++nodes_ > node_budget_) {
      aborted_ = true;
      return;
    }
    if (depth == n_) {
      if (objective > best_) {
        best_ = objective;
        best_labels_ = labels_;
      }
      return;
    }
    struct Child {
      int cluster;
      double gain;
      double bound;
    };
    std::vector<Child> children;
    children.reserve(clusters + 1);
    for (int c = 0; c <= clusters; ++c) {
      const double gain = c < clusters ? reach_[c][depth] : 0.0;
      Apply(depth, c, +1);
      const double bound =
          Bound(depth + 1, std::max(clusters, c + 1), objective + gain);
      Apply(depth, c, -1);
      children.push_back({c, gain, bound});
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) {
                       return a.bound > b.bound;
                     });
    for (const Child& child : children) {
      if (child.bound <= best_) break;
      labels_[depth] = child.cluster;
      Apply(depth, child.cluster, +1);
      Descend(depth + 1, std::max(clusters, child.cluster + 1),
              objective + child.gain);
      Apply(depth, child.cluster, -1);
      labels_[depth] = -1;
      if (aborted_) return;
    }
  }

  const int n_;
  const std::vector<std::vector<double>> scores_;
  const int64_t node_budget_;
  std::vector<int> labels_;
  std::vector<std::vector<double>> reach_;
  std::vector<double> suffix_positive_;
  std::vector<int> best_labels_;
  double best_ = 0.0;
  int64_t nodes_ = 0;
  bool aborted_ = false;
};

int Find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Compact labels so that clusters are numbered by first occurrence.
std::vector<int> Canonicalize(const std::vector<int>& labels) {
  std::vector<int> out(labels.size());
  std::vector<std::pair<int, int>> remap;
  for (size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(remap.begin(), remap.end(),
                           [&](const auto& p) { return p.first == labels[i]; });
    if (it == remap.end()) {
      remap.emplace_back(labels[i], static_cast<int>(remap.size()));
      out[i] = remap.back().second;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

std::vector<int> RightToLeftLabels(int n, const LinkDecisionSet& decisions) {
  std::vector<std::vector<int>> linked_before(n);
  for (const PairDecision& d : decisions) {
    if (d.link) linked_before[d.second].push_back(d.first);
  }
  std::vector<int> labels(n, -1);
  int next = 0;
  for (int j = 0; j < n; ++j) {
    const auto& prev = linked_before[j];
    if (prev.empty()) {
      labels[j] = next++;
    } else {
      labels[j] = labels[*std::max_element(prev.begin(), prev.end())];
    }
  }
  return labels;
}

}  // namespace

LinkDecisionSet UnconstrainedDecisions(const CorefInstance& instance) {
  LinkDecisionSet decisions;
  decisions.reserve(instance.pair_scores.size());
  for (const PairScore& p : instance.pair_scores) {
    decisions.push_back({p.first, p.second, p.score > 0.0});
  }
  return decisions;
}

AllLinkResult AllLinkSolve(const CorefInstance& instance,
                           const AllLinkOptions& options) {
  const int n = static_cast<int>(instance.mentions.size());
  AllLinkResult result;
  result.report.optimal = true;

  // Some optimal partition keeps every cluster inside one connected component
  // of the positive-score graph: splitting a cluster along a cut with no
  // positive pair never lowers the objective. Components are solved apart.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const PairScore& p : instance.pair_scores) {
    if (p.score > 0.0) parent[Find(parent, p.first)] = Find(parent, p.second);
  }
  std::vector<std::vector<int>> components;
  std::vector<int> component_of(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = Find(parent, i);
    if (component_of[root] < 0) {
      component_of[root] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[component_of[root]].push_back(i);
  }
  result.report.components = static_cast<int>(components.size());

  const std::vector<std::vector<double>> dense = instance.DenseScores();
  const std::vector<int> r2l = RightToLeftLabels(n, UnconstrainedDecisions(instance));

  std::vector<int> labels(n, -1);
  int next_label = 0;
  int64_t budget = options.node_limit;
  for (const std::vector<int>& members : components) {
    const int m = static_cast<int>(members.size());
    if (m == 1) {
      labels[members[0]] = next_label++;
      continue;
    }
    std::vector<std::vector<double>> local(m, std::vector<double>(m, 0.0));
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) local[a][b] = dense[members[a]][members[b]];
    }
    PartitionSearch search(local, std::max<int64_t>(budget, 0));

    // Incumbent: the better of all-singletons and the R2L partition.
    std::vector<int> singletons(m);
    std::iota(singletons.begin(), singletons.end(), 0);
    std::vector<int> seeded(m);
    for (int a = 0; a < m; ++a) seeded[a] = r2l[members[a]];
    seeded = Canonicalize(seeded);
    double seeded_objective = 0.0;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        if (seeded[a] == seeded[b]) seeded_objective += local[a][b];
      }
    }
    if (seeded_objective > 0.0) {
      search.SeedIncumbent(seeded, seeded_objective);
    } else {
      search.SeedIncumbent(singletons, 0.0);
    }
    search.Run();
    result.report.nodes += search.nodes();
    budget -= search.nodes();
    if (search.exhausted_budget()) result.report.optimal = false;

    const std::vector<int>& best = search.best_labels();
    int max_local = -1;
    for (int a = 0; a < m; ++a) {
      labels[members[a]] = next_label + best[a];
      max_local = std::max(max_local, best[a]);
    }
    next_label += max_local + 1;
  }

  const std::vector<int> canonical = Canonicalize(labels);
  result.clustering = Clustering::FromLabels(instance.mentions, canonical);
  result.report.objective = ClusteringObjective(instance, canonical);
  return result;
}

absl::StatusOr<Clustering> BruteForceClustering(const CorefInstance& instance) {
  const int n = static_cast<int>(instance.mentions.size());
  if (n > kBruteForceMaxMentions) {
    return absl::InvalidArgumentError(
        absl::StrCat("brute-force clustering supports at most ",
                     kBruteForceMaxMentions, " mentions, got ", n));
  }
  if (n == 0) return Clustering();

  // Restricted growth strings in lexicographic order.
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  std::vector<int> best = rgs;
  double best_objective = ClusteringObjective(instance, rgs);
  int best_clusters = 1;
  while (true) {
    int i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
    const double objective = ClusteringObjective(instance, rgs);
    const int clusters = prefix_max[n - 1] + 1;
    if (objective > best_objective ||
        (objective == best_objective && clusters > best_clusters)) {
      best = rgs;
      best_objective = objective;
      best_clusters = clusters;
    }
  }
  return Clustering::FromLabels(instance.mentions, best);
}

Clustering RightToLeftAssign(const CorefInstance& instance,
                             const LinkDecisionSet& decisions) {
  const int n = static_cast<int>(instance.mentions.size());
  return Clustering::FromLabels(instance.mentions,
                                RightToLeftLabels(n, decisions));
}

Clustering BaselineAllYes(const CorefInstance& instance) {
  return Clustering::FromLabels(
      instance.mentions, std::vector<int>(instance.mentions.size(), 0));
}

Clustering BaselineAllNo(const CorefInstance& instance) {
  std::vector<int> labels(instance.mentions.size());
  std::iota(labels.begin(), labels.end(), 0);
  return Clustering::FromLabels(instance.mentions, labels);
}

double ObjectiveOf(const CorefInstance& instance, const Clustering& clustering) {
  std::vector<int> labels = clustering.LabelsFor(instance.mentions);
  int next = static_cast<int>(clustering.size());
  for (int& l : labels) {
    if (l < 0) l = next++;
  }
  return ClusteringObjective(instance, labels);
}

}  // namespace structinfer
