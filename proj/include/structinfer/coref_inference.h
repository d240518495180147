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

// Clustering mentions from pairwise link scores.
//
// The exact solver maximizes the sum of y(i,j) * s(i,j) over binary link
// decisions closed under transitivity. Transitively closed decision sets are
// exactly the partitions of the mentions, so the problem is solved as
// correlation clustering by branch and bound in partition space. Unscored
// pairs contribute 0 to the objective.

#ifndef STRUCTINFER_COREF_INFERENCE_H_
#define STRUCTINFER_COREF_INFERENCE_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "structinfer/types.h"

namespace structinfer {

// y = 1 iff s > 0. A score of exactly 0 is "No".
LinkDecisionSet UnconstrainedDecisions(const CorefInstance& instance);

struct SolverReport {
  double objective = 0.0;
  int64_t nodes = 0;
  int components = 0;
  bool optimal = false;
};

struct AllLinkOptions {
  int64_t node_limit = 10'000'000;
};

struct AllLinkResult {
  Clustering clustering;
  SolverReport report;
};

// Always returns the best clustering found. report.optimal is false when the
// node budget ran out before the search finished.
AllLinkResult AllLinkSolve(const CorefInstance& instance,
                           const AllLinkOptions& options = {});

// Bell-number enumeration of every partition. Ties prefer more clusters,
// then the lexicographically smaller restricted-growth label string.
absl::StatusOr<Clustering> BruteForceClustering(const CorefInstance& instance);

inline constexpr int kBruteForceMaxMentions = 10;

// Scans mentions in document order; each joins the cluster of the closest
// preceding mention it is linked to, else opens a new cluster.
Clustering RightToLeftAssign(const CorefInstance& instance,
                             const LinkDecisionSet& decisions);

Clustering BaselineAllYes(const CorefInstance& instance);
Clustering BaselineAllNo(const CorefInstance& instance);

// Objective of a clustering. Mentions missing from it count as singletons.
double ObjectiveOf(const CorefInstance& instance, const Clustering& clustering);

}  // namespace structinfer

#endif  // STRUCTINFER_COREF_INFERENCE_H_
