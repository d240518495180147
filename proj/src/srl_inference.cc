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

#include "structinfer/srl_inference.h"

#include <map>

#include "absl/strings/str_cat.h"

namespace structinfer {
namespace {

// Role usage of a path; false if some role appears twice or a label names a
// role outside `role_ids`.
bool RoleUsage(const SpanGraph& graph, const GraphPath& path,
               const std::map<std::string, int>& role_slot,
               std::vector<const Edge*>& used) {
  used.assign(role_slot.size(), nullptr);
  for (int e : path.edges) {
    const Edge& edge = graph.edges[e];
    if (edge.is_null()) continue;
    auto it = role_slot.find(edge.label->role_id);
    if (it == role_slot.end() || used[it->second] != nullptr) return false;
    used[it->second] = &edge;
  }
  return true;
}

SrlStructure ToStructure(const std::vector<std::string>& role_ids,
                         const std::vector<const Edge*>& used, double cost) {
  SrlStructure out;
  out.total_cost = cost;
  for (size_t r = 0; r < role_ids.size(); ++r) {
    RoleAssignment ra{role_ids[r], std::nullopt};
    if (used[r] != nullptr) {
      const SpanLabel& label = *used[r]->label;
      ra.assignment = SpanAssignment{label.span, label.text, label.rank};
    }
    out.roles.push_back(std::move(ra));
  }
  return out;
}

}  // namespace

SrlStructure SelectStructure(const SpanGraph& graph,
                             const std::vector<GraphPath>& paths,
                             const std::vector<std::string>& role_ids) {
  std::map<std::string, int> role_slot;
  for (size_t r = 0; r < role_ids.size(); ++r) {
    role_slot.emplace(role_ids[r], static_cast<int>(r));
  }
  std::vector<const Edge*> used;
  std::vector<const Edge*> fallback(role_ids.size(), nullptr);
  double fallback_cost = 0.0;
  bool have_fallback = false;
  for (const GraphPath& path : paths) {
    if (!RoleUsage(graph, path, role_slot, used)) continue;
    if (static_cast<size_t>(path.span_edge_count) == role_ids.size()) {
      return ToStructure(role_ids, used, path.weight);
    }
    if (!have_fallback) {
      fallback = used;
      fallback_cost = path.weight;
      have_fallback = true;
    }
  }
  return ToStructure(role_ids, fallback, fallback_cost);
}

absl::StatusOr<SrlStructure> InferSrl(const SrlInstance& instance,
                                      const SrlInferenceOptions& options) {
  if (options.k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must be positive, got ", options.k));
  }
  absl::StatusOr<SpanGraphBuild> build = BuildSpanGraph(instance, options.graph);
  if (!build.ok()) return build.status();
  std::vector<std::string> role_ids;
  for (const RoleQuestion& role : instance.roles) role_ids.push_back(role.role_id);
  const std::vector<GraphPath> paths = YenKShortestPaths(build->graph, options.k);
  SrlStructure structure = SelectStructure(build->graph, paths, role_ids);
  structure.instance_id = instance.id;
  return structure;
}

absl::StatusOr<SrlStructure> InferSrlUnconstrained(
    const SrlInstance& instance, const SpanGraphOptions& options) {
  absl::StatusOr<SpanGraphBuild> build = BuildSpanGraph(instance, options);
  if (!build.ok()) return build.status();
  SrlStructure structure;
  structure.instance_id = instance.id;
  for (const RoleQuestion& role : instance.roles) {
    RoleAssignment ra{role.role_id, std::nullopt};
    const Edge* best = nullptr;
    for (const Edge& edge : build->graph.edges) {
      if (edge.is_null() || edge.label->role_id != role.role_id) continue;
      if (best == nullptr || edge.weight < best->weight ||
          (edge.weight == best->weight &&
           SpanLabelLess(*edge.label, *best->label))) {
        best = &edge;
      }
    }
    if (best != nullptr) {
      ra.assignment =
          SpanAssignment{best->label->span, best->label->text, best->label->rank};
    }
    structure.roles.push_back(std::move(ra));
  }
  return structure;
}

}  // namespace structinfer
