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

#ifndef STRUCTINFER_SRL_INFERENCE_H_
#define STRUCTINFER_SRL_INFERENCE_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "structinfer/k_shortest_paths.h"
#include "structinfer/span_graph.h"
#include "structinfer/types.h"

namespace structinfer {

struct SrlInferenceOptions {
  int k = 20;
  SpanGraphOptions graph;
};

// Picks the first ranked path that assigns every role exactly once. Without
// one, falls back to the first path that repeats no role (a partial
// structure). Paths repeating a role are never chosen. `role_ids` gives the
// output role order.
SrlStructure SelectStructure(const SpanGraph& graph,
                             const std::vector<GraphPath>& paths,
                             const std::vector<std::string>& role_ids);

// Build graph -> K shortest paths -> structure selection.
absl::StatusOr<SrlStructure> InferSrl(const SrlInstance& instance,
                                      const SrlInferenceOptions& options = {});

// Per-role argmax without the overlap constraint: the best locatable
// candidate at its leftmost occurrence.
absl::StatusOr<SrlStructure> InferSrlUnconstrained(
    const SrlInstance& instance, const SpanGraphOptions& options = {});

}  // namespace structinfer

#endif  // STRUCTINFER_SRL_INFERENCE_H_
