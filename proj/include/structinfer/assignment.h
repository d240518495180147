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

#ifndef STRUCTINFER_ASSIGNMENT_H_
#define STRUCTINFER_ASSIGNMENT_H_

#include <vector>

namespace structinfer {

struct AssignmentResult {
  // row_to_col[r] is the column matched to row r, or -1.
  std::vector<int> row_to_col;
  double total = 0.0;
};

// Maximum-weight one-to-one matching of a rectangular matrix (Hungarian
// method, O(n^3)). Every row of the smaller side is matched.
AssignmentResult MaxWeightAssignment(
    const std::vector<std::vector<double>>& weights);

}  // namespace structinfer

#endif  // STRUCTINFER_ASSIGNMENT_H_
