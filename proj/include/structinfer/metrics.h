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

// Evaluation for both tasks.
//
// SRL: exact and head match accuracy per question and per structure, and
// the overlap inconsistency rate. Coreference: pairwise link F1, MUC, B-cubed,
// entity CEAF, their CoNLL average, and the conditional transitivity
// violation rate. Ratios with a zero denominator are reported as 0 with
// `degenerate` set.

#ifndef STRUCTINFER_METRICS_H_
#define STRUCTINFER_METRICS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "structinfer/types.h"

namespace structinfer {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;
};

// Precision/recall from raw counts, F1 as their harmonic mean.
PRF PrfFromCounts(double precision_num, double precision_den,
                  double recall_num, double recall_den);

// ---- SRL ----

using HeadFinder = std::function<std::string(const std::string&)>;

// Surface head heuristic: drop trailing punctuation tokens and leading
// articles, return the last remaining token lower-cased.
std::string HeadOf(const std::string& span_text);

struct SrlRho {
  double rho_pair = 0.0;       // percent of assigned-span pairs that overlap
  double rho_structure = 0.0;  // percent of structures with any overlap
  int64_t violating_pairs = 0;
  int64_t comparable_pairs = 0;
  int64_t violating_structures = 0;
  int64_t structures = 0;
};

SrlRho RhoSrl(const std::vector<SrlStructure>& predictions);

struct SrlEvalReport {
  double exact_q = 0.0;
  double exact_s = 0.0;
  double head_q = 0.0;
  double head_s = 0.0;
  SrlRho rho;
  int64_t questions = 0;
  int64_t structures = 0;
  int64_t exact_questions_correct = 0;
  int64_t head_questions_correct = 0;
  int64_t exact_structures_correct = 0;
  int64_t head_structures_correct = 0;
  int64_t unassigned_questions = 0;
};

// Predictions and gold are matched by instance id and role id. Unassigned
// roles count as wrong.
absl::StatusOr<SrlEvalReport> EvaluateSrl(
    const std::vector<SrlStructure>& predictions,
    const std::vector<SrlGold>& gold, const HeadFinder& head = HeadOf);

// ---- Coreference ----

struct CorefRho {
  double percent = 0.0;
  int64_t antecedents = 0;  // (i,j,k) with y(i,j) = y(j,k) = 1
  int64_t violations = 0;   // ... and y(i,k) = 0
  bool degenerate = false;
};

// Counts every triple whose three pairs are all decided, once per choice of
// the shared middle mention.
CorefRho RhoCoref(const LinkDecisionSet& decisions, int mention_count);

struct PairCounts {
  int64_t true_positive = 0;
  int64_t predicted_positive = 0;
  int64_t gold_positive = 0;
};

// Gold label of a decided pair: both mentions share a gold cluster.
PairCounts CountPairs(const std::vector<Mention>& mentions,
                      const LinkDecisionSet& decisions, const Clustering& gold);
PRF PairwiseF1(const std::vector<Mention>& mentions,
               const LinkDecisionSet& decisions, const Clustering& gold);

// Raw numerators/denominators so that corpus scores micro-average over
// documents the way the CoNLL scorer does.
struct ClusterCounts {
  double precision_num = 0.0;
  double precision_den = 0.0;
  double recall_num = 0.0;
  double recall_den = 0.0;

  ClusterCounts& operator+=(const ClusterCounts& other);
  PRF Score() const;
};

ClusterCounts MucCounts(const Clustering& pred, const Clustering& gold);
ClusterCounts BCubedCounts(const Clustering& pred, const Clustering& gold);
ClusterCounts CeafECounts(const Clustering& pred, const Clustering& gold);

PRF Muc(const Clustering& pred, const Clustering& gold);
PRF BCubed(const Clustering& pred, const Clustering& gold);
PRF CeafE(const Clustering& pred, const Clustering& gold);

// Mean of the three F1 values, as a percentage.
double ConllAverage(double muc_f1, double b_cubed_f1, double ceaf_e_f1);

struct CorefDocumentPrediction {
  std::string document_id;
  std::vector<Mention> mentions;
  LinkDecisionSet decisions;
  std::optional<Clustering> clustering;  // absent for unconstrained runs
};

struct CorefEvalReport {
  PRF pairwise;
  bool has_clusters = false;
  PRF muc;
  PRF b_cubed;
  PRF ceaf_e;
  double conll = 0.0;
  CorefRho rho;
  int64_t documents = 0;
  int64_t decided_pairs = 0;
};

absl::StatusOr<CorefEvalReport> EvaluateCoref(
    const std::vector<CorefDocumentPrediction>& predictions,
    const std::vector<CorefGold>& gold);

}  // namespace structinfer

#endif  // STRUCTINFER_METRICS_H_
