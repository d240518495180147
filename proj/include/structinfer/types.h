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

// Domain types shared by the SRL and coreference pipelines.

#ifndef STRUCTINFER_TYPES_H_
#define STRUCTINFER_TYPES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"

namespace structinfer {

// Half-open token interval [start, end).
struct TokenSpan {
  int start = 0;
  int end = 0;

  bool valid() const { return 0 <= start && start < end; }
  int length() const { return end - start; }

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
  friend auto operator<=>(const TokenSpan&, const TokenSpan&) = default;
};

// True iff the two half-open intervals share at least one token.
inline bool SpansOverlap(const TokenSpan& a, const TokenSpan& b) {
  return a.start < b.end && b.start < a.end;
}

// One generated answer with its model log-score. Rank 1 is the best.
struct ScoredCandidate {
  std::string text;
  double score = 0.0;
  int rank = 1;

  friend bool operator==(const ScoredCandidate&,
                         const ScoredCandidate&) = default;
};

// Checks that ranks run 1..n without gaps and scores never increase.
absl::Status ValidateCandidateList(const std::vector<ScoredCandidate>& list);

struct RoleQuestion {
  std::string role_id;
  std::string question;
  std::vector<ScoredCandidate> candidates;

  friend bool operator==(const RoleQuestion&, const RoleQuestion&) = default;
};

// A predicate of a pre-tokenized sentence with one question per role.
struct SrlInstance {
  std::string id;
  std::vector<std::string> tokens;
  // Surface sentence used as prompt context. Empty means "tokens joined by
  // single spaces".
  std::string sentence;
  int predicate_index = 0;
  std::vector<RoleQuestion> roles;

  std::string ContextText() const;

  friend bool operator==(const SrlInstance&, const SrlInstance&) = default;
};

// Checks unique role ids, well-formed candidate lists and token bounds.
// Skeleton instances (no candidates yet) pass when `require_candidates` is
// false.
absl::Status ValidateSrlInstance(const SrlInstance& instance,
                                 bool require_candidates = true);

struct SpanAssignment {
  TokenSpan span;
  std::string text;
  int rank = 1;

  friend bool operator==(const SpanAssignment&,
                         const SpanAssignment&) = default;
};

struct RoleAssignment {
  std::string role_id;
  std::optional<SpanAssignment> assignment;

  friend bool operator==(const RoleAssignment&,
                         const RoleAssignment&) = default;
};

// Role -> span assignment for one predicate. Roles appear in instance order;
// unassigned roles carry std::nullopt.
struct SrlStructure {
  std::string instance_id;
  std::vector<RoleAssignment> roles;
  double total_cost = 0.0;

  bool complete() const;
  int assigned_count() const;
  const RoleAssignment* Find(const std::string& role_id) const;

  friend bool operator==(const SrlStructure&, const SrlStructure&) = default;
};

struct Mention {
  std::string id;
  std::string text;
  int sentence_index = 0;
  // Whitespace-token location within its sentence; start < 0 when unknown.
  TokenSpan tokens{-1, -1};

  friend bool operator==(const Mention&, const Mention&) = default;
};

// Link score for an unordered mention pair, stored with first < second
// (mention indices in document order).
struct PairScore {
  int first = 0;
  int second = 0;
  double score = 0.0;

  friend bool operator==(const PairScore&, const PairScore&) = default;
};

struct CorefInstance {
  std::string document_id;
  std::vector<Mention> mentions;
  std::vector<std::string> sentences;
  // Sorted by (first, second); one entry per scored pair.
  std::vector<PairScore> pair_scores;

  int IndexOf(const std::string& mention_id) const;
  std::optional<double> ScoreOf(int i, int j) const;
  // Dense n x n matrix with 0 for unscored pairs.
  std::vector<std::vector<double>> DenseScores() const;

  friend bool operator==(const CorefInstance&, const CorefInstance&) = default;
};

// Checks unique mention ids and that every scored pair is ordered, in range
// and listed once. Re-sorts nothing; callers use NormalizePairs first.
absl::Status ValidateCorefInstance(const CorefInstance& instance);

// Orders pairs earlier-mention-first and sorts them.
void NormalizePairs(std::vector<PairScore>& pairs);

// Partition of mention ids. Canonical form: members in document order,
// clusters ordered by their first member.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<std::vector<std::string>> clusters)
      : clusters_(std::move(clusters)) {}

  // Builds the canonical clustering from per-mention labels.
  static Clustering FromLabels(const std::vector<Mention>& mentions,
                               const std::vector<int>& labels);

  const std::vector<std::vector<std::string>>& clusters() const {
    return clusters_;
  }
  size_t size() const { return clusters_.size(); }
  size_t mention_count() const;

  // Per-mention cluster label aligned with `mentions`; -1 for mentions not
  // in the clustering.
  std::vector<int> LabelsFor(const std::vector<Mention>& mentions) const;

  // Every id at most once and no empty clusters.
  absl::Status Validate() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<std::vector<std::string>> clusters_;
};

// Binary link decision on a scored pair.
struct PairDecision {
  int first = 0;
  int second = 0;
  bool link = false;

  friend bool operator==(const PairDecision&, const PairDecision&) = default;
};

using LinkDecisionSet = std::vector<PairDecision>;

// Decisions implied by a partition on the instance's scored pairs.
LinkDecisionSet DecisionsFromClustering(const CorefInstance& instance,
                                        const Clustering& clustering);

// Sum of scores of scored pairs that share a cluster, summed in pair order.
double ClusteringObjective(const CorefInstance& instance,
                           const std::vector<int>& labels);

struct SrlGold {
  std::string instance_id;
  // role_id -> acceptable answer strings.
  std::map<std::string, std::vector<std::string>> answers;

  friend bool operator==(const SrlGold&, const SrlGold&) = default;
};

struct CorefGold {
  std::string document_id;
  Clustering clusters;

  friend bool operator==(const CorefGold&, const CorefGold&) = default;
};

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> SplitTokens(const std::string& text);
std::string JoinTokens(const std::vector<std::string>& tokens, size_t begin,
                       size_t end);

}  // namespace structinfer

#endif  // STRUCTINFER_TYPES_H_
