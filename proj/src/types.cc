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

#include "structinfer/types.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>
#include <unordered_map>

#include "absl/strings/str_cat.h"

namespace structinfer {

std::vector<std::string> SplitTokens(const std::string& text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j > i) tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string JoinTokens(const std::vector<std::string>& tokens, size_t begin,
                       size_t end) {
  std::string out;
  for (size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

absl::Status ValidateCandidateList(const std::vector<ScoredCandidate>& list) {
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i].rank != static_cast<int>(i) + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("candidate ranks must run 1..n; position ", i + 1,
                       " has rank ", list[i].rank));
    }
    if (i > 0 && list[i].score > list[i - 1].score) {
      return absl::InvalidArgumentError(
          absl::StrCat("candidate scores must be non-increasing in rank; rank ",
                       list[i].rank, " outscores rank ", list[i - 1].rank));
    }
  }
  return absl::OkStatus();
}

std::string SrlInstance::ContextText() const {
  if (!sentence.empty()) return sentence;
  return JoinTokens(tokens, 0, tokens.size());
}

absl::Status ValidateSrlInstance(const SrlInstance& instance,
                                 bool require_candidates) {
  if (instance.tokens.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("instance '", instance.id, "' has no tokens"));
  }
  if (instance.predicate_index < 0 ||
      instance.predicate_index >= static_cast<int>(instance.tokens.size())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "instance '", instance.id, "': predicate_index out of range"));
  }
  std::set<std::string> seen;
  for (const RoleQuestion& role : instance.roles) {
    if (role.role_id.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("instance '", instance.id, "': empty role_id"));
    }
    if (!seen.insert(role.role_id).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "instance '", instance.id, "': duplicate role_id '", role.role_id,
          "'"));
    }
    if (require_candidates && role.candidates.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("instance '", instance.id, "': role '", role.role_id,
                       "' has no candidates"));
    }
    absl::Status status = ValidateCandidateList(role.candidates);
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("instance '", instance.id, "', role '", role.role_id,
                       "': ", status.message()));
    }
  }
  return absl::OkStatus();
}

bool SrlStructure::complete() const {
  return std::all_of(roles.begin(), roles.end(), [](const RoleAssignment& r) {
    return r.assignment.has_value();
  });
}

int SrlStructure::assigned_count() const {
  return static_cast<int>(
      std::count_if(roles.begin(), roles.end(), [](const RoleAssignment& r) {
        return r.assignment.has_value();
      }));
}

const RoleAssignment* SrlStructure::Find(const std::string& role_id) const {
  for (const RoleAssignment& r : roles) {
    if (r.role_id == role_id) return &r;
  }
  return nullptr;
}

int CorefInstance::IndexOf(const std::string& mention_id) const {
  for (size_t i = 0; i < mentions.size(); ++i) {
    if (mentions[i].id == mention_id) return static_cast<int>(i);
  }
  return -1;
}

std::optional<double> CorefInstance::ScoreOf(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(
      pair_scores.begin(), pair_scores.end(), std::make_pair(i, j),
      [](const PairScore& p, const std::pair<int, int>& key) {
        return std::make_pair(p.first, p.second) < key;
      });
  if (it != pair_scores.end() && it->first == i && it->second == j) {
    return it->score;
  }
  return std::nullopt;
}

std::vector<std::vector<double>> CorefInstance::DenseScores() const {
  const size_t n = mentions.size();
  std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
  for (const PairScore& p : pair_scores) {
    dense[p.first][p.second] = p.score;
    dense[p.second][p.first] = p.score;
  }
  return dense;
}

void NormalizePairs(std::vector<PairScore>& pairs) {
  for (PairScore& p : pairs) {
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const PairScore& a, const PairScore& b) {
              return std::tie(a.first, a.second) < std::tie(b.first, b.second);
            });
}

absl::Status ValidateCorefInstance(const CorefInstance& instance) {
  std::set<std::string> ids;
  for (const Mention& m : instance.mentions) {
    if (!ids.insert(m.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("document '", instance.document_id,
                       "': duplicate mention id '", m.id, "'"));
    }
  }
  const int n = static_cast<int>(instance.mentions.size());
  for (size_t k = 0; k < instance.pair_scores.size(); ++k) {
    const PairScore& p = instance.pair_scores[k];
    if (p.first < 0 || p.second >= n || p.first >= p.second) {
      return absl::InvalidArgumentError(
          absl::StrCat("document '", instance.document_id,
                       "': malformed mention pair (", p.first, ",", p.second,
                       ")"));
    }
    if (k > 0) {
      const PairScore& q = instance.pair_scores[k - 1];
      if (std::tie(q.first, q.second) >= std::tie(p.first, p.second)) {
        return absl::InvalidArgumentError(
            absl::StrCat("document '", instance.document_id,
                         "': mention pairs unsorted or duplicated at (",
                         instance.mentions[p.first].id, ",",
                         instance.mentions[p.second].id, ")"));
      }
    }
  }
  return absl::OkStatus();
}

Clustering Clustering::FromLabels(const std::vector<Mention>& mentions,
                                  const std::vector<int>& labels) {
  std::vector<std::vector<std::string>> clusters;
  std::unordered_map<int, size_t> slot;
  for (size_t i = 0; i < mentions.size() && i < labels.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(labels[i], clusters.size());
    if (inserted) clusters.emplace_back();
    clusters[it->second].push_back(mentions[i].id);
  }
  return Clustering(std::move(clusters));
}

size_t Clustering::mention_count() const {
  size_t total = 0;
  for (const auto& c : clusters_) total += c.size();
  return total;
}

std::vector<int> Clustering::LabelsFor(
    const std::vector<Mention>& mentions) const {
  std::unordered_map<std::string, int> label_of;
  for (size_t c = 0; c < clusters_.size(); ++c) {
    for (const std::string& id : clusters_[c]) {
      label_of[id] = static_cast<int>(c);
    }
  }
  std::vector<int> labels(mentions.size(), -1);
  for (size_t i = 0; i < mentions.size(); ++i) {
    auto it = label_of.find(mentions[i].id);
    if (it != label_of.end()) labels[i] = it->second;
  }
  return labels;
}

absl::Status Clustering::Validate() const {
  std::set<std::string> seen;
  for (const auto& cluster : clusters_) {
    if (cluster.empty()) return absl::InvalidArgumentError("empty cluster");
    for (const std::string& id : cluster) {
      if (!seen.insert(id).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("mention '", id, "' appears in two clusters"));
      }
    }
  }
  return absl::OkStatus();
}

LinkDecisionSet DecisionsFromClustering(const CorefInstance& instance,
                                        const Clustering& clustering) {
  const std::vector<int> labels = clustering.LabelsFor(instance.mentions);
  LinkDecisionSet decisions;
  decisions.reserve(instance.pair_scores.size());
  for (const PairScore& p : instance.pair_scores) {
    const bool same = labels[p.first] >= 0 && labels[p.first] == labels[p.second];
    decisions.push_back({p.first, p.second, same});
  }
  return decisions;
}

double ClusteringObjective(const CorefInstance& instance,
                           const std::vector<int>& labels) {
  double total = 0.0;
  for (const PairScore& p : instance.pair_scores) {
    if (labels[p.first] == labels[p.second]) total += p.score;
  }
  return total;
}

}  // namespace structinfer
