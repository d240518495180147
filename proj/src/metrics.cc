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

#include "structinfer/metrics.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "structinfer/assignment.h"

namespace structinfer {
namespace {

double Percent(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) /
                              static_cast<double>(den);
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool IsPunctuationToken(const std::string& token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](char c) {
           return std::ispunct(static_cast<unsigned char>(c)) != 0;
         });
}

std::string NormalizeText(const std::string& text) {
  const std::vector<std::string> tokens = SplitTokens(text);
  return JoinTokens(tokens, 0, tokens.size());
}

using ClusterIndex = std::unordered_map<std::string, int>;

ClusterIndex IndexClusters(const Clustering& clustering) {
  ClusterIndex index;
  for (size_t c = 0; c < clustering.size(); ++c) {
    for (const std::string& id : clustering.clusters()[c]) {
      index[id] = static_cast<int>(c);
    }
  }
  return index;
}

// Sum over key clusters of |K| - |partition of K by response|, and the
// maximum attainable sum(|K| - 1).
void MucSide(const Clustering& key, const Clustering& response, double& num,
             double& den) {
  const ClusterIndex response_index = IndexClusters(response);
  for (const auto& cluster : key.clusters()) {
    std::set<int> parts;
    int unmatched = 0;
    for (const std::string& id : cluster) {
      auto it = response_index.find(id);
      if (it == response_index.end()) {
        ++unmatched;
      } else {
        parts.insert(it->second);
      }
    }
    const int size = static_cast<int>(cluster.size());
    num += size - static_cast<int>(parts.size()) - unmatched;
    den += size - 1;
  }
}

double Phi4(const std::vector<std::string>& a, const std::vector<std::string>& b,
            const ClusterIndex& b_index, int b_cluster) {
  int common = 0;
  for (const std::string& id : a) {
    auto it = b_index.find(id);
    if (it != b_index.end() && it->second == b_cluster) ++common;
  }
  return 2.0 * common / static_cast<double>(a.size() + b.size());
}

}  // namespace

PRF PrfFromCounts(double precision_num, double precision_den,
                  double recall_num, double recall_den) {
  PRF out;
  if (precision_den > 0) {
    out.precision = precision_num / precision_den;
  } else {
    out.degenerate = true;
  }
  if (recall_den > 0) {
    out.recall = recall_num / recall_den;
  } else {
    out.degenerate = true;
  }
  if (out.precision + out.recall > 0) {
    out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::string HeadOf(const std::string& span_text) {
  const std::vector<std::string> tokens = SplitTokens(span_text);
  if (tokens.empty()) return "";
  size_t end = tokens.size();
  while (end > 0 && IsPunctuationToken(tokens[end - 1])) --end;
  size_t begin = 0;
  static const std::set<std::string> kArticles = {"a", "an", "the"};
  while (begin < end && kArticles.count(Lower(tokens[begin])) > 0) ++begin;
  if (begin >= end) return Lower(tokens.back());
  return Lower(tokens[end - 1]);
}

SrlRho RhoSrl(const std::vector<SrlStructure>& predictions) {
  SrlRho rho;
  for (const SrlStructure& s : predictions) {
    ++rho.structures;
    std::vector<TokenSpan> spans;
    for (const RoleAssignment& r : s.roles) {
      if (r.assignment) spans.push_back(r.assignment->span);
    }
    bool violated = false;
    for (size_t i = 0; i < spans.size(); ++i) {
      for (size_t j = i + 1; j < spans.size(); ++j) {
        ++rho.comparable_pairs;
        if (SpansOverlap(spans[i], spans[j])) {
          ++rho.violating_pairs;
          violated = true;
        }
      }
    }
    if (violated) ++rho.violating_structures;
  }
  rho.rho_pair = Percent(rho.violating_pairs, rho.comparable_pairs);
  rho.rho_structure = Percent(rho.violating_structures, rho.structures);
  return rho;
}

absl::StatusOr<SrlEvalReport> EvaluateSrl(
    const std::vector<SrlStructure>& predictions,
    const std::vector<SrlGold>& gold, const HeadFinder& head) {
  std::map<std::string, const SrlGold*> gold_by_id;
  for (const SrlGold& g : gold) gold_by_id[g.instance_id] = &g;

  std::vector<std::string> misaligned;
  SrlEvalReport report;
  for (const SrlStructure& s : predictions) {
    auto it = gold_by_id.find(s.instance_id);
    if (it == gold_by_id.end()) {
      misaligned.push_back(s.instance_id);
      continue;
    }
    const SrlGold& g = *it->second;
    std::set<std::string> predicted_roles;
    for (const RoleAssignment& r : s.roles) predicted_roles.insert(r.role_id);
    std::set<std::string> gold_roles;
    for (const auto& [role, answers] : g.answers) gold_roles.insert(role);
    if (predicted_roles != gold_roles) {
      misaligned.push_back(s.instance_id);
      continue;
    }

    ++report.structures;
    bool all_exact = true;
    bool all_head = true;
    for (const RoleAssignment& r : s.roles) {
      ++report.questions;
      bool exact = false;
      bool head_match = false;
      if (r.assignment) {
        const std::string predicted = NormalizeText(r.assignment->text);
        const std::string predicted_head = head(r.assignment->text);
        for (const std::string& answer : g.answers.at(r.role_id)) {
          exact = exact || predicted == NormalizeText(answer);
          head_match = head_match || predicted_head == head(answer);
        }
      } else {
        ++report.unassigned_questions;
      }
      report.exact_questions_correct += exact;
      report.head_questions_correct += head_match;
      all_exact = all_exact && exact;
      all_head = all_head && head_match;
    }
    report.exact_structures_correct += all_exact;
    report.head_structures_correct += all_head;
  }
  if (!misaligned.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("predictions not aligned with gold for instances: ",
                     absl::StrJoin(misaligned, ", ")));
  }
  report.exact_q = Percent(report.exact_questions_correct, report.questions);
  report.head_q = Percent(report.head_questions_correct, report.questions);
  report.exact_s = Percent(report.exact_structures_correct, report.structures);
  report.head_s = Percent(report.head_structures_correct, report.structures);
  report.rho = RhoSrl(predictions);
  return report;
}

CorefRho RhoCoref(const LinkDecisionSet& decisions, int mention_count) {
  CorefRho rho;
  const int n = mention_count;
  // -1 undecided, 0 no link, 1 link.
  std::vector<std::vector<signed char>> state(
      n, std::vector<signed char>(n, -1));
  std::vector<std::vector<int>> linked(n);
  for (const PairDecision& d : decisions) {
    state[d.first][d.second] = state[d.second][d.first] = d.link ? 1 : 0;
    if (d.link) {
      linked[d.first].push_back(d.second);
      linked[d.second].push_back(d.first);
    }
  }
  for (int j = 0; j < n; ++j) {
    auto& around = linked[j];
    std::sort(around.begin(), around.end());
    for (size_t a = 0; a < around.size(); ++a) {
      for (size_t b = a + 1; b < around.size(); ++b) {
        const signed char closing = state[around[a]][around[b]];
        if (closing < 0) continue;
        ++rho.antecedents;
        if (closing == 0) ++rho.violations;
      }
    }
  }
  rho.degenerate = rho.antecedents == 0;
  rho.percent = Percent(rho.violations, rho.antecedents);
  return rho;
}

PairCounts CountPairs(const std::vector<Mention>& mentions,
                      const LinkDecisionSet& decisions, const Clustering& gold) {
  const std::vector<int> labels = gold.LabelsFor(mentions);
  PairCounts counts;
  for (const PairDecision& d : decisions) {
    const bool gold_link =
        labels[d.first] >= 0 && labels[d.first] == labels[d.second];
    counts.predicted_positive += d.link;
    counts.gold_positive += gold_link;
    counts.true_positive += d.link && gold_link;
  }
  return counts;
}

PRF PairwiseF1(const std::vector<Mention>& mentions,
               const LinkDecisionSet& decisions, const Clustering& gold) {
  const PairCounts c = CountPairs(mentions, decisions, gold);
  return PrfFromCounts(c.true_positive, c.predicted_positive, c.true_positive,
                       c.gold_positive);
}

ClusterCounts& ClusterCounts::operator+=(const ClusterCounts& other) {
  precision_num += other.precision_num;
  precision_den += other.precision_den;
  recall_num += other.recall_num;
  recall_den += other.recall_den;
  return *this;
}

PRF ClusterCounts::Score() const {
  return PrfFromCounts(precision_num, precision_den, recall_num, recall_den);
}

ClusterCounts MucCounts(const Clustering& pred, const Clustering& gold) {
  ClusterCounts counts;
  MucSide(gold, pred, counts.recall_num, counts.recall_den);
  MucSide(pred, gold, counts.precision_num, counts.precision_den);
  return counts;
}

ClusterCounts BCubedCounts(const Clustering& pred, const Clustering& gold) {
  const ClusterIndex pred_index = IndexClusters(pred);
  const ClusterIndex gold_index = IndexClusters(gold);
  auto overlap = [](const std::vector<std::string>& cluster,
                    const ClusterIndex& other, int other_cluster) {
    int common = 0;
    for (const std::string& id : cluster) {
      auto it = other.find(id);
      if (it != other.end() && it->second == other_cluster) ++common;
    }
    return common;
  };
  ClusterCounts counts;
  for (const auto& cluster : pred.clusters()) {
    for (const std::string& id : cluster) {
      auto it = gold_index.find(id);
      const int common =
          it == gold_index.end() ? 0 : overlap(cluster, gold_index, it->second);
      counts.precision_num += static_cast<double>(common) / cluster.size();
      counts.precision_den += 1;
    }
  }
  for (const auto& cluster : gold.clusters()) {
    for (const std::string& id : cluster) {
      auto it = pred_index.find(id);
      const int common =
          it == pred_index.end() ? 0 : overlap(cluster, pred_index, it->second);
      counts.recall_num += static_cast<double>(common) / cluster.size();
      counts.recall_den += 1;
    }
  }
  return counts;
}

ClusterCounts CeafECounts(const Clustering& pred, const Clustering& gold) {
  ClusterCounts counts;
  counts.precision_den = static_cast<double>(pred.size());
  counts.recall_den = static_cast<double>(gold.size());
  if (pred.size() == 0 || gold.size() == 0) return counts;
  const ClusterIndex pred_index = IndexClusters(pred);
  std::vector<std::vector<double>> similarity(
      gold.size(), std::vector<double>(pred.size(), 0.0));
  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t p = 0; p < pred.size(); ++p) {
      similarity[g][p] = Phi4(gold.clusters()[g], pred.clusters()[p],
                              pred_index, static_cast<int>(p));
    }
  }
  const AssignmentResult best = MaxWeightAssignment(similarity);
  counts.precision_num = best.total;
  counts.recall_num = best.total;
  return counts;
}

PRF Muc(const Clustering& pred, const Clustering& gold) {
  return MucCounts(pred, gold).Score();
}

PRF BCubed(const Clustering& pred, const Clustering& gold) {
  return BCubedCounts(pred, gold).Score();
}

PRF CeafE(const Clustering& pred, const Clustering& gold) {
  return CeafECounts(pred, gold).Score();
}

double ConllAverage(double muc_f1, double b_cubed_f1, double ceaf_e_f1) {
  return 100.0 * (muc_f1 + b_cubed_f1 + ceaf_e_f1) / 3.0;
}

absl::StatusOr<CorefEvalReport> EvaluateCoref(
    const std::vector<CorefDocumentPrediction>& predictions,
    const std::vector<CorefGold>& gold) {
  std::map<std::string, const CorefGold*> gold_by_id;
  for (const CorefGold& g : gold) gold_by_id[g.document_id] = &g;

  CorefEvalReport report;
  report.has_clusters = !predictions.empty();
  PairCounts pairs;
  ClusterCounts muc, b3, ceaf;
  std::vector<std::string> misaligned;
  for (const CorefDocumentPrediction& p : predictions) {
    auto it = gold_by_id.find(p.document_id);
    if (it == gold_by_id.end()) {
      misaligned.push_back(p.document_id);
      continue;
    }
    const Clustering& g = it->second->clusters;
    std::set<std::string> predicted_ids;
    for (const Mention& m : p.mentions) predicted_ids.insert(m.id);
    std::set<std::string> gold_ids;
    for (const auto& cluster : g.clusters()) {
      gold_ids.insert(cluster.begin(), cluster.end());
    }
    if (predicted_ids != gold_ids) {
      misaligned.push_back(p.document_id);
      continue;
    }
    ++report.documents;
    report.decided_pairs += static_cast<int64_t>(p.decisions.size());
    const PairCounts c = CountPairs(p.mentions, p.decisions, g);
    pairs.true_positive += c.true_positive;
    pairs.predicted_positive += c.predicted_positive;
    pairs.gold_positive += c.gold_positive;

    const CorefRho rho =
        RhoCoref(p.decisions, static_cast<int>(p.mentions.size()));
    report.rho.antecedents += rho.antecedents;
    report.rho.violations += rho.violations;

    if (p.clustering) {
      muc += MucCounts(*p.clustering, g);
      b3 += BCubedCounts(*p.clustering, g);
      ceaf += CeafECounts(*p.clustering, g);
    } else {
      report.has_clusters = false;
    }
  }
  if (!misaligned.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("predictions not aligned with gold for documents: ",
                     absl::StrJoin(misaligned, ", ")));
  }
  report.pairwise =
      PrfFromCounts(pairs.true_positive, pairs.predicted_positive,
                    pairs.true_positive, pairs.gold_positive);
  report.rho.degenerate = report.rho.antecedents == 0;
  report.rho.percent = Percent(report.rho.violations, report.rho.antecedents);
  if (report.has_clusters) {
    report.muc = muc.Score();
    report.b_cubed = b3.Score();
    report.ceaf_e = ceaf.Score();
    report.conll =
        ConllAverage(report.muc.f1, report.b_cubed.f1, report.ceaf_e.f1);
  }
  return report;
}

}  // namespace structinfer
