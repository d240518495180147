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

#include "structinfer/span_graph.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"

namespace structinfer {
namespace {

bool TokenEqualsIgnoreCase(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<TokenSpan> FindAll(const std::vector<std::string>& haystack,
                               const std::vector<std::string>& needle,
                               bool ignore_case) {
  std::vector<TokenSpan> found;
  if (needle.empty() || needle.size() > haystack.size()) return found;
  for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (size_t j = 0; j < needle.size() && match; ++j) {
      match = ignore_case ? TokenEqualsIgnoreCase(haystack[i + j], needle[j])
                          : haystack[i + j] == needle[j];
    }
    if (match) {
      found.push_back({static_cast<int>(i),
                       static_cast<int>(i + needle.size())});
    }
  }
  return found;
}

}  // namespace

bool SpanLabelLess(const SpanLabel& a, const SpanLabel& b) {
  return std::tie(a.role_id, a.rank, a.span.start) <
         std::tie(b.role_id, b.rank, b.span.start);
}

void SpanGraph::Finalize() {
  out_edges.assign(vertex_count, {});
  for (size_t e = 0; e < edges.size(); ++e) {
    out_edges[edges[e].from].push_back(static_cast<int>(e));
  }
  for (auto& list : out_edges) {
    std::sort(list.begin(), list.end(), [this](int a, int b) {
      const Edge& ea = edges[a];
      const Edge& eb = edges[b];
      if (ea.is_null() != eb.is_null()) return eb.is_null();
      if (ea.is_null()) return a < b;
      return SpanLabelLess(*ea.label, *eb.label);
    });
  }
}

std::vector<TokenSpan> LocateSpanOccurrences(
    const std::vector<std::string>& sentence_tokens,
    const std::string& span_text, bool case_insensitive) {
  const std::vector<std::string> needle = SplitTokens(span_text);
  std::vector<TokenSpan> found = FindAll(sentence_tokens, needle, false);
  if (found.empty() && case_insensitive) {
    found = FindAll(sentence_tokens, needle, true);
  }
  return found;
}

absl::StatusOr<SpanGraphBuild> BuildSpanGraph(const SrlInstance& instance,
                                              const SpanGraphOptions& options) {
  if (absl::Status s = ValidateSrlInstance(instance); !s.ok()) return s;

  SpanGraphBuild build;
  SpanGraph& graph = build.graph;
  const int n = static_cast<int>(instance.tokens.size());
  graph.vertex_count = n + 1;
  for (int v = 0; v < n; ++v) {
    graph.edges.push_back({v, v + 1, 0.0, std::nullopt});
  }

  for (const RoleQuestion& role : instance.roles) {
    struct Located {
      const ScoredCandidate* candidate;
      std::vector<TokenSpan> spans;
    };
    std::vector<Located> located;
    for (const ScoredCandidate& c : role.candidates) {
      if (c.rank > options.top_n) break;
      std::vector<TokenSpan> spans = LocateSpanOccurrences(
          instance.tokens, c.text, options.case_insensitive_fallback);
      if (spans.empty()) {
        ++build.diagnostics.dropped_candidates;
        continue;
      }
      located.push_back({&c, std::move(spans)});
    }
    if (located.empty()) {
      if (options.strict) {
        return absl::InvalidArgumentError(
            absl::StrCat("instance '", instance.id, "': role '", role.role_id,
                         "' has no candidate that occurs in the sentence"));
      }
      build.diagnostics.unassignable_roles.push_back(role.role_id);
      continue;
    }
    // Candidates arrive rank-ordered, so the first located one is the best
    // valid span for the role and gets weight zero.
    const double best = located.front().candidate->score;
    // A span proposed twice for the same role keeps its best rank only.
    std::map<TokenSpan, bool> used;
    for (const Located& l : located) {
      for (const TokenSpan& span : l.spans) {
        if (!used.emplace(span, true).second) continue;
        graph.edges.push_back(
            {span.start, span.end, best - l.candidate->score,
             SpanLabel{role.role_id, l.candidate->rank, l.candidate->text,
                       span}});
      }
    }
  }
  graph.Finalize();
  return build;
}

}  // namespace structinfer
