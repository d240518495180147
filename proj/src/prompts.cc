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

#include "structinfer/prompts.h"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "absl/strings/str_cat.h"

namespace structinfer {
namespace {

using SlotMap = std::map<std::string_view, std::string_view>;

// Single pass over the template so slot values are never re-expanded.
std::string Fill(std::string_view tmpl, const SlotMap& slots) {
  std::string out;
  out.reserve(tmpl.size() + 64);
  size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const size_t close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto it = slots.find(tmpl.substr(i + 1, close - i - 1));
        if (it != slots.end()) {
          out.append(it->second);
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

absl::Status Require(const std::string& value, std::string_view slot,
                     TemplateFamily family) {
  if (SplitTokens(value).empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "template '", std::string(FamilyName(family)),
        "' requires a non-empty ", std::string(slot)));
  }
  return absl::OkStatus();
}

std::string Highlight(const std::string& sentence,
                      const std::vector<const Mention*>& mentions) {
  std::vector<std::string> tokens = SplitTokens(sentence);
  bool changed = false;
  for (const Mention* m : mentions) {
    if (m->tokens.start < 0 ||
        m->tokens.end > static_cast<int>(tokens.size())) {
      continue;
    }
    tokens[m->tokens.start] = "*" + tokens[m->tokens.start];
    tokens[m->tokens.end - 1] += "*";
    changed = true;
  }
  return changed ? JoinTokens(tokens, 0, tokens.size()) : sentence;
}

}  // namespace

std::string_view FamilyName(TemplateFamily family) {
  switch (family) {
    case TemplateFamily::kT5Qa:
      return "t5-qa";
    case TemplateFamily::kFlanQa:
      return "flan-qa";
    case TemplateFamily::kMacawMc:
      return "macaw-mc";
    case TemplateFamily::kFlanIterative:
      return "flan-iterative";
    case TemplateFamily::kCorefMacaw:
      return "coref-macaw";
    case TemplateFamily::kCorefFlan:
      return "coref-flan";
  }
  return "unknown";
}

absl::StatusOr<TemplateFamily> ParseTemplateFamily(std::string_view name) {
  for (TemplateFamily f :
       {TemplateFamily::kT5Qa, TemplateFamily::kFlanQa, TemplateFamily::kMacawMc,
        TemplateFamily::kFlanIterative, TemplateFamily::kCorefMacaw,
        TemplateFamily::kCorefFlan}) {
    if (FamilyName(f) == name) return f;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown template family '", std::string(name), "'"));
}

bool IsCorefFamily(TemplateFamily family) {
  return family == TemplateFamily::kCorefMacaw ||
         family == TemplateFamily::kCorefFlan;
}

absl::StatusOr<std::string> RenderPrompt(const PromptRequest& r) {
  const TemplateFamily f = r.family;
  if (absl::Status s = Require(r.context, "context", f); !s.ok()) return s;
  if (IsCorefFamily(f)) {
    if (absl::Status s = Require(r.mention1, "first mention", f); !s.ok()) return s;
    if (absl::Status s = Require(r.mention2, "second mention", f); !s.ok()) return s;
    const SlotMap slots = {
        {"context", r.context}, {"m1", r.mention1}, {"m2", r.mention2}};
    return Fill(f == TemplateFamily::kCorefMacaw ? templates::kCorefMacaw
                                                 : templates::kCorefFlan,
                slots);
  }
  if (absl::Status s = Require(r.question, "question", f); !s.ok()) return s;
  const SlotMap slots = {{"context", r.context}, {"question", r.question}};
  switch (f) {
    case TemplateFamily::kT5Qa:
      return Fill(templates::kT5Qa, slots);
    case TemplateFamily::kFlanQa:
      return Fill(templates::kFlanQa, slots);
    case TemplateFamily::kMacawMc:
      return Fill(templates::kMacawMc, slots);
    case TemplateFamily::kFlanIterative:
      break;
    default:
      return absl::InternalError("unhandled template family");
  }

  int last = -1;
  std::string priors;
  for (const PriorAnswer& p : r.priors) {
    if (p.question_index <= last || p.question_index >= r.question_index) {
      return absl::InvalidArgumentError(absl::StrCat(
          "iterative prior for question ", p.question_index,
          " is out of order before question ", r.question_index));
    }
    last = p.question_index;
    priors += Fill(templates::kIterativePrior,
                   {{"question", p.question}, {"answer", p.answer}});
  }
  if (r.priors.empty()) return Fill(templates::kFlanQa, slots);
  return Fill(templates::kFlanIterative,
              {{"context", r.context}, {"question", r.question}, {"priors", priors}});
}

std::pair<std::string, std::string> YesNoChoices(TemplateFamily family) {
  if (family == TemplateFamily::kCorefMacaw ||
      family == TemplateFamily::kMacawMc) {
    return {"$answer$ = Yes", "$answer$ = No"};
  }
  return {"Yes", "No"};
}

std::vector<std::pair<int, int>> GenerateMentionPairs(
    const std::vector<Mention>& mentions, std::optional<int> window_sentences) {
  std::vector<std::pair<int, int>> pairs;
  const int n = static_cast<int>(mentions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (window_sentences &&
          std::abs(mentions[i].sentence_index - mentions[j].sentence_index) >=
              *window_sentences) {
        continue;
      }
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::string CorefContext(const CorefInstance& instance, int i, int j,
                         const CorefContextOptions& options) {
  const Mention& a = instance.mentions[i];
  const Mention& b = instance.mentions[j];
  const int sentences = static_cast<int>(instance.sentences.size());
  std::vector<int> chosen;
  if (options.style == ContextStyle::kFull) {
    for (int s = 0; s < sentences; ++s) chosen.push_back(s);
  } else {
    const int first = std::min(a.sentence_index, b.sentence_index);
    const int second = std::max(a.sentence_index, b.sentence_index);
    if (first >= 0 && first < sentences) chosen.push_back(first);
    if (second != first && second >= 0 && second < sentences) {
      chosen.push_back(second);
    }
  }
  std::string context;
  for (int s : chosen) {
    std::string text = instance.sentences[s];
    if (options.highlight) {
      std::vector<const Mention*> here;
      if (a.sentence_index == s) here.push_back(&a);
      if (b.sentence_index == s) here.push_back(&b);
      text = Highlight(text, here);
    }
    if (!context.empty()) context.push_back(' ');
    context += text;
  }
  return context;
}

}  // namespace structinfer
