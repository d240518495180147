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

// Prompt templates and the inputs they are rendered from.

#ifndef STRUCTINFER_PROMPTS_H_
#define STRUCTINFER_PROMPTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "structinfer/types.h"

namespace structinfer {

enum class TemplateFamily {
  kT5Qa,
  kFlanQa,
  kMacawMc,
  kFlanIterative,
  kCorefMacaw,
  kCorefFlan,
};

std::string_view FamilyName(TemplateFamily family);
absl::StatusOr<TemplateFamily> ParseTemplateFamily(std::string_view name);
bool IsCorefFamily(TemplateFamily family);

// Template strings. Slots are {question}, {context}, {m1}, {m2}, {priors}.
namespace templates {
inline constexpr std::string_view kT5Qa = "question: {question} context: {context}";
inline constexpr std::string_view kFlanQa =
    "{context} \n In the above sentence, {question}";
inline constexpr std::string_view kMacawMc =
    "$answer$ ; $question$ = {question} ; $context$ = {context}";
inline constexpr std::string_view kFlanIterative =
    "{context} \n {priors}Answer the question such that the answer does not "
    "overlap with any of the answers above. \n In the above sentence, "
    "{question}";
inline constexpr std::string_view kIterativePrior = "Q: {question} A: {answer} \n ";
inline constexpr std::string_view kCorefMacaw =
    "$answer$ ; $mcoptions$=(A) Yes (B) No  ; {context} Does {m1} refer to {m2}?";
inline constexpr std::string_view kCorefFlan =
    "{context} \n In the above passage, does {m1} refer to {m2}? Yes or No?";
}  // namespace templates

struct PriorAnswer {
  int question_index = 0;  // position in the dataset's question order
  std::string question;
  std::string answer;
};

struct PromptRequest {
  TemplateFamily family = TemplateFamily::kT5Qa;
  std::string question;
  std::string context;
  std::string mention1;
  std::string mention2;
  // Iterative family only.
  int question_index = 0;
  std::vector<PriorAnswer> priors;
};

// Fails with InvalidArgument when a slot used by the family is empty, or
// when iterative priors are not strictly increasing and before the current
// question.
absl::StatusOr<std::string> RenderPrompt(const PromptRequest& request);

// The two constrained continuations whose scores form a link score; the
// "yes" choice comes first.
std::pair<std::string, std::string> YesNoChoices(TemplateFamily family);

// Unordered pairs (i < j) of mention indices whose sentence distance is
// below `window_sentences`; every pair when the window is absent.
std::vector<std::pair<int, int>> GenerateMentionPairs(
    const std::vector<Mention>& mentions,
    std::optional<int> window_sentences = std::nullopt);

enum class ContextStyle {
  kRelevant,  // the sentence(s) holding the two mentions
  kFull,      // the whole document
};

struct CorefContextOptions {
  ContextStyle style = ContextStyle::kRelevant;
  // Wrap the two mentions in asterisks.
  bool highlight = false;
};

// Prompt context for the mention pair (i, j).
std::string CorefContext(const CorefInstance& instance, int i, int j,
                         const CorefContextOptions& options = {});

}  // namespace structinfer

#endif  // STRUCTINFER_PROMPTS_H_
