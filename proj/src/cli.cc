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

#include "structinfer/cli.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "structinfer/coref_inference.h"
#include "structinfer/jsonl.h"
#include "structinfer/metrics.h"
#include "structinfer/parallel.h"
#include "structinfer/prompts.h"
#include "structinfer/scorer.h"
#include "structinfer/srl_inference.h"
#include "structinfer/types.h"

namespace structinfer {
namespace {

absl::Status Annotate(const absl::Status& status, const std::string& prefix) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      absl::StrCat(prefix, ": ", status.message()));
}

template <typename T>
absl::StatusOr<std::vector<T>> LoadOrReport(
    absl::StatusOr<LoadResult<T>> loaded, std::ostream& err,
    const std::string& path) {
  if (!loaded.ok()) return loaded.status();
  for (const LineDiagnostic& d : loaded->diagnostics) {
    err << "warning: " << path << " line " << d.line << " skipped: "
        << d.message << "\n";
  }
  return std::move(loaded->values);
}

// Output writing is serialized in input order; the first failing record (in
// input order) decides the error.
template <typename Fn>
absl::StatusOr<std::vector<Json>> MapRecords(size_t n, int jobs, Fn fn) {
  std::vector<absl::StatusOr<Json>> results =
      ParallelMap<absl::StatusOr<Json>>(n, jobs, fn);
  std::vector<Json> records;
  records.reserve(n);
  for (absl::StatusOr<Json>& r : results) {
    if (!r.ok()) return r.status();
    records.push_back(*std::move(r));
  }
  return records;
}

absl::Status WriteManifest(const RunConfig& config, Json stats) {
  Json manifest = {{"schema_version", kSchemaVersion},
                   {"kind", "manifest"},
                   {"command", config.command},
                   {"config", config.ToJson()},
                   {"output", config.output}};
  for (auto& [key, value] : stats.items()) manifest[key] = value;
  return WriteTextFile(config.output + ".manifest.json",
                       manifest.dump(2) + "\n");
}

absl::StatusOr<TemplateFamily> FamilyOf(const RunConfig& config) {
  return ParseTemplateFamily(config.EffectiveTemplate());
}

CorefContextOptions ContextOptionsOf(const RunConfig& config) {
  CorefContextOptions options;
  options.style = config.context_style == "full" ? ContextStyle::kFull
                                                 : ContextStyle::kRelevant;
  options.highlight = config.highlight;
  return options;
}

std::optional<int> WindowOf(const RunConfig& config) {
  if (config.window <= 0) return std::nullopt;
  return config.window;
}

std::string RolePromptId(const SrlInstance& instance, const RoleQuestion& q) {
  return absl::StrCat(instance.id, "/", q.role_id);
}

std::string PairPromptId(const CorefInstance& instance, int i, int j) {
  return absl::StrCat(instance.document_id, "/", instance.mentions[i].id, "/",
                      instance.mentions[j].id);
}

absl::StatusOr<std::string> RenderPairPrompt(const CorefInstance& instance,
                                             int i, int j,
                                             TemplateFamily family,
                                             const RunConfig& config) {
  PromptRequest request;
  request.family = family;
  request.context = CorefContext(instance, i, j, ContextOptionsOf(config));
  request.mention1 = instance.mentions[i].text;
  request.mention2 = instance.mentions[j].text;
  return RenderPrompt(request);
}

// Prompt for role `r` given the answers already chosen for earlier roles.
absl::StatusOr<std::string> RenderRolePrompt(
    const SrlInstance& instance, size_t r, TemplateFamily family,
    const std::vector<std::string>& prior_answers) {
  PromptRequest request;
  request.family = family;
  request.question = instance.roles[r].question;
  request.context = instance.ContextText();
  request.question_index = static_cast<int>(r);
  if (family == TemplateFamily::kFlanIterative) {
    for (size_t p = 0; p < r; ++p) {
      request.priors.push_back({static_cast<int>(p), instance.roles[p].question,
                                prior_answers[p]});
    }
  }
  return RenderPrompt(request);
}

// ---------------------------------------------------------------- prompts

absl::Status RunPrompts(const RunConfig& config, std::ostream& err) {
  absl::StatusOr<TemplateFamily> family = FamilyOf(config);
  if (!family.ok()) return family.status();
  const LoadOptions load{config.partial};
  std::vector<Json> records;

  if (config.task == "srl") {
    absl::StatusOr<std::vector<SrlInstance>> instances =
        LoadOrReport(LoadSrlInstances(config.input, load), err, config.input);
    if (!instances.ok()) return instances.status();
    for (const SrlInstance& instance : *instances) {
      // Iterative prompts carry placeholders for answers that only exist
      // after the earlier questions are scored; `score` fills them in.
      std::vector<std::string> placeholders;
      for (const RoleQuestion& q : instance.roles) {
        placeholders.push_back(absl::StrCat("{answer:", q.role_id, "}"));
      }
      for (size_t r = 0; r < instance.roles.size(); ++r) {
        absl::StatusOr<std::string> prompt =
            RenderRolePrompt(instance, r, *family, placeholders);
        if (!prompt.ok()) {
          return Annotate(prompt.status(),
                          RolePromptId(instance, instance.roles[r]));
        }
        Json record = {{"schema_version", kSchemaVersion},
                       {"kind", "prompt"},
                       {"task", "srl"},
                       {"prompt_id", RolePromptId(instance, instance.roles[r])},
                       {"instance_id", instance.id},
                       {"role_id", instance.roles[r].role_id},
                       {"family", FamilyName(*family)},
                       {"mode", "generate"},
                       {"n", config.top_n},
                       {"prompt", *prompt}};
        if (*family == TemplateFamily::kFlanIterative) {
          Json requires_answers = Json::array();
          for (size_t p = 0; p < r; ++p) {
            requires_answers.push_back(instance.roles[p].role_id);
          }
          record["requires_answers"] = std::move(requires_answers);
        }
        records.push_back(std::move(record));
      }
    }
  } else {
    absl::StatusOr<std::vector<CorefInstance>> instances = LoadOrReport(
        LoadCorefInstances(config.input, load), err, config.input);
    if (!instances.ok()) return instances.status();
    const auto [yes, no] = YesNoChoices(*family);
    for (const CorefInstance& instance : *instances) {
      for (const auto& [i, j] :
           GenerateMentionPairs(instance.mentions, WindowOf(config))) {
        absl::StatusOr<std::string> prompt =
            RenderPairPrompt(instance, i, j, *family, config);
        if (!prompt.ok()) {
          return Annotate(prompt.status(), PairPromptId(instance, i, j));
        }
        records.push_back({{"schema_version", kSchemaVersion},
                           {"kind", "prompt"},
                           {"task", "coref"},
                           {"prompt_id", PairPromptId(instance, i, j)},
                           {"document_id", instance.document_id},
                           {"m1", instance.mentions[i].id},
                           {"m2", instance.mentions[j].id},
                           {"family", FamilyName(*family)},
                           {"mode", "choices"},
                           {"choices", {yes, no}},
                           {"prompt", *prompt}});
      }
    }
  }
  if (absl::Status s = WriteJsonlFile(config.output,
                                      MakeHeader(config.ToJson()), records);
      !s.ok()) {
    return s;
  }
  return WriteManifest(config, {{"records", records.size()}});
}

// ------------------------------------------------------------------ score

absl::StatusOr<std::unique_ptr<ScorerBackend>> BackendOf(
    const RunConfig& config) {
  RemoteOptions remote;
  remote.auth_env = config.auth_env;
  remote.timeout_ms = config.remote_timeout_ms;
  remote.max_retries = config.remote_retries;
  remote.max_in_flight = config.remote_max_in_flight;
  absl::StatusOr<std::unique_ptr<ScorerBackend>> backend =
      MakeBackend(config.backend, config.seed, remote);
  if (!backend.ok() || config.cache.empty()) return backend;
  absl::StatusOr<std::unique_ptr<CachingBackend>> cached =
      CachingBackend::Open(*std::move(backend), config.cache);
  if (!cached.ok()) return cached.status();
  return std::unique_ptr<ScorerBackend>(*std::move(cached));
}

absl::StatusOr<Json> ScoreSrlInstance(SrlInstance instance,
                                      TemplateFamily family,
                                      const RunConfig& config,
                                      ScorerBackend& backend) {
  std::vector<std::string> answers;
  for (size_t r = 0; r < instance.roles.size(); ++r) {
    RoleQuestion& q = instance.roles[r];
    absl::StatusOr<std::string> prompt =
        RenderRolePrompt(instance, r, family, answers);
    if (!prompt.ok()) {
      return Annotate(prompt.status(), RolePromptId(instance, q));
    }
    ScoreRequest request;
    request.prompt_id = RolePromptId(instance, q);
    request.family = std::string(FamilyName(family));
    request.prompt = *std::move(prompt);
    request.context = instance.ContextText();
    request.mode = ScoreMode::kGenerateTopN;
    request.n = config.top_n;
    absl::StatusOr<std::vector<ScoredCandidate>> scored =
        backend.Score(request);
    if (!scored.ok()) return scored.status();
    q.candidates = *std::move(scored);
    answers.push_back(q.candidates.empty() ? std::string()
                                           : q.candidates.front().text);
  }
  return SrlInstanceToJson(instance);
}

absl::StatusOr<Json> ScoreCorefInstance(CorefInstance instance,
                                        TemplateFamily family,
                                        const RunConfig& config,
                                        ScorerBackend& backend) {
  const auto [yes, no] = YesNoChoices(family);
  std::vector<PairScore> scores;
  for (const auto& [i, j] :
       GenerateMentionPairs(instance.mentions, WindowOf(config))) {
    absl::StatusOr<std::string> prompt =
        RenderPairPrompt(instance, i, j, family, config);
    if (!prompt.ok()) {
      return Annotate(prompt.status(), PairPromptId(instance, i, j));
    }
    ScoreRequest request;
    request.prompt_id = PairPromptId(instance, i, j);
    request.family = std::string(FamilyName(family));
    request.prompt = *std::move(prompt);
    absl::StatusOr<double> link = ScoreLink(backend, request, yes, no);
    if (!link.ok()) return link.status();
    scores.push_back({i, j, *link});
  }
  instance.pair_scores = std::move(scores);
  NormalizePairs(instance.pair_scores);
  return CorefInstanceToJson(instance);
}

absl::Status RunScore(const RunConfig& config, std::ostream& err) {
  absl::StatusOr<TemplateFamily> family = FamilyOf(config);
  if (!family.ok()) return family.status();
  absl::StatusOr<std::unique_ptr<ScorerBackend>> backend = BackendOf(config);
  if (!backend.ok()) return backend.status();
  const LoadOptions load{config.partial};

  absl::StatusOr<std::vector<Json>> records;
  if (config.task == "srl") {
    absl::StatusOr<std::vector<SrlInstance>> instances =
        LoadOrReport(LoadSrlInstances(config.input, load), err, config.input);
    if (!instances.ok()) return instances.status();
    records = MapRecords(instances->size(), config.jobs, [&](size_t i) {
      return ScoreSrlInstance((*instances)[i], *family, config, **backend);
    });
  } else {
    absl::StatusOr<std::vector<CorefInstance>> instances = LoadOrReport(
        LoadCorefInstances(config.input, load), err, config.input);
    if (!instances.ok()) return instances.status();
    records = MapRecords(instances->size(), config.jobs, [&](size_t i) {
      return ScoreCorefInstance((*instances)[i], *family, config, **backend);
    });
  }
  if (!records.ok()) return records.status();
  if (absl::Status s = WriteJsonlFile(config.output,
                                      MakeHeader(config.ToJson()), *records);
      !s.ok()) {
    return s;
  }
  return WriteManifest(config, {{"records", records->size()},
                                {"backend", (*backend)->id()}});
}

// ------------------------------------------------------------------ infer

absl::Status InferSrlFile(const RunConfig& config, std::ostream& err) {
  absl::StatusOr<std::vector<SrlInstance>> instances = LoadOrReport(
      LoadSrlInstances(config.input, LoadOptions{config.partial}), err,
      config.input);
  if (!instances.ok()) return instances.status();
  SrlInferenceOptions options;
  options.k = config.k;
  options.graph.top_n = config.top_n;
  options.graph.strict = config.strict;
  options.graph.case_insensitive_fallback = config.case_insensitive;

  std::vector<absl::StatusOr<SrlStructure>> results =
      ParallelMap<absl::StatusOr<SrlStructure>>(
          instances->size(), config.jobs, [&](size_t i) {
            const SrlInstance& instance = (*instances)[i];
            absl::StatusOr<SrlStructure> s =
                config.solver == "constrained"
                    ? InferSrl(instance, options)
                    : InferSrlUnconstrained(instance, options.graph);
            if (!s.ok()) {
              return absl::StatusOr<SrlStructure>(Annotate(
                  s.status(), absl::StrCat("instance ", instance.id)));
            }
            return s;
          });
  std::vector<SrlStructure> structures;
  std::vector<Json> records;
  int64_t complete = 0;
  for (absl::StatusOr<SrlStructure>& r : results) {
    if (!r.ok()) return r.status();
    if (r->complete()) ++complete;
    records.push_back(SrlStructureToJson(*r));
    structures.push_back(*std::move(r));
  }
  if (absl::Status s = WriteJsonlFile(config.output,
                                      MakeHeader(config.ToJson()), records);
      !s.ok()) {
    return s;
  }
  const SrlRho rho = RhoSrl(structures);
  return WriteManifest(
      config, {{"records", records.size()},
               {"complete_structures", complete},
               {"rho_pair", rho.rho_pair},
               {"rho_structure", rho.rho_structure},
               {"violating_pairs", rho.violating_pairs},
               {"violating_structures", rho.violating_structures}});
}

absl::Status InferCorefFile(const RunConfig& config, std::ostream& err) {
  absl::StatusOr<std::vector<CorefInstance>> instances = LoadOrReport(
      LoadCorefInstances(config.input, LoadOptions{config.partial}), err,
      config.input);
  if (!instances.ok()) return instances.status();
  AllLinkOptions options;
  options.node_limit = config.node_limit;

  std::vector<CorefPredictionRecord> predictions =
      ParallelMap<CorefPredictionRecord>(
          instances->size(), config.jobs, [&](size_t i) {
            const CorefInstance& instance = (*instances)[i];
            CorefPredictionRecord record;
            record.document_id = instance.document_id;
            record.mentions = instance.mentions;
            if (config.solver == "unconstrained") {
              record.decisions = UnconstrainedDecisions(instance);
              return record;
            }
            Clustering clustering;
            if (config.solver == "constrained") {
              AllLinkResult result = AllLinkSolve(instance, options);
              clustering = std::move(result.clustering);
              record.report = result.report;
            } else if (config.solver == "r2l") {
              clustering = RightToLeftAssign(
                  instance, UnconstrainedDecisions(instance));
            } else if (config.solver == "all-yes") {
              clustering = BaselineAllYes(instance);
            } else {
              clustering = BaselineAllNo(instance);
            }
            record.decisions = DecisionsFromClustering(instance, clustering);
            record.clustering = std::move(clustering);
            return record;
          });

  std::vector<Json> records;
  std::vector<std::string> budget_hit;
  CorefRho total;
  double objective = 0.0;
  for (const CorefPredictionRecord& p : predictions) {
    records.push_back(CorefPredictionToJson(p));
    const CorefRho rho =
        RhoCoref(p.decisions, static_cast<int>(p.mentions.size()));
    total.antecedents += rho.antecedents;
    total.violations += rho.violations;
    if (p.report) {
      objective += p.report->objective;
      if (!p.report->optimal) budget_hit.push_back(p.document_id);
    }
  }
  if (absl::Status s = WriteJsonlFile(config.output,
                                      MakeHeader(config.ToJson()), records);
      !s.ok()) {
    return s;
  }
  const double rho_percent =
      total.antecedents == 0
          ? 0.0
          : 100.0 * static_cast<double>(total.violations) /
                static_cast<double>(total.antecedents);
  Json stats = {{"records", records.size()},
                {"rho_coref", rho_percent},
                {"rho_antecedents", total.antecedents},
                {"rho_violations", total.violations}};
  if (config.solver == "constrained") {
    stats["objective"] = objective;
    stats["non_optimal_documents"] = budget_hit;
  }
  if (absl::Status s = WriteManifest(config, stats); !s.ok()) return s;
  if (!budget_hit.empty()) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "node limit ", config.node_limit, " reached before proving optimality"
        " for ", budget_hit.size(), " document(s): ",
        absl::StrJoin(budget_hit, ", "), " (best clusterings found were kept)"));
  }
  return absl::OkStatus();
}

// ------------------------------------------------------------------- eval

std::string Pct(double v) { return absl::StrFormat("%6.2f", v); }

std::string PrfRow(const std::string& name, const PRF& prf) {
  return absl::StrFormat("%-10s %6.2f %6.2f %6.2f%s\n", name,
                         100.0 * prf.precision, 100.0 * prf.recall,
                         100.0 * prf.f1, prf.degenerate ? "  (degenerate)" : "");
}

void AddPrf(std::vector<std::pair<std::string, std::string>>& kv,
            const std::string& prefix, const PRF& prf) {
  kv.emplace_back(prefix + "_p", absl::StrFormat("%.10g", prf.precision));
  kv.emplace_back(prefix + "_r", absl::StrFormat("%.10g", prf.recall));
  kv.emplace_back(prefix + "_f1", absl::StrFormat("%.10g", prf.f1));
  kv.emplace_back(prefix + "_degenerate", prf.degenerate ? "1" : "0");
}

absl::Status EmitReport(
    const RunConfig& config, const std::string& table,
    const std::vector<std::pair<std::string, std::string>>& kv,
    std::ostream& out) {
  const std::string header =
      absl::StrCat("# config: ", config.ToJson().dump(), "\n");
  out << table;
  if (!config.report.empty()) {
    if (absl::Status s = WriteTextFile(config.report, header + table);
        !s.ok()) {
      return s;
    }
  }
  if (!config.metrics.empty()) {
    std::string text = header;
    for (const auto& [key, value] : kv) absl::StrAppend(&text, key, "=", value, "\n");
    if (absl::Status s = WriteTextFile(config.metrics, text); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status EvalSrl(const RunConfig& config, std::ostream& out,
                     std::ostream& err) {
  const LoadOptions load{config.partial};
  absl::StatusOr<std::vector<SrlStructure>> pred =
      LoadOrReport(LoadSrlStructures(config.pred, load), err, config.pred);
  if (!pred.ok()) return pred.status();
  absl::StatusOr<std::vector<SrlGold>> gold =
      LoadOrReport(LoadSrlGold(config.gold, load), err, config.gold);
  if (!gold.ok()) return gold.status();
  absl::StatusOr<SrlEvalReport> r = EvaluateSrl(*pred, *gold);
  if (!r.ok()) return r.status();

  std::string table = absl::StrFormat(
      "SRL evaluation: %d structures, %d questions\n", r->structures,
      r->questions);
  absl::StrAppend(&table, "metric               value\n");
  absl::StrAppend(&table, "Exact (question)    ", Pct(r->exact_q), "\n");
  absl::StrAppend(&table, "Exact (structure)   ", Pct(r->exact_s), "\n");
  absl::StrAppend(&table, "Head (question)     ", Pct(r->head_q), "\n");
  absl::StrAppend(&table, "Head (structure)    ", Pct(r->head_s), "\n");
  absl::StrAppend(&table, "rho (span pairs)    ", Pct(r->rho.rho_pair), "\n");
  absl::StrAppend(&table, "rho (structures)    ", Pct(r->rho.rho_structure),
                  "\n");

  std::vector<std::pair<std::string, std::string>> kv = {
      {"task", "srl"},
      {"structures", absl::StrCat(r->structures)},
      {"questions", absl::StrCat(r->questions)},
      {"unassigned_questions", absl::StrCat(r->unassigned_questions)},
      {"exact_q", absl::StrFormat("%.10g", r->exact_q)},
      {"exact_s", absl::StrFormat("%.10g", r->exact_s)},
      {"head_q", absl::StrFormat("%.10g", r->head_q)},
      {"head_s", absl::StrFormat("%.10g", r->head_s)},
      {"rho", absl::StrFormat("%.10g", r->rho.rho_pair)},
      {"rho_pair", absl::StrFormat("%.10g", r->rho.rho_pair)},
      {"rho_structure", absl::StrFormat("%.10g", r->rho.rho_structure)},
      {"violating_pairs", absl::StrCat(r->rho.violating_pairs)},
      {"comparable_pairs", absl::StrCat(r->rho.comparable_pairs)},
      {"violating_structures", absl::StrCat(r->rho.violating_structures)},
  };
  return EmitReport(config, table, kv, out);
}

absl::Status EvalCoref(const RunConfig& config, std::ostream& out,
                       std::ostream& err) {
  const LoadOptions load{config.partial};
  absl::StatusOr<std::vector<CorefPredictionRecord>> pred =
      LoadOrReport(LoadCorefPredictions(config.pred, load), err, config.pred);
  if (!pred.ok()) return pred.status();
  absl::StatusOr<std::vector<CorefGold>> gold =
      LoadOrReport(LoadCorefGold(config.gold, load), err, config.gold);
  if (!gold.ok()) return gold.status();
  std::vector<CorefDocumentPrediction> inputs;
  for (const CorefPredictionRecord& p : *pred) inputs.push_back(p.ToEvalInput());
  absl::StatusOr<CorefEvalReport> r = EvaluateCoref(inputs, *gold);
  if (!r.ok()) return r.status();

  std::string table = absl::StrFormat(
      "Coreference evaluation: %d documents, %d decided pairs\n", r->documents,
      r->decided_pairs);
  absl::StrAppend(&table, "metric          P      R     F1\n");
  absl::StrAppend(&table, PrfRow("pairwise", r->pairwise));
  if (r->has_clusters) {
    absl::StrAppend(&table, PrfRow("MUC", r->muc));
    absl::StrAppend(&table, PrfRow("B3", r->b_cubed));
    absl::StrAppend(&table, PrfRow("CEAF_e", r->ceaf_e));
    absl::StrAppend(&table, "CoNLL                    ", Pct(r->conll), "\n");
  } else {
    absl::StrAppend(&table, "(cluster metrics need clusterings)\n");
  }
  absl::StrAppend(&table, "rho                      ", Pct(r->rho.percent),
                  r->rho.degenerate ? "  (degenerate)\n" : "\n");

  std::vector<std::pair<std::string, std::string>> kv = {
      {"task", "coref"},
      {"documents", absl::StrCat(r->documents)},
      {"decided_pairs", absl::StrCat(r->decided_pairs)},
  };
  AddPrf(kv, "pairwise", r->pairwise);
  kv.emplace_back("has_clusters", r->has_clusters ? "1" : "0");
  if (r->has_clusters) {
    AddPrf(kv, "muc", r->muc);
    AddPrf(kv, "bcubed", r->b_cubed);
    AddPrf(kv, "ceafe", r->ceaf_e);
    kv.emplace_back("conll", absl::StrFormat("%.10g", r->conll));
  }
  kv.emplace_back("rho", absl::StrFormat("%.10g", r->rho.percent));
  kv.emplace_back("rho_antecedents", absl::StrCat(r->rho.antecedents));
  kv.emplace_back("rho_violations", absl::StrCat(r->rho.violations));
  kv.emplace_back("rho_degenerate", r->rho.degenerate ? "1" : "0");
  return EmitReport(config, table, kv, out);
}

// ------------------------------------------------------------ arguments

void AddOptions(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--config", "JSON file whose keys mirror the long flags");
  cmd.add_option("--task", c.task, "srl or coref")
      ->check(CLI::IsMember({"srl", "coref"}));
  cmd.add_option("--solver", c.solver,
                 "constrained, unconstrained, r2l, all-yes or all-no")
      ->check(CLI::IsMember(
          {"constrained", "unconstrained", "r2l", "all-yes", "all-no"}));
  cmd.add_option("--k", c.k, "paths enumerated per SRL instance")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--top-n", c.top_n, "candidates kept per question")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--window", c.window,
                 "sentence window for mention pairs (0 = all pairs)")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--template", c.template_family,
                 "t5-qa, flan-qa, macaw-mc, flan-iterative, coref-macaw or "
                 "coref-flan");
  cmd.add_option("--backend", c.backend, "mock, mock:SEED, file:PATH or "
                                         "remote:URL");
  cmd.add_option("--seed", c.seed, "mock backend seed");
  cmd.add_option("--input", c.input, "instances JSONL");
  cmd.add_option("--output", c.output, "output JSONL");
  cmd.add_option("--gold", c.gold, "gold JSONL");
  cmd.add_option("--pred", c.pred, "predictions JSONL");
  cmd.add_option("--jobs", c.jobs, "parallel instances")
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--strict", c.strict,
               "fail when a role has no locatable candidate");
  cmd.add_flag("--case-insensitive", c.case_insensitive,
               "retry span location ignoring case");
  cmd.add_flag("--partial", c.partial,
               "skip malformed input lines with a warning");
  cmd.add_option("--node-limit", c.node_limit,
                 "branch-and-bound node budget per document")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--cache", c.cache, "score cache JSONL");
  cmd.add_option("--context-style", c.context_style, "relevant or full")
      ->check(CLI::IsMember({"relevant", "full"}));
  cmd.add_flag("--highlight", c.highlight, "wrap mentions in asterisks");
  cmd.add_option("--report", c.report, "human-readable report file");
  cmd.add_option("--metrics", c.metrics, "key=value metrics file");
  cmd.add_option("--remote-timeout-ms", c.remote_timeout_ms)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--remote-retries", c.remote_retries)
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--remote-max-in-flight", c.remote_max_in_flight)
      ->check(CLI::PositiveNumber);
  cmd.add_option("--auth-env", c.auth_env,
                 "environment variable holding the bearer token");
}

// Expands --config FILE into flag tokens placed before the remaining
// arguments, so explicit flags (parsed later) take precedence.
absl::StatusOr<std::vector<std::string>> ExpandConfig(
    std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config ", path, " is not a JSON object"));
  }
  std::vector<std::string> expanded;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      expanded.push_back(flag + (value.get<bool>() ? "=true" : "=false"));
    } else if (value.is_string()) {
      expanded.push_back(flag);
      expanded.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      expanded.push_back(flag);
      expanded.push_back(value.dump());
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "config key '", key, "' must be a string, number or boolean"));
    }
  }
  expanded.insert(expanded.end(), rest.begin(), rest.end());
  return expanded;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitValidation;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kAlreadyExists:
      return kExitIo;
    case absl::StatusCode::kResourceExhausted:
      return kExitSolverBudget;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
    case absl::StatusCode::kInternal:
      return kExitRemote;
    default:
      return 1;
  }
}

Json RunConfig::ToJson() const {
  return {{"command", command},
          {"task", task},
          {"solver", solver},
          {"k", k},
          {"top_n", top_n},
          {"window", window},
          {"template", EffectiveTemplate()},
          {"backend", backend},
          {"seed", seed},
          {"input", input},
          {"output", output},
          {"gold", gold},
          {"pred", pred},
          {"jobs", jobs},
          {"strict", strict},
          {"case_insensitive", case_insensitive},
          {"partial", partial},
          {"node_limit", node_limit},
          {"cache", cache},
          {"context_style", context_style},
          {"highlight", highlight},
          {"report", report},
          {"metrics", metrics},
          {"remote_timeout_ms", remote_timeout_ms},
          {"remote_retries", remote_retries},
          {"remote_max_in_flight", remote_max_in_flight},
          {"auth_env", auth_env}};
}

std::string RunConfig::EffectiveTemplate() const {
  if (!template_family.empty()) return template_family;
  return task == "coref" ? "coref-flan" : "t5-qa";
}

absl::Status ValidateRunConfig(const RunConfig& c) {
  if (c.task == "srl" && c.solver != "constrained" &&
      c.solver != "unconstrained") {
    return absl::InvalidArgumentError(absl::StrCat(
        "solver '", c.solver,
        "' applies to coref only; srl accepts constrained or unconstrained"));
  }
  if (c.command == "prompts" || c.command == "score") {
    absl::StatusOr<TemplateFamily> family = ParseTemplateFamily(
        c.EffectiveTemplate());
    if (!family.ok()) return family.status();
    if (IsCorefFamily(*family) != (c.task == "coref")) {
      return absl::InvalidArgumentError(absl::StrCat(
          "template '", c.EffectiveTemplate(), "' does not fit task '", c.task,
          "'"));
    }
  }
  auto need = [](const std::string& value, const char* flag) {
    return value.empty() ? absl::InvalidArgumentError(
                               absl::StrCat(flag, " is required"))
                         : absl::OkStatus();
  };
  if (c.command == "eval") {
    if (absl::Status s = need(c.pred, "--pred"); !s.ok()) return s;
    return need(c.gold, "--gold");
  }
  if (absl::Status s = need(c.input, "--input"); !s.ok()) return s;
  return need(c.output, "--output");
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  CLI::App app{"Constrained structured inference over scored candidates",
               "structinfer"};
  app.require_subcommand(1, 1);
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"prompts", "render one prompt per question or mention pair"},
      {"score", "score questions or mention pairs with a backend"},
      {"infer", "produce structures or clusterings from scored inputs"},
      {"eval", "score predictions against gold"},
  };
  for (const Command& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    sub->option_defaults()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);
    AddOptions(*sub, config);
    sub->callback([&config, name = command.name] { config.command = name; });
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> tokens;
  if (!args.empty()) {
    absl::StatusOr<std::vector<std::string>> expanded =
        ExpandConfig({args.begin() + 1, args.end()});
    if (!expanded.ok()) {
      err << "error: " << expanded.status().message() << "\n";
      return ExitCodeFor(expanded.status());
    }
    tokens.push_back(args.front());
    tokens.insert(tokens.end(), expanded->begin(), expanded->end());
  }
  std::reverse(tokens.begin(), tokens.end());
  try {
    app.parse(tokens);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  absl::Status status = ValidateRunConfig(config);
  if (status.ok()) {
    if (config.command == "prompts") {
      status = RunPrompts(config, err);
    } else if (config.command == "score") {
      status = RunScore(config, err);
    } else if (config.command == "infer") {
      status = config.task == "srl" ? InferSrlFile(config, err)
                                    : InferCorefFile(config, err);
    } else {
      status = config.task == "srl" ? EvalSrl(config, out, err)
                                    : EvalCoref(config, out, err);
    }
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace structinfer
