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

#include "structinfer/jsonl.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace structinfer {
namespace jsonl_internal {

absl::Status OpenForRead(const std::string& path, std::ifstream& in) {
  in.open(path);
  if (!in.is_open()) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  }
  return absl::OkStatus();
}

bool IsHeader(const Json& j) {
  return j.is_object() && j.contains("kind") && j["kind"] == "header";
}

}  // namespace jsonl_internal

namespace {

absl::Status CheckRecord(const Json& j, const char* task) {
  if (!j.is_object()) return absl::InvalidArgumentError("record is not an object");
  if (!j.contains("schema_version")) {
    return absl::InvalidArgumentError("missing schema_version");
  }
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unsupported schema_version ", j["schema_version"].dump(),
        " (expected ", kSchemaVersion, ")"));
  }
  if (j.contains("task") && j["task"] != task) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected task '", task, "', got ", j["task"].dump()));
  }
  return absl::OkStatus();
}

Json Record(const char* task) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["task"] = task;
  return j;
}

double FiniteNumber(const Json& j, const char* what) {
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw std::invalid_argument(absl::StrCat(what, " must be finite"));
  }
  return v;
}

// Runs `body`, converting JSON access failures into InvalidArgument.
template <typename T, typename Body>
absl::StatusOr<T> Guarded(Body body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(e.what());
  } catch (const std::invalid_argument& e) {
    return absl::InvalidArgumentError(e.what());
  }
}

Json MentionToJson(const Mention& m) {
  Json j = Json::object();
  j["id"] = m.id;
  j["text"] = m.text;
  j["sentence"] = m.sentence_index;
  if (m.tokens.start >= 0) {
    j["start"] = m.tokens.start;
    j["end"] = m.tokens.end;
  }
  return j;
}

Mention MentionFromJson(const Json& j) {
  Mention m;
  m.id = j.at("id").get<std::string>();
  m.text = j.value("text", std::string());
  m.sentence_index = j.value("sentence", 0);
  if (j.contains("start")) {
    m.tokens = {j.at("start").get<int>(), j.at("end").get<int>()};
    if (!m.tokens.valid()) {
      throw std::invalid_argument(
          absl::StrCat("mention '", m.id, "' has an invalid token span"));
    }
  }
  return m;
}

std::map<std::string, int> MentionIndex(const std::vector<Mention>& mentions) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < mentions.size(); ++i) {
    if (!index.emplace(mentions[i].id, static_cast<int>(i)).second) {
      throw std::invalid_argument(
          absl::StrCat("duplicate mention id '", mentions[i].id, "'"));
    }
  }
  return index;
}

int Lookup(const std::map<std::string, int>& index, const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw std::invalid_argument(absl::StrCat("unknown mention id '", id, "'"));
  }
  return it->second;
}

Json ClustersToJson(const Clustering& c) {
  Json j = Json::array();
  for (const auto& cluster : c.clusters()) j.push_back(cluster);
  return j;
}

Clustering ClustersFromJson(const Json& j) {
  Clustering c(j.get<std::vector<std::vector<std::string>>>());
  if (absl::Status s = c.Validate(); !s.ok()) {
    throw std::invalid_argument(std::string(s.message()));
  }
  return c;
}

}  // namespace

Json SrlInstanceToJson(const SrlInstance& instance) {
  Json j = Record("srl");
  j["id"] = instance.id;
  if (!instance.sentence.empty()) j["sentence"] = instance.sentence;
  j["tokens"] = instance.tokens;
  j["predicate_index"] = instance.predicate_index;
  Json roles = Json::array();
  for (const RoleQuestion& r : instance.roles) {
    Json role = Json::object();
    role["role_id"] = r.role_id;
    role["question"] = r.question;
    Json candidates = Json::array();
    for (const ScoredCandidate& c : r.candidates) {
      candidates.push_back({{"text", c.text}, {"score", c.score}, {"rank", c.rank}});
    }
    role["candidates"] = std::move(candidates);
    roles.push_back(std::move(role));
  }
  j["roles"] = std::move(roles);
  return j;
}

absl::StatusOr<SrlInstance> SrlInstanceFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "srl"); !s.ok()) return s;
  absl::StatusOr<SrlInstance> parsed = Guarded<SrlInstance>([&] {
    SrlInstance instance;
    instance.id = j.at("id").get<std::string>();
    instance.sentence = j.value("sentence", std::string());
    instance.tokens = j.at("tokens").get<std::vector<std::string>>();
    instance.predicate_index = j.value("predicate_index", 0);
    for (const Json& role : j.at("roles")) {
      RoleQuestion r;
      r.role_id = role.at("role_id").get<std::string>();
      r.question = role.value("question", std::string());
      if (role.contains("candidates")) {
        for (const Json& c : role.at("candidates")) {
          r.candidates.push_back({c.at("text").get<std::string>(),
                                  FiniteNumber(c.at("score"), "score"),
                                  c.at("rank").get<int>()});
        }
      }
      instance.roles.push_back(std::move(r));
    }
    return instance;
  });
  if (!parsed.ok()) return parsed;
  if (absl::Status s = ValidateSrlInstance(*parsed, /*require_candidates=*/false);
      !s.ok()) {
    return s;
  }
  return parsed;
}

Json CorefInstanceToJson(const CorefInstance& instance) {
  Json j = Record("coref");
  j["document_id"] = instance.document_id;
  j["sentences"] = instance.sentences;
  Json mentions = Json::array();
  for (const Mention& m : instance.mentions) mentions.push_back(MentionToJson(m));
  j["mentions"] = std::move(mentions);
  Json pairs = Json::array();
  for (const PairScore& p : instance.pair_scores) {
    pairs.push_back({{"m1", instance.mentions[p.first].id},
                     {"m2", instance.mentions[p.second].id},
                     {"score", p.score}});
  }
  j["pair_scores"] = std::move(pairs);
  return j;
}

absl::StatusOr<CorefInstance> CorefInstanceFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "coref"); !s.ok()) return s;
  absl::StatusOr<CorefInstance> parsed = Guarded<CorefInstance>([&] {
    CorefInstance instance;
    instance.document_id = j.at("document_id").get<std::string>();
    if (j.contains("sentences")) {
      instance.sentences = j.at("sentences").get<std::vector<std::string>>();
    }
    for (const Json& m : j.at("mentions")) {
      instance.mentions.push_back(MentionFromJson(m));
    }
    const auto index = MentionIndex(instance.mentions);
    if (j.contains("pair_scores")) {
      for (const Json& p : j.at("pair_scores")) {
        instance.pair_scores.push_back(
            {Lookup(index, p.at("m1").get<std::string>()),
             Lookup(index, p.at("m2").get<std::string>()),
             FiniteNumber(p.at("score"), "score")});
      }
    }
    NormalizePairs(instance.pair_scores);
    return instance;
  });
  if (!parsed.ok()) return parsed;
  if (absl::Status s = ValidateCorefInstance(*parsed); !s.ok()) return s;
  return parsed;
}

Json SrlStructureToJson(const SrlStructure& structure) {
  Json j = Record("srl");
  j["id"] = structure.instance_id;
  j["total_cost"] = structure.total_cost;
  j["complete"] = structure.complete();
  Json assignments = Json::array();
  for (const RoleAssignment& r : structure.roles) {
    Json a = Json::object();
    a["role_id"] = r.role_id;
    if (r.assignment) {
      a["text"] = r.assignment->text;
      a["start"] = r.assignment->span.start;
      a["end"] = r.assignment->span.end;
      a["rank"] = r.assignment->rank;
    } else {
      a["text"] = nullptr;
    }
    assignments.push_back(std::move(a));
  }
  j["assignments"] = std::move(assignments);
  return j;
}

absl::StatusOr<SrlStructure> SrlStructureFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "srl"); !s.ok()) return s;
  return Guarded<SrlStructure>([&] {
    SrlStructure structure;
    structure.instance_id = j.at("id").get<std::string>();
    structure.total_cost = FiniteNumber(j.at("total_cost"), "total_cost");
    for (const Json& a : j.at("assignments")) {
      RoleAssignment r;
      r.role_id = a.at("role_id").get<std::string>();
      if (a.contains("text") && !a["text"].is_null()) {
        SpanAssignment span;
        span.text = a.at("text").get<std::string>();
        span.span = {a.at("start").get<int>(), a.at("end").get<int>()};
        span.rank = a.value("rank", 1);
        if (!span.span.valid()) {
          throw std::invalid_argument(absl::StrCat(
              "role '", r.role_id, "' has an invalid token span"));
        }
        r.assignment = std::move(span);
      }
      structure.roles.push_back(std::move(r));
    }
    return structure;
  });
}

Json SrlGoldToJson(const SrlGold& gold) {
  Json j = Record("srl");
  j["id"] = gold.instance_id;
  Json answers = Json::object();
  for (const auto& [role, list] : gold.answers) answers[role] = list;
  j["answers"] = std::move(answers);
  return j;
}

absl::StatusOr<SrlGold> SrlGoldFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "srl"); !s.ok()) return s;
  return Guarded<SrlGold>([&] {
    SrlGold gold;
    gold.instance_id = j.at("id").get<std::string>();
    for (const auto& [role, list] : j.at("answers").items()) {
      if (list.is_string()) {
        gold.answers[role] = {list.get<std::string>()};
      } else {
        gold.answers[role] = list.get<std::vector<std::string>>();
      }
    }
    return gold;
  });
}

Json CorefGoldToJson(const CorefGold& gold) {
  Json j = Record("coref");
  j["document_id"] = gold.document_id;
  j["clusters"] = ClustersToJson(gold.clusters);
  return j;
}

absl::StatusOr<CorefGold> CorefGoldFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "coref"); !s.ok()) return s;
  return Guarded<CorefGold>([&] {
    CorefGold gold;
    gold.document_id = j.at("document_id").get<std::string>();
    gold.clusters = ClustersFromJson(j.at("clusters"));
    return gold;
  });
}

CorefDocumentPrediction CorefPredictionRecord::ToEvalInput() const {
  return {document_id, mentions, decisions, clustering};
}

bool operator==(const CorefPredictionRecord& a, const CorefPredictionRecord& b) {
  auto same_report = [](const std::optional<SolverReport>& x,
                        const std::optional<SolverReport>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->objective == y->objective && x->nodes == y->nodes &&
           x->components == y->components && x->optimal == y->optimal;
  };
  return a.document_id == b.document_id && a.mentions == b.mentions &&
         a.decisions == b.decisions && a.clustering == b.clustering &&
         same_report(a.report, b.report);
}

Json CorefPredictionToJson(const CorefPredictionRecord& record) {
  Json j = Record("coref");
  j["document_id"] = record.document_id;
  Json mentions = Json::array();
  for (const Mention& m : record.mentions) mentions.push_back(MentionToJson(m));
  j["mentions"] = std::move(mentions);
  Json decisions = Json::array();
  for (const PairDecision& d : record.decisions) {
    decisions.push_back({{"m1", record.mentions[d.first].id},
                         {"m2", record.mentions[d.second].id},
                         {"link", d.link}});
  }
  j["decisions"] = std::move(decisions);
  j["clusters"] =
      record.clustering ? ClustersToJson(*record.clustering) : Json(nullptr);
  if (record.report) {
    j["solver"] = {{"objective", record.report->objective},
                   {"nodes", record.report->nodes},
                   {"components", record.report->components},
                   {"optimal", record.report->optimal}};
  }
  return j;
}

absl::StatusOr<CorefPredictionRecord> CorefPredictionFromJson(const Json& j) {
  if (absl::Status s = CheckRecord(j, "coref"); !s.ok()) return s;
  return Guarded<CorefPredictionRecord>([&] {
    CorefPredictionRecord record;
    record.document_id = j.at("document_id").get<std::string>();
    for (const Json& m : j.at("mentions")) {
      record.mentions.push_back(MentionFromJson(m));
    }
    const auto index = MentionIndex(record.mentions);
    for (const Json& d : j.at("decisions")) {
      int a = Lookup(index, d.at("m1").get<std::string>());
      int b = Lookup(index, d.at("m2").get<std::string>());
      if (a > b) std::swap(a, b);
      if (a == b) throw std::invalid_argument("decision pairs a mention with itself");
      record.decisions.push_back({a, b, d.at("link").get<bool>()});
    }
    if (j.contains("clusters") && !j["clusters"].is_null()) {
      record.clustering = ClustersFromJson(j.at("clusters"));
    }
    if (j.contains("solver")) {
      const Json& s = j.at("solver");
      record.report = SolverReport{FiniteNumber(s.at("objective"), "objective"),
                                   s.at("nodes").get<int64_t>(),
                                   s.at("components").get<int>(),
                                   s.at("optimal").get<bool>()};
    }
    return record;
  });
}

absl::StatusOr<LoadResult<SrlInstance>> LoadSrlInstances(
    const std::string& path, const LoadOptions& options) {
  return LoadJsonlFile<SrlInstance>(path, SrlInstanceFromJson, options);
}

absl::StatusOr<LoadResult<CorefInstance>> LoadCorefInstances(
    const std::string& path, const LoadOptions& options) {
  return LoadJsonlFile<CorefInstance>(path, CorefInstanceFromJson, options);
}

absl::StatusOr<LoadResult<SrlStructure>> LoadSrlStructures(
    const std::string& path, const LoadOptions& options) {
  return LoadJsonlFile<SrlStructure>(path, SrlStructureFromJson, options);
}

absl::StatusOr<LoadResult<CorefPredictionRecord>> LoadCorefPredictions(
    const std::string& path, const LoadOptions& options) {
  return LoadJsonlFile<CorefPredictionRecord>(path, CorefPredictionFromJson,
                                              options);
}

absl::StatusOr<LoadResult<SrlGold>> LoadSrlGold(const std::string& path,
                                                const LoadOptions& options) {
  return LoadJsonlFile<SrlGold>(path, SrlGoldFromJson, options);
}

absl::StatusOr<LoadResult<CorefGold>> LoadCorefGold(
    const std::string& path, const LoadOptions& options) {
  return LoadJsonlFile<CorefGold>(path, CorefGoldFromJson, options);
}

Json MakeHeader(const Json& config) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "header";
  j["config"] = config;
  return j;
}

void WriteJsonl(std::ostream& out, const Json& header,
                const std::vector<Json>& records) {
  if (!header.is_null()) out << header.dump() << '\n';
  for (const Json& r : records) out << r.dump() << '\n';
}

absl::Status WriteJsonlFile(const std::string& path, const Json& header,
                            const std::vector<Json>& records) {
  std::ostringstream buffer;
  WriteJsonl(buffer, header, records);
  return WriteTextFile(path, buffer.str());
}

absl::Status WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "' for writing"));
  }
  out << text;
  out.flush();
  if (!out) {
    return absl::DataLossError(absl::StrCat("failed writing '", path, "'"));
  }
  return absl::OkStatus();
}

}  // namespace structinfer
