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

// JSON-lines file formats. Every record carries "schema_version"; a line
// with "kind": "header" holds run provenance and is skipped by loaders.
// Field-level documentation lives in docs/file_formats.md.

#ifndef STRUCTINFER_JSONL_H_
#define STRUCTINFER_JSONL_H_

#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "structinfer/coref_inference.h"
#include "structinfer/metrics.h"
#include "structinfer/types.h"

namespace structinfer {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// ---- Per-record conversions. FromJson functions return InvalidArgument on
// schema violations. ----

Json SrlInstanceToJson(const SrlInstance& instance);
absl::StatusOr<SrlInstance> SrlInstanceFromJson(const Json& j);

Json CorefInstanceToJson(const CorefInstance& instance);
absl::StatusOr<CorefInstance> CorefInstanceFromJson(const Json& j);

Json SrlStructureToJson(const SrlStructure& structure);
absl::StatusOr<SrlStructure> SrlStructureFromJson(const Json& j);

Json SrlGoldToJson(const SrlGold& gold);
absl::StatusOr<SrlGold> SrlGoldFromJson(const Json& j);

Json CorefGoldToJson(const CorefGold& gold);
absl::StatusOr<CorefGold> CorefGoldFromJson(const Json& j);

// Output of a coreference solver for one document.
struct CorefPredictionRecord {
  std::string document_id;
  std::vector<Mention> mentions;
  LinkDecisionSet decisions;
  std::optional<Clustering> clustering;
  std::optional<SolverReport> report;

  CorefDocumentPrediction ToEvalInput() const;

  friend bool operator==(const CorefPredictionRecord& a,
                         const CorefPredictionRecord& b);
};

Json CorefPredictionToJson(const CorefPredictionRecord& record);
absl::StatusOr<CorefPredictionRecord> CorefPredictionFromJson(const Json& j);

// ---- Files ----

struct LineDiagnostic {
  int line = 0;  // 1-based
  std::string message;
};

template <typename T>
struct LoadResult {
  std::vector<T> values;
  std::vector<LineDiagnostic> diagnostics;
};

struct LoadOptions {
  // Skip bad lines and record a diagnostic instead of failing.
  bool partial = false;
};

// Streams `in` line by line. Blank lines and header lines are skipped.
template <typename T>
using RecordParser = std::function<absl::StatusOr<T>(const Json&)>;

template <typename T>
absl::StatusOr<LoadResult<T>> LoadJsonlStream(std::istream& in,
                                              const RecordParser<T>& parse,
                                              const LoadOptions& options = {});

template <typename T>
absl::StatusOr<LoadResult<T>> LoadJsonlFile(const std::string& path,
                                            const RecordParser<T>& parse,
                                            const LoadOptions& options = {});

absl::StatusOr<LoadResult<SrlInstance>> LoadSrlInstances(
    const std::string& path, const LoadOptions& options = {});
absl::StatusOr<LoadResult<CorefInstance>> LoadCorefInstances(
    const std::string& path, const LoadOptions& options = {});
absl::StatusOr<LoadResult<SrlStructure>> LoadSrlStructures(
    const std::string& path, const LoadOptions& options = {});
absl::StatusOr<LoadResult<CorefPredictionRecord>> LoadCorefPredictions(
    const std::string& path, const LoadOptions& options = {});
absl::StatusOr<LoadResult<SrlGold>> LoadSrlGold(
    const std::string& path, const LoadOptions& options = {});
absl::StatusOr<LoadResult<CorefGold>> LoadCorefGold(
    const std::string& path, const LoadOptions& options = {});

// Header line recording the run configuration.
Json MakeHeader(const Json& config);

// Writes `header` (unless null) then one compact JSON object per line.
void WriteJsonl(std::ostream& out, const Json& header,
                const std::vector<Json>& records);
absl::Status WriteJsonlFile(const std::string& path, const Json& header,
                            const std::vector<Json>& records);
absl::Status WriteTextFile(const std::string& path, const std::string& text);

// ---- Implementation ----

namespace jsonl_internal {
absl::Status OpenForRead(const std::string& path, std::ifstream& in);
bool IsHeader(const Json& j);
}  // namespace jsonl_internal

template <typename T>
absl::StatusOr<LoadResult<T>> LoadJsonlStream(std::istream& in,
                                              const RecordParser<T>& parse,
                                              const LoadOptions& options) {
  LoadResult<T> result;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    absl::Status status;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      status = absl::InvalidArgumentError("malformed JSON");
    } else if (jsonl_internal::IsHeader(j)) {
      continue;
    } else {
      absl::StatusOr<T> value = parse(j);
      if (value.ok()) {
        result.values.push_back(*std::move(value));
        continue;
      }
      status = value.status();
    }
    if (!options.partial) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": ", status.message()));
    }
    result.diagnostics.push_back(
        {line_number, std::string(status.message())});
  }
  return result;
}

template <typename T>
absl::StatusOr<LoadResult<T>> LoadJsonlFile(const std::string& path,
                                            const RecordParser<T>& parse,
                                            const LoadOptions& options) {
  std::ifstream in;
  if (absl::Status s = jsonl_internal::OpenForRead(path, in); !s.ok()) {
    return s;
  }
  absl::StatusOr<LoadResult<T>> result = LoadJsonlStream(in, parse, options);
  if (!result.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", result.status().message()));
  }
  return result;
}

}  // namespace structinfer

#endif  // STRUCTINFER_JSONL_H_
