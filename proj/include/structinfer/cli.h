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

// Command-line driver: prompts, score, infer and eval subcommands.

#ifndef STRUCTINFER_CLI_H_
#define STRUCTINFER_CLI_H_

#include <cstdint>
#include <ostream>
#include <string>

#include "absl/status/status.h"
#include "json.hpp"

namespace structinfer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitSolverBudget = 4;
inline constexpr int kExitRemote = 5;

// Maps a status to the process exit code.
int ExitCodeFor(const absl::Status& status);

struct RunConfig {
  std::string command;
  std::string task = "srl";
  std::string solver = "constrained";
  int k = 20;
  int top_n = 20;
  int window = 0;  // 0: all pairs
  std::string template_family;  // empty: t5-qa for srl, coref-flan for coref
  std::string backend = "mock";
  uint64_t seed = 0;
  std::string input;
  std::string output;
  std::string gold;
  std::string pred;
  int jobs = 1;
  bool strict = false;
  bool case_insensitive = false;
  bool partial = false;
  int64_t node_limit = 10'000'000;
  std::string cache;
  std::string context_style = "relevant";
  bool highlight = false;
  std::string report;
  std::string metrics;
  int remote_timeout_ms = 30000;
  int remote_retries = 4;
  int remote_max_in_flight = 4;
  std::string auth_env = "STRUCTINFER_AUTH_TOKEN";

  // Every field, in declaration order.
  nlohmann::ordered_json ToJson() const;
  // The template family after applying the per-task default.
  std::string EffectiveTemplate() const;
};

// Checks task/solver/template combinations and required paths.
absl::Status ValidateRunConfig(const RunConfig& config);

// Runs one command. Reports go to `out`, diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace structinfer

#endif  // STRUCTINFER_CLI_H_
