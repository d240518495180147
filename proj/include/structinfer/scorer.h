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

// Scoring backends: turn a prompt into ranked, log-scored candidates.
//
// Backends are shareable across threads. Scores are log-scale, higher is
// better, and are never exponentiated.
//
// Remote wire contract (POST, JSON, UTF-8):
//   request:  {"prompt": str, "mode": "generate" | "choices",
//              "n": int, "choices": [str]}
//   response: {"candidates": [{"text": str, "log_score": number}]}
// 2xx is success; 429 is retried after Retry-After seconds; 5xx and
// transport failures are retried with exponential backoff; other statuses
// fail immediately.

#ifndef STRUCTINFER_SCORER_H_
#define STRUCTINFER_SCORER_H_

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "structinfer/types.h"

namespace structinfer {

enum class ScoreMode { kGenerateTopN, kScoreChoices };

struct ScoreRequest {
  std::string prompt_id;
  std::string family;
  std::string prompt;
  // Text the mock backend draws generations from; never sent remotely.
  std::string context;
  ScoreMode mode = ScoreMode::kGenerateTopN;
  int n = 20;
  std::vector<std::string> choices;
};

struct RawCandidate {
  std::string text;
  double log_score = 0.0;
};

// Deduplicates by text (keeping the best score), sorts by score descending
// with text as tie-break, truncates to n and assigns ranks. For choice
// scoring, every choice must be present exactly and nothing else is kept.
absl::StatusOr<std::vector<ScoredCandidate>> NormalizeCandidates(
    const ScoreRequest& request, std::vector<RawCandidate> raw);

class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  // Identifies the backend and its configuration in cache keys.
  virtual std::string id() const = 0;
  virtual absl::StatusOr<std::vector<ScoredCandidate>> Score(
      const ScoreRequest& request) = 0;
};

// Pseudo-score in [-10, 0] from a splitmix64 hash of (prompt, candidate).
double MockScore(std::string_view prompt, std::string_view candidate,
                 uint64_t seed);

// Generations are the distinct contiguous token spans (up to
// `max_span_tokens` long) of the request context, or of the prompt when the
// context is empty.
class MockBackend : public ScorerBackend {
 public:
  explicit MockBackend(uint64_t seed = 0, int max_span_tokens = 4)
      : seed_(seed), max_span_tokens_(max_span_tokens) {}
  std::string id() const override;
  absl::StatusOr<std::vector<ScoredCandidate>> Score(
      const ScoreRequest& request) override;

 private:
  uint64_t seed_;
  int max_span_tokens_;
};

// Looks prompts up in a JSONL file of
//   {"prompt": str, "candidates": [{"text": str, "log_score": number}]}
class FileBackend : public ScorerBackend {
 public:
  static absl::StatusOr<std::unique_ptr<FileBackend>> Open(
      const std::string& path);
  std::string id() const override { return "file:" + path_; }
  absl::StatusOr<std::vector<ScoredCandidate>> Score(
      const ScoreRequest& request) override;

 private:
  FileBackend(std::string path,
              std::map<std::string, std::vector<RawCandidate>> table)
      : path_(std::move(path)), table_(std::move(table)) {}
  std::string path_;
  std::map<std::string, std::vector<RawCandidate>> table_;
};

struct RemoteOptions {
  std::string url;  // e.g. http://127.0.0.1:8080/score
  std::string auth_env = "STRUCTINFER_AUTH_TOKEN";
  int timeout_ms = 30000;
  int max_retries = 4;
  int base_backoff_ms = 200;
  int max_backoff_ms = 10000;
  int max_in_flight = 4;
};

// Failure classes: DeadlineExceeded for timeouts, Unavailable once retries
// are exhausted, Internal for protocol violations. Messages carry the
// prompt id and never the auth token.
class RemoteBackend : public ScorerBackend {
 public:
  static absl::StatusOr<std::unique_ptr<RemoteBackend>> Create(
      RemoteOptions options);
  std::string id() const override { return "remote:" + options_.url; }
  absl::StatusOr<std::vector<ScoredCandidate>> Score(
      const ScoreRequest& request) override;

  // Number of requests currently on the wire.
  int in_flight() const;

 private:
  RemoteBackend(RemoteOptions options, std::string base, std::string path)
      : options_(std::move(options)),
        base_(std::move(base)),
        path_(std::move(path)) {}

  absl::StatusOr<std::vector<RawCandidate>> Attempt(const ScoreRequest& request,
                                                    int& retry_after_ms,
                                                    bool& retryable);

  RemoteOptions options_;
  std::string base_;
  std::string path_;
  mutable std::mutex mu_;
  std::condition_variable slot_free_;
  int in_flight_ = 0;
};

// Persistent cache in front of another backend. The cache file is JSONL,
// append-only; later lines win on load.
class CachingBackend : public ScorerBackend {
 public:
  static absl::StatusOr<std::unique_ptr<CachingBackend>> Open(
      std::unique_ptr<ScorerBackend> inner, const std::string& path);
  std::string id() const override { return inner_->id(); }
  absl::StatusOr<std::vector<ScoredCandidate>> Score(
      const ScoreRequest& request) override;

  int64_t hits() const;
  int64_t misses() const;

 private:
  CachingBackend(std::unique_ptr<ScorerBackend> inner, std::string path)
      : inner_(std::move(inner)), path_(std::move(path)) {}
  std::string KeyOf(const ScoreRequest& request) const;

  std::unique_ptr<ScorerBackend> inner_;
  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<ScoredCandidate>> entries_;
  int64_t hits_ = 0;
  int64_t misses_ = 0;
};

// Builds a backend from "mock", "mock:<seed>", "file:<path>" or
// "remote:<url>".
absl::StatusOr<std::unique_ptr<ScorerBackend>> MakeBackend(
    const std::string& spec, uint64_t seed = 0,
    const RemoteOptions& remote_defaults = {});

// Link score of a mention pair: yes-score minus no-score.
inline double LinkScore(double yes_score, double no_score) {
  return yes_score - no_score;
}

// Scores the two yes/no choices and returns their difference.
absl::StatusOr<double> ScoreLink(ScorerBackend& backend, ScoreRequest request,
                                 const std::string& yes, const std::string& no);

}  // namespace structinfer

#endif  // STRUCTINFER_SCORER_H_
