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

#include "structinfer/scorer.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"

namespace structinfer {
namespace {

using Json = nlohmann::ordered_json;

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view ModeName(ScoreMode mode) {
  return mode == ScoreMode::kGenerateTopN ? "generate" : "choices";
}

std::string Where(const ScoreRequest& request) {
  return request.prompt_id.empty() ? std::string("prompt")
                                   : absl::StrCat("prompt ", request.prompt_id);
}

absl::StatusOr<std::vector<RawCandidate>> ParseCandidates(const Json& j) {
  if (!j.is_object() || !j.contains("candidates") ||
      !j["candidates"].is_array()) {
    return absl::InvalidArgumentError("missing 'candidates' array");
  }
  std::vector<RawCandidate> out;
  for (const Json& c : j["candidates"]) {
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string() ||
        !c.contains("log_score") || !c["log_score"].is_number()) {
      return absl::InvalidArgumentError(
          "candidate needs string 'text' and numeric 'log_score'");
    }
    out.push_back({c["text"].get<std::string>(), c["log_score"].get<double>()});
  }
  return out;
}

}  // namespace

absl::StatusOr<std::vector<ScoredCandidate>> NormalizeCandidates(
    const ScoreRequest& request, std::vector<RawCandidate> raw) {
  std::map<std::string, double> best;
  for (RawCandidate& c : raw) {
    auto [it, inserted] = best.emplace(c.text, c.log_score);
    if (!inserted) it->second = std::max(it->second, c.log_score);
  }
  if (request.mode == ScoreMode::kScoreChoices) {
    std::map<std::string, double> kept;
    for (const std::string& choice : request.choices) {
      auto it = best.find(choice);
      if (it == best.end()) {
        return absl::InvalidArgumentError(absl::StrCat(
            Where(request), ": no score for choice '", choice, "'"));
      }
      kept.insert(*it);
    }
    best = std::move(kept);
  }
  std::vector<ScoredCandidate> out;
  out.reserve(best.size());
  for (const auto& [text, score] : best) out.push_back({text, score, 0});
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     return a.score > b.score;
                   });
  if (request.mode == ScoreMode::kGenerateTopN && request.n >= 0 &&
      out.size() > static_cast<size_t>(request.n)) {
    out.resize(request.n);
  }
  for (size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

double MockScore(std::string_view prompt, std::string_view candidate,
                 uint64_t seed) {
  uint64_t h = Fnv1a(prompt);
  h = Fnv1a(std::string_view("\x1f", 1), h);
  h = Fnv1a(candidate, h);
  const uint64_t r = SplitMix64(h ^ SplitMix64(seed));
  // 53 random bits mapped to [0, 1].
  const double unit = static_cast<double>(r >> 11) / 9007199254740991.0;
  return -10.0 * unit;
}

std::string MockBackend::id() const { return absl::StrCat("mock:", seed_); }

absl::StatusOr<std::vector<ScoredCandidate>> MockBackend::Score(
    const ScoreRequest& request) {
  std::vector<RawCandidate> raw;
  if (request.mode == ScoreMode::kScoreChoices) {
    for (const std::string& choice : request.choices) {
      raw.push_back({choice, MockScore(request.prompt, choice, seed_)});
    }
  } else {
    const std::vector<std::string> tokens = SplitTokens(
        request.context.empty() ? request.prompt : request.context);
    std::set<std::string> seen;
    for (size_t b = 0; b < tokens.size(); ++b) {
      for (size_t e = b + 1;
           e <= tokens.size() && e - b <= static_cast<size_t>(max_span_tokens_);
           ++e) {
        std::string text = JoinTokens(tokens, b, e);
        if (!seen.insert(text).second) continue;
        const double score = MockScore(request.prompt, text, seed_);
        raw.push_back({std::move(text), score});
      }
    }
  }
  return NormalizeCandidates(request, std::move(raw));
}

absl::StatusOr<std::unique_ptr<FileBackend>> FileBackend::Open(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open score file ", path));
  }
  std::map<std::string, std::vector<RawCandidate>> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("prompt") ||
        !j["prompt"].is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, " line ", line_no, ": expected {\"prompt\", \"candidates\"}"));
    }
    absl::StatusOr<std::vector<RawCandidate>> cands = ParseCandidates(j);
    if (!cands.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, " line ", line_no, ": ", cands.status().message()));
    }
    std::vector<RawCandidate>& slot = table[j["prompt"].get<std::string>()];
    slot.insert(slot.end(), cands->begin(), cands->end());
  }
  return std::unique_ptr<FileBackend>(
      new FileBackend(path, std::move(table)));
}

absl::StatusOr<std::vector<ScoredCandidate>> FileBackend::Score(
    const ScoreRequest& request) {
  auto it = table_.find(request.prompt);
  if (it == table_.end()) {
    return absl::NotFoundError(
        absl::StrCat(Where(request), ": not present in ", path_));
  }
  return NormalizeCandidates(request, it->second);
}

absl::StatusOr<std::unique_ptr<RemoteBackend>> RemoteBackend::Create(
    RemoteOptions options) {
  const std::string& url = options.url;
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos ||
      (url.compare(0, scheme, "http") != 0 &&
       url.compare(0, scheme, "https") != 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("remote url must start with http:// or https://: ", url));
  }
  const size_t slash = url.find('/', scheme + 3);
  std::string base = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);
  if (base.size() <= scheme + 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("remote url has no host: ", url));
  }
  if (options.max_in_flight < 1 || options.max_retries < 0 ||
      options.timeout_ms < 1) {
    return absl::InvalidArgumentError(
        "remote options need max_in_flight >= 1, max_retries >= 0 and a "
        "positive timeout");
  }
  return std::unique_ptr<RemoteBackend>(
      new RemoteBackend(std::move(options), std::move(base), std::move(path)));
}

int RemoteBackend::in_flight() const {
  std::lock_guard<std::mutex> lock(mu_);
  return in_flight_;
}

absl::StatusOr<std::vector<RawCandidate>> RemoteBackend::Attempt(
    const ScoreRequest& request, int& retry_after_ms, bool& retryable) {
  retry_after_ms = -1;
  retryable = false;
  Json body = {{"prompt", request.prompt},
               {"mode", ModeName(request.mode)},
               {"n", request.n},
               {"choices", request.choices}};

  httplib::Client client(base_);
  const auto timeout = std::chrono::milliseconds(options_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!options_.auth_env.empty()) {
    if (const char* token = std::getenv(options_.auth_env.c_str());
        token != nullptr && *token != '\0') {
      headers.emplace("Authorization", absl::StrCat("Bearer ", token));
    }
  }

  {
    std::unique_lock<std::mutex> lock(mu_);
    slot_free_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
  }
  httplib::Result res =
      client.Post(path_, headers, body.dump(), "application/json");
  {
    std::lock_guard<std::mutex> lock(mu_);
    --in_flight_;
  }
  slot_free_.notify_one();

  if (!res) {
    const httplib::Error err = res.error();
    retryable = true;
    if (err == httplib::Error::ConnectionTimeout ||
        err == httplib::Error::Read) {
      return absl::DeadlineExceededError(absl::StrCat(
          Where(request), ": remote scorer timed out after ",
          options_.timeout_ms, " ms"));
    }
    return absl::UnavailableError(absl::StrCat(
        Where(request), ": remote scorer unreachable (",
        httplib::to_string(err), ")"));
  }
  const int status = res->status;
  if (status == 429) {
    retryable = true;
    int seconds = 0;
    if (res->has_header("Retry-After") &&
        absl::SimpleAtoi(res->get_header_value("Retry-After"), &seconds) &&
        seconds >= 0) {
      retry_after_ms = seconds * 1000;
    }
    return absl::UnavailableError(
        absl::StrCat(Where(request), ": remote scorer rate limited (429)"));
  }
  if (status >= 500) {
    retryable = true;
    return absl::UnavailableError(absl::StrCat(
        Where(request), ": remote scorer returned HTTP ", status));
  }
  if (status < 200 || status >= 300) {
    return absl::InternalError(absl::StrCat(
        Where(request), ": remote scorer rejected request with HTTP ", status));
  }
  Json j = Json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InternalError(
        absl::StrCat(Where(request), ": remote response is not JSON"));
  }
  absl::StatusOr<std::vector<RawCandidate>> cands = ParseCandidates(j);
  if (!cands.ok()) {
    return absl::InternalError(absl::StrCat(
        Where(request), ": malformed remote response: ",
        cands.status().message()));
  }
  return cands;
}

absl::StatusOr<std::vector<ScoredCandidate>> RemoteBackend::Score(
    const ScoreRequest& request) {
  absl::Status last;
  int backoff_ms = options_.base_backoff_ms;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    int retry_after_ms = -1;
    bool retryable = false;
    absl::StatusOr<std::vector<RawCandidate>> raw =
        Attempt(request, retry_after_ms, retryable);
    if (raw.ok()) {
      absl::StatusOr<std::vector<ScoredCandidate>> out =
          NormalizeCandidates(request, *std::move(raw));
      if (!out.ok()) return absl::InternalError(out.status().message());
      return out;
    }
    last = raw.status();
    if (!retryable) return last;
    if (attempt == options_.max_retries) break;
    const int wait_ms = retry_after_ms >= 0
                            ? std::min(retry_after_ms, options_.max_backoff_ms)
                            : std::min(backoff_ms, options_.max_backoff_ms);
    std::this_thread::sleep_for(std::chrono::milliseconds(wait_ms));
    backoff_ms = std::min(options_.max_backoff_ms, backoff_ms * 2);
  }
  const std::string suffix =
      absl::StrCat(" (after ", options_.max_retries + 1, " attempts)");
  if (absl::IsDeadlineExceeded(last)) {
    return absl::DeadlineExceededError(absl::StrCat(last.message(), suffix));
  }
  return absl::UnavailableError(absl::StrCat(last.message(), suffix));
}

absl::StatusOr<std::unique_ptr<CachingBackend>> CachingBackend::Open(
    std::unique_ptr<ScorerBackend> inner, const std::string& path) {
  std::unique_ptr<CachingBackend> cache(
      new CachingBackend(std::move(inner), path));
  std::ifstream in(path);
  if (!in) return cache;  // a missing cache starts empty
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    // A torn final line from an interrupted run is ignored.
    if (j.is_discarded() || !j.is_object() || !j.contains("key") ||
        !j["key"].is_string() || !j.contains("candidates") ||
        !j["candidates"].is_array()) {
      continue;
    }
    std::vector<ScoredCandidate> cands;
    bool ok = true;
    for (const Json& c : j["candidates"]) {
      if (!c.is_object() || !c.contains("text") || !c.contains("score") ||
          !c.contains("rank") || !c["score"].is_number() ||
          !c["rank"].is_number_integer() || !c["text"].is_string()) {
        ok = false;
        break;
      }
      cands.push_back({c["text"].get<std::string>(), c["score"].get<double>(),
                       c["rank"].get<int>()});
    }
    if (ok) cache->entries_[j["key"].get<std::string>()] = std::move(cands);
  }
  return cache;
}

std::string CachingBackend::KeyOf(const ScoreRequest& request) const {
  Json key = Json::array({inner_->id(), request.family, request.prompt,
                          ModeName(request.mode), request.n, request.choices});
  return key.dump();
}

absl::StatusOr<std::vector<ScoredCandidate>> CachingBackend::Score(
    const ScoreRequest& request) {
  const std::string key = KeyOf(request);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      ++hits_;
      return it->second;
    }
    ++misses_;
  }
  absl::StatusOr<std::vector<ScoredCandidate>> out = inner_->Score(request);
  if (!out.ok()) return out;

  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.count(key) > 0) return entries_[key];
  Json cands = Json::array();
  for (const ScoredCandidate& c : *out) {
    cands.push_back({{"text", c.text}, {"score", c.score}, {"rank", c.rank}});
  }
  Json line = {{"key", key}, {"candidates", std::move(cands)}};
  std::ofstream file(path_, std::ios::app);
  if (!file) {
    return absl::DataLossError(
        absl::StrCat("cannot append to score cache ", path_));
  }
  file << line.dump() << '\n';
  file.flush();
  if (!file) {
    return absl::DataLossError(
        absl::StrCat("write to score cache ", path_, " failed"));
  }
  entries_[key] = *out;
  return out;
}

int64_t CachingBackend::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

int64_t CachingBackend::misses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return misses_;
}

absl::StatusOr<std::unique_ptr<ScorerBackend>> MakeBackend(
    const std::string& spec, uint64_t seed,
    const RemoteOptions& remote_defaults) {
  if (spec == "mock") return std::make_unique<MockBackend>(seed);
  if (spec.rfind("mock:", 0) == 0) {
    uint64_t parsed = 0;
    if (!absl::SimpleAtoi(spec.substr(5), &parsed)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad mock seed in backend '", spec, "'"));
    }
    return std::make_unique<MockBackend>(parsed);
  }
  if (spec.rfind("file:", 0) == 0) {
    absl::StatusOr<std::unique_ptr<FileBackend>> file =
        FileBackend::Open(spec.substr(5));
    if (!file.ok()) return file.status();
    return std::unique_ptr<ScorerBackend>(*std::move(file));
  }
  if (spec.rfind("remote:", 0) == 0) {
    RemoteOptions options = remote_defaults;
    options.url = spec.substr(7);
    absl::StatusOr<std::unique_ptr<RemoteBackend>> remote =
        RemoteBackend::Create(std::move(options));
    if (!remote.ok()) return remote.status();
    return std::unique_ptr<ScorerBackend>(*std::move(remote));
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown backend '", spec, "' (expected mock, file:PATH or remote:URL)"));
}

absl::StatusOr<double> ScoreLink(ScorerBackend& backend, ScoreRequest request,
                                 const std::string& yes,
                                 const std::string& no) {
  request.mode = ScoreMode::kScoreChoices;
  request.choices = {yes, no};
  request.n = 2;
  absl::StatusOr<std::vector<ScoredCandidate>> scored = backend.Score(request);
  if (!scored.ok()) return scored.status();
  double yes_score = 0.0;
  double no_score = 0.0;
  for (const ScoredCandidate& c : *scored) {
    if (c.text == yes) yes_score = c.score;
    if (c.text == no) no_score = c.score;
  }
  return LinkScore(yes_score, no_score);
}

}  // namespace structinfer
