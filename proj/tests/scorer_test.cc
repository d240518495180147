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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "absl/strings/str_cat.h"
#include "fake_server.h"
#include "gtest/gtest.h"
#include "structinfer/parallel.h"

namespace structinfer {
namespace {

using testing::FakeScoringServer;

std::string TempPath(const std::string& name) {
  const std::string path =
      (std::filesystem::temp_directory_path() /
       absl::StrCat("structinfer_", ::testing::UnitTest::GetInstance()
                                        ->current_test_info()
                                        ->name(),
                    "_", name))
          .string();
  std::remove(path.c_str());
  return path;
}

ScoreRequest Generate(const std::string& prompt, int n = 20) {
  ScoreRequest r;
  r.prompt_id = "p/" + prompt;
  r.family = "t5-qa";
  r.prompt = prompt;
  r.mode = ScoreMode::kGenerateTopN;
  r.n = n;
  return r;
}

ScoreRequest Choices(const std::string& prompt) {
  ScoreRequest r = Generate(prompt);
  r.mode = ScoreMode::kScoreChoices;
  r.choices = {"Yes", "No"};
  return r;
}

TEST(LinkScoreTest, Difference) {
  EXPECT_EQ(LinkScore(-1.0, -3.0), 2.0);
  EXPECT_EQ(LinkScore(-2.5, -2.5), 0.0);
}

TEST(NormalizeTest, DedupesSortsAndRanks) {
  absl::StatusOr<std::vector<ScoredCandidate>> out = NormalizeCandidates(
      Generate("x", 2), {{"b", -2}, {"a", -1}, {"b", -0.5}, {"c", -3}});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(*out, (std::vector<ScoredCandidate>{{"b", -0.5, 1}, {"a", -1, 2}}));
}

TEST(NormalizeTest, ChoicesMustAllBePresent) {
  EXPECT_FALSE(NormalizeCandidates(Choices("x"), {{"Yes", -1}}).ok());
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      NormalizeCandidates(Choices("x"), {{"No", -1}, {"Yes", -2}, {"Maybe", 0}});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->size(), 2u);
  EXPECT_EQ(out->front().text, "No");
}

TEST(MockBackendTest, DeterministicAndInRange) {
  MockBackend mock(3);
  ScoreRequest r = Generate("question: Who? context: Elrond gave Aragorn");
  absl::StatusOr<std::vector<ScoredCandidate>> a = mock.Score(r);
  absl::StatusOr<std::vector<ScoredCandidate>> b = mock.Score(r);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(*a, *b);
  for (const ScoredCandidate& c : *a) {
    EXPECT_GE(c.score, -10.0);
    EXPECT_LE(c.score, 0.0);
  }
  EXPECT_NE(*a, *MockBackend(4).Score(r));
}

TEST(MockBackendTest, GenerationsComeFromContext) {
  MockBackend mock;
  ScoreRequest r = Generate("prompt text", 5);
  r.context = "Elrond gave Aragorn the sword";
  absl::StatusOr<std::vector<ScoredCandidate>> out = mock.Score(r);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->size(), 5u);
  for (size_t i = 0; i < out->size(); ++i) {
    EXPECT_NE(r.context.find((*out)[i].text), std::string::npos);
    EXPECT_EQ((*out)[i].rank, static_cast<int>(i) + 1);
  }
  EXPECT_TRUE(ValidateCandidateList(*out).ok());
}

TEST(MockBackendTest, ChoicesCoverBoth) {
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      MockBackend().Score(Choices("Does Al refer to him?"));
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out->size(), 2u);
  std::set<std::string> texts = {(*out)[0].text, (*out)[1].text};
  EXPECT_EQ(texts, (std::set<std::string>{"Yes", "No"}));
}

TEST(FileBackendTest, ElrondScoresVerbatim) {
  absl::StatusOr<std::unique_ptr<FileBackend>> file = FileBackend::Open(
      absl::StrCat(STRUCTINFER_FIXTURE_DIR, "/elrond_scores.jsonl"));
  ASSERT_TRUE(file.ok()) << file.status();
  const std::string context = " context: Elrond gave Aragorn the sword";
  auto a = (*file)->Score(Generate("question: Who gave something?" + context));
  auto b = (*file)->Score(Generate("question: Who was given something?" + context));
  auto c = (*file)->Score(Generate("question: What was given?" + context));
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(*a, (std::vector<ScoredCandidate>{{"Elrond", 2, 1}, {"Elrond gave", 1, 2}}));
  EXPECT_EQ(*b, (std::vector<ScoredCandidate>{{"Aragorn", 5, 1}, {"Elrond", 3, 2}}));
  EXPECT_EQ(*c, (std::vector<ScoredCandidate>{{"Aragorn the sword", 5, 1},
                                              {"the sword", 4, 2}}));
  auto missing = (*file)->Score(Generate("unknown"));
  EXPECT_EQ(missing.status().code(), absl::StatusCode::kNotFound);
}

TEST(FileBackendTest, LinkScoreFromChoices) {
  const std::string path = TempPath("links.jsonl");
  std::ofstream(path)
      << R"({"prompt":"p12","candidates":[{"text":"Yes","log_score":-1},{"text":"No","log_score":-3}]})"
      << "\n"
      << R"({"prompt":"p13","candidates":[{"text":"Yes","log_score":-4},{"text":"No","log_score":-1}]})"
      << "\n"
      << R"({"prompt":"p23","candidates":[{"text":"Yes","log_score":-0.5},{"text":"No","log_score":-2}]})"
      << "\n";
  absl::StatusOr<std::unique_ptr<FileBackend>> file = FileBackend::Open(path);
  ASSERT_TRUE(file.ok());
  std::vector<double> scores;
  for (const char* p : {"p12", "p13", "p23"}) {
    absl::StatusOr<double> s = ScoreLink(**file, Generate(p), "Yes", "No");
    ASSERT_TRUE(s.ok());
    scores.push_back(*s);
  }
  EXPECT_EQ(scores, (std::vector<double>{2.0, -3.0, 1.5}));
}

TEST(MakeBackendTest, ParsesSpecs) {
  EXPECT_TRUE(MakeBackend("mock").ok());
  EXPECT_EQ((*MakeBackend("mock:9"))->id(), "mock:9");
  EXPECT_FALSE(MakeBackend("mock:x").ok());
  EXPECT_EQ(MakeBackend("file:/nonexistent").status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_TRUE(MakeBackend("remote:http://127.0.0.1:1/score").ok());
  EXPECT_FALSE(MakeBackend("remote:ftp://x").ok());
  EXPECT_FALSE(MakeBackend("gpt").ok());
}

RemoteOptions Fast(const std::string& url) {
  RemoteOptions o;
  o.url = url;
  o.timeout_ms = 2000;
  o.max_retries = 3;
  o.base_backoff_ms = 5;
  o.max_backoff_ms = 50;
  o.max_in_flight = 2;
  o.auth_env = "STRUCTINFER_TEST_TOKEN";
  return o;
}

std::unique_ptr<RemoteBackend> Remote(const RemoteOptions& o) {
  absl::StatusOr<std::unique_ptr<RemoteBackend>> r = RemoteBackend::Create(o);
  EXPECT_TRUE(r.ok()) << r.status();
  return *std::move(r);
}

TEST(RemoteBackendTest, SuccessAndDedup) {
  FakeScoringServer server;
  auto remote = Remote(Fast(server.url()));
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      remote->Score(Generate("hello"));
  ASSERT_TRUE(out.ok()) << out.status();
  ASSERT_EQ(out->size(), 3u);
  EXPECT_EQ((*out)[0].text, "alpha");
  EXPECT_EQ((*out)[1].text, "gamma");
  EXPECT_EQ((*out)[2].text, "beta");
  auto choices = remote->Score(Choices("hello"));
  ASSERT_TRUE(choices.ok());
  EXPECT_EQ(choices->size(), 2u);
}

TEST(RemoteBackendTest, BoundedInFlight) {
  FakeScoringServer server(nullptr, /*work_ms=*/40);
  RemoteOptions o = Fast(server.url());
  o.max_in_flight = 3;
  auto remote = Remote(o);
  std::vector<absl::StatusOr<std::vector<ScoredCandidate>>> results =
      ParallelMap<absl::StatusOr<std::vector<ScoredCandidate>>>(
          24, 8, [&](size_t i) {
            return remote->Score(Generate(absl::StrCat("prompt ", i)));
          });
  for (const auto& r : results) EXPECT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(server.requests(), 24);
  EXPECT_LE(server.max_concurrent(), 3);
  EXPECT_GE(server.max_concurrent(), 2);
  EXPECT_EQ(remote->in_flight(), 0);
}

TEST(RemoteBackendTest, RetriesServerErrorsWithoutDuplicates) {
  FakeScoringServer server([](int n) {
    FakeScoringServer::Reply r;
    if (n < 2) r.status = 503;
    return r;
  });
  auto remote = Remote(Fast(server.url()));
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      remote->Score(Generate("retry me"));
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(server.requests(), 3);
  std::set<std::string> texts;
  for (const ScoredCandidate& c : *out) texts.insert(c.text);
  EXPECT_EQ(texts.size(), out->size());
}

TEST(RemoteBackendTest, HonorsRetryAfter) {
  FakeScoringServer server([](int n) {
    FakeScoringServer::Reply r;
    if (n == 0) {
      r.status = 429;
      r.retry_after = "1";
    }
    return r;
  });
  RemoteOptions o = Fast(server.url());
  o.max_backoff_ms = 5000;
  auto remote = Remote(o);
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      remote->Score(Generate("slow down"));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_EQ(server.requests(), 2);
  EXPECT_GE(elapsed, std::chrono::milliseconds(950));
}

TEST(RemoteBackendTest, ExhaustedRetriesAreUnavailableWithPromptId) {
  setenv("STRUCTINFER_TEST_TOKEN", "s3cret-token", 1);
  FakeScoringServer server([](int) {
    FakeScoringServer::Reply r;
    r.status = 500;
    return r;
  });
  auto remote = Remote(Fast(server.url()));
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      remote->Score(Generate("doomed"));
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_NE(out.status().message().find("p/doomed"), std::string::npos);
  EXPECT_EQ(out.status().message().find("s3cret"), std::string::npos);
  EXPECT_EQ(server.requests(), 4);
  EXPECT_EQ(server.last_authorization(), "Bearer s3cret-token");
  unsetenv("STRUCTINFER_TEST_TOKEN");
}

TEST(RemoteBackendTest, ClientErrorsAreNotRetried) {
  FakeScoringServer server([](int) {
    FakeScoringServer::Reply r;
    r.status = 400;
    r.body = "{}";
    return r;
  });
  auto remote = Remote(Fast(server.url()));
  absl::StatusOr<std::vector<ScoredCandidate>> out = remote->Score(Generate("x"));
  EXPECT_EQ(out.status().code(), absl::StatusCode::kInternal);
  EXPECT_EQ(server.requests(), 1);
}

TEST(RemoteBackendTest, MalformedBodyIsProtocolError) {
  FakeScoringServer server([](int) {
    FakeScoringServer::Reply r;
    r.body = "{\"candidates\": [{\"text\": 3}]}";
    return r;
  });
  auto remote = Remote(Fast(server.url()));
  EXPECT_EQ(remote->Score(Generate("x")).status().code(),
            absl::StatusCode::kInternal);
}

TEST(RemoteBackendTest, TimeoutIsDistinct) {
  FakeScoringServer server([](int) {
    FakeScoringServer::Reply r;
    r.delay_ms = 600;
    return r;
  });
  RemoteOptions o = Fast(server.url());
  o.timeout_ms = 100;
  o.max_retries = 0;
  auto remote = Remote(o);
  absl::StatusOr<std::vector<ScoredCandidate>> out =
      remote->Score(Generate("tick"));
  EXPECT_EQ(out.status().code(), absl::StatusCode::kDeadlineExceeded)
      << out.status();
}

TEST(RemoteBackendTest, UnreachableIsUnavailable) {
  RemoteOptions o = Fast("http://127.0.0.1:1/score");
  o.max_retries = 1;
  auto remote = Remote(o);
  EXPECT_EQ(remote->Score(Generate("x")).status().code(),
            absl::StatusCode::kUnavailable);
}

TEST(CachingBackendTest, TransparentAndPersistent) {
  const std::string path = TempPath("cache.jsonl");
  FakeScoringServer server;
  std::vector<ScoreRequest> requests;
  for (int i = 0; i < 6; ++i) requests.push_back(Generate(absl::StrCat("q", i)));
  requests.push_back(Choices("q0"));

  auto plain = Remote(Fast(server.url()));
  std::vector<std::vector<ScoredCandidate>> expected;
  for (const ScoreRequest& r : requests) expected.push_back(*plain->Score(r));

  {
    auto cached = CachingBackend::Open(Remote(Fast(server.url())), path);
    ASSERT_TRUE(cached.ok());
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t i = 0; i < requests.size(); ++i) {
        EXPECT_EQ(*(*cached)->Score(requests[i]), expected[i]);
      }
    }
    EXPECT_EQ((*cached)->misses(), 7);
    EXPECT_EQ((*cached)->hits(), 7);
  }
  const int before = server.requests();
  auto reopened = CachingBackend::Open(Remote(Fast(server.url())), path);
  ASSERT_TRUE(reopened.ok());
  for (size_t i = 0; i < requests.size(); ++i) {
    EXPECT_EQ(*(*reopened)->Score(requests[i]), expected[i]);
  }
  EXPECT_EQ(server.requests(), before);
  EXPECT_EQ((*reopened)->hits(), 7);
}

TEST(CachingBackendTest, BitIdenticalForAwkwardScores) {
  const std::string path = TempPath("mock_cache.jsonl");
  MockBackend mock(5);
  ScoreRequest r = Generate("p");
  r.context = "one two three four five";
  const auto expected = *mock.Score(r);
  {
    auto cached = CachingBackend::Open(std::make_unique<MockBackend>(5), path);
    EXPECT_EQ(*(*cached)->Score(r), expected);
  }
  auto reopened = CachingBackend::Open(std::make_unique<MockBackend>(5), path);
  EXPECT_EQ(*(*reopened)->Score(r), expected);
  EXPECT_EQ((*reopened)->hits(), 1);
}

TEST(CachingBackendTest, KeyIncludesBackendAndFamily) {
  const std::string path = TempPath("keyed.jsonl");
  ScoreRequest r = Generate("p");
  r.context = "a b c";
  {
    auto cached = CachingBackend::Open(std::make_unique<MockBackend>(1), path);
    ASSERT_TRUE((*cached)->Score(r).ok());
  }
  auto other = CachingBackend::Open(std::make_unique<MockBackend>(2), path);
  EXPECT_EQ(*(*other)->Score(r), *MockBackend(2).Score(r));
  EXPECT_EQ((*other)->hits(), 0);
  r.family = "flan-qa";
  ASSERT_TRUE((*other)->Score(r).ok());
  EXPECT_EQ((*other)->hits(), 0);
}

}  // namespace
}  // namespace structinfer
