/*
 * Copyright 2026 The Ranker Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Remote LLM policy and the completion clients behind it.
//
// The HTTP client speaks the OpenAI-compatible chat-completions protocol:
//
//   POST {base_url}/chat/completions
//   Authorization: Bearer $RANKER_API_KEY
//   {"model": ..., "messages": [{"role": "system", ...},
//                               {"role": "user", ...}],
//    "temperature": 0.9, "max_tokens": 1024}
//
// and reads choices[0].message.content from the reply. Transcripts are
// line-delimited JSON objects {"system", "user", "response"}; a replay client
// answers a prompt from the record whose system and user text match, and
// records without prompt fields are served in file order.

#ifndef RANKER_REMOTE_H_
#define RANKER_REMOTE_H_

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ranker/parse.h"
#include "ranker/policy.h"
#include "ranker/prompts.h"
#include "ranker/thoughts.h"

namespace ranker {

struct CompletionRequest {
  ChatPrompt prompt;
  double temperature = 0.9;
  int max_tokens = 1024;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  // Returns the completion text; throws kRemoteFailure.
  virtual std::string Complete(const CompletionRequest& request) = 0;
};

struct HttpClientOptions {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "default";
  std::string api_key;
  int max_retries = 3;
  int initial_backoff_ms = 500;
  int timeout_seconds = 120;

  // base_url from RANKER_API_BASE and api_key from RANKER_API_KEY when set.
  static HttpClientOptions FromEnvironment();
  static HttpClientOptions FromEnvironment(HttpClientOptions defaults);
};

// Retries connection errors, 429 and 5xx with exponential backoff; other
// statuses fail immediately.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(HttpClientOptions options);
  std::string Complete(const CompletionRequest& request) override;

  // Body sent for a request; exposed for tests.
  std::string RequestBody(const CompletionRequest& request) const;

 private:
  HttpClientOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

class ReplayCompletionClient : public CompletionClient {
 public:
  struct Record {
    std::optional<ChatPrompt> prompt;
    std::string response;
  };

  explicit ReplayCompletionClient(std::vector<Record> records);
  // Throws kIOFailure / kParseError.
  static std::unique_ptr<ReplayCompletionClient> FromFile(
      const std::filesystem::path& path);

  std::string Complete(const CompletionRequest& request) override;

 private:
  std::mutex mutex_;
  std::multimap<std::pair<std::string, std::string>, std::string> keyed_;
  std::deque<std::string> sequential_;
};

// Forwards to another client and appends every exchange to a transcript.
class RecordingCompletionClient : public CompletionClient {
 public:
  RecordingCompletionClient(std::shared_ptr<CompletionClient> inner,
                            std::filesystem::path path);
  std::string Complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<CompletionClient> inner_;
  std::filesystem::path path_;
  std::mutex mutex_;
};

struct RemotePolicyOptions {
  double temperature = 0.9;
  int max_tokens = 1024;
  double match_threshold = kDefaultMatchThreshold;
  // Upper bound on requests in flight across threads sharing the policy.
  int max_concurrency = 4;
  // Thought-template mode: prepend the top_k most similar stored reasonings.
  std::shared_ptr<const ThoughtStore> thoughts;
  int thought_top_k = 1;
};

// Inference-only policy backed by a completion endpoint. Exclusion answers
// that name no pool member are replaced by a uniform draw and logged.
class RemoteLlmPolicy : public Policy {
 public:
  RemoteLlmPolicy(std::shared_ptr<CompletionClient> client,
                  RemotePolicyOptions options = {});

  std::string name() const override {
    return options_.thoughts ? "remote-cot" : "remote";
  }

  ChatPrompt ExclusionPrompt(const RankingTask& task,
                             std::span<const Candidate> pool) const;
  ChatPrompt RankingPrompt(const RankingTask& task) const;

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;

 private:
  std::string Call(const ChatPrompt& prompt) const;
  std::string Preamble(const RankingTask& task) const;

  std::shared_ptr<CompletionClient> client_;
  RemotePolicyOptions options_;
  mutable std::mutex slots_mutex_;
  mutable std::condition_variable slots_cv_;
  mutable int in_flight_ = 0;
};

}  // namespace ranker

#endif  // RANKER_REMOTE_H_
