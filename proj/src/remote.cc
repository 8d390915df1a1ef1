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

#include "ranker/remote.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"
#include "ranker/errors.h"

namespace ranker {

namespace {

using nlohmann::json;

std::string GetEnv(const char* name) {
  const char* value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

bool Retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpClientOptions HttpClientOptions::FromEnvironment() {
  return FromEnvironment(HttpClientOptions());
}

HttpClientOptions HttpClientOptions::FromEnvironment(
    HttpClientOptions defaults) {
  if (auto base = GetEnv("RANKER_API_BASE"); !base.empty()) {
    defaults.base_url = std::move(base);
  }
  if (auto key = GetEnv("RANKER_API_KEY"); !key.empty()) {
    defaults.api_key = std::move(key);
  }
  return defaults;
}

HttpCompletionClient::HttpCompletionClient(HttpClientOptions options)
    : options_(std::move(options)) {
  std::string url = options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  const auto path_start =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = url;
  } else {
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
  }
  if (scheme_host_port_.empty()) {
    throw RankerError(ErrorCode::kBadConfig, "empty completion base URL");
  }
}

std::string HttpCompletionClient::RequestBody(
    const CompletionRequest& request) const {
  json body = {
      {"model", options_.model},
      {"messages",
       json::array({{{"role", "system"}, {"content", request.prompt.system}},
                    {{"role", "user"}, {"content", request.prompt.user}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
  };
  return body.dump();
}

std::string HttpCompletionClient::Complete(const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }
  const std::string body = RequestBody(request);
  const std::string path = path_prefix_ + "/chat/completions";

  std::string last_error;
  int backoff_ms = options_.initial_backoff_ms;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
    auto result = client.Post(path, headers, body, "application/json");
    if (!result) {
      last_error = "connection error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_error = "HTTP " + std::to_string(result->status);
      if (Retryable(result->status)) continue;
      break;
    }
    try {
      const auto reply = json::parse(result->body);
      return reply.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const json::exception& e) {
      throw RankerError(ErrorCode::kRemoteFailure,
                        std::string("malformed completion reply: ") + e.what());
    }
  }
  throw RankerError(ErrorCode::kRemoteFailure,
                    options_.base_url + ": " + last_error);
}

ReplayCompletionClient::ReplayCompletionClient(std::vector<Record> records) {
  for (auto& record : records) {
    if (record.prompt) {
      keyed_.emplace(std::make_pair(record.prompt->system, record.prompt->user),
                     std::move(record.response));
    } else {
      sequential_.push_back(std::move(record.response));
    }
  }
}

std::unique_ptr<ReplayCompletionClient> ReplayCompletionClient::FromFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw RankerError(ErrorCode::kIOFailure,
                      "cannot open transcript " + path.string());
  }
  std::vector<Record> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto object = json::parse(line);
      Record record;
      record.response = object.at("response").get<std::string>();
      if (object.contains("user")) {
        record.prompt = ChatPrompt{object.value("system", std::string()),
                                   object.at("user").get<std::string>()};
      }
      records.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw RankerError(ErrorCode::kParseError,
                        path.string() + ":" + std::to_string(line_number) +
                            ": " + e.what());
    }
  }
  return std::make_unique<ReplayCompletionClient>(std::move(records));
}

std::string ReplayCompletionClient::Complete(const CompletionRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = keyed_.find({request.prompt.system, request.prompt.user});
  if (it != keyed_.end()) {
    std::string response = std::move(it->second);
    keyed_.erase(it);
    return response;
  }
  if (!sequential_.empty()) {
    std::string response = std::move(sequential_.front());
    sequential_.pop_front();
    return response;
  }
  throw RankerError(ErrorCode::kRemoteFailure,
                    "transcript has no response for this prompt");
}

RecordingCompletionClient::RecordingCompletionClient(
    std::shared_ptr<CompletionClient> inner, std::filesystem::path path)
    : inner_(std::move(inner)), path_(std::move(path)) {}

std::string RecordingCompletionClient::Complete(
    const CompletionRequest& request) {
  std::string response = inner_->Complete(request);
  const json record = {{"system", request.prompt.system},
                       {"user", request.prompt.user},
                       {"response", response}};
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure,
                      "cannot append to transcript " + path_.string());
  }
  out << record.dump() << '\n';
  return response;
}

RemoteLlmPolicy::RemoteLlmPolicy(std::shared_ptr<CompletionClient> client,
                                 RemotePolicyOptions options)
    : client_(std::move(client)), options_(std::move(options)) {
  if (!client_) {
    throw RankerError(ErrorCode::kBadConfig, "remote policy needs a client");
  }
  if (options_.max_concurrency < 1) options_.max_concurrency = 1;
}

std::string RemoteLlmPolicy::Preamble(const RankingTask& task) const {
  if (!options_.thoughts) return {};
  const auto thoughts =
      options_.thoughts->Retrieve(task.query_text, options_.thought_top_k);
  return RenderThoughtPreamble(thoughts);
}

ChatPrompt RemoteLlmPolicy::ExclusionPrompt(
    const RankingTask& task, std::span<const Candidate> pool) const {
  return RenderPrompt(
      DefaultTemplate(PromptStyle::kIterative, task.scenario.kind), task, pool,
      Preamble(task));
}

ChatPrompt RemoteLlmPolicy::RankingPrompt(const RankingTask& task) const {
  return RenderPrompt(DefaultTemplate(PromptStyle::kDirect, task.scenario.kind),
                      task, task.candidates, Preamble(task));
}

std::string RemoteLlmPolicy::Call(const ChatPrompt& prompt) const {
  {
    std::unique_lock<std::mutex> lock(slots_mutex_);
    slots_cv_.wait(lock,
                   [&] { return in_flight_ < options_.max_concurrency; });
    ++in_flight_;
  }
  struct Release {
    const RemoteLlmPolicy* self;
    ~Release() {
      {
        std::lock_guard<std::mutex> lock(self->slots_mutex_);
        --self->in_flight_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};
  return client_->Complete(
      {prompt, options_.temperature, options_.max_tokens});
}

ExclusionDecision RemoteLlmPolicy::Exclude(const RankingTask& task,
                                           std::span<const Candidate> pool,
                                           DecisionMode, Rng& rng) const {
  const std::string response = Call(ExclusionPrompt(task, pool));
  ExclusionDecision decision;
  decision.raw_text = ExtractThink(response).value_or(response);
  if (auto match = ParseExclusion(response, pool, options_.match_threshold)) {
    decision.excluded = std::move(*match);
    return decision;
  }
  const auto index =
      std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
  decision.excluded = pool[index].id;
  decision.log_prob = -std::log(static_cast<double>(pool.size()));
  decision.fallback = true;
  spdlog::warn("task '{}': answer matched no pool member, excluding '{}' at "
               "random",
               task.id, decision.excluded);
  return decision;
}

RankingDecision RemoteLlmPolicy::Rank(const RankingTask& task, DecisionMode,
                                      Rng&) const {
  const std::string response = Call(RankingPrompt(task));
  RankingDecision decision;
  decision.raw = ParseRanking(response, task, options_.match_threshold);
  decision.raw_text = ExtractThink(response).value_or(response);
  return decision;
}

}  // namespace ranker
