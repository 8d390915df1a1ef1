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


#include "ranker/tasks.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include "ranker/rewards.h"
#include "ranker/serialization.h"
#include "ranker/text.h"

namespace ranker {

namespace {

using nlohmann::json;

std::vector<double> Gaussian(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

std::vector<double> Jitter(const std::vector<double>& base, double noise,
                           Rng& rng) {
  auto v = Gaussian(static_cast<int>(base.size()), rng);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = base[i] + noise * v[i];
  return v;
}

std::string WithLine(int line, const std::string& message) {
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

std::vector<RankingTask> GenSynthetic(const ScenarioSpec& scenario, int count,
                                      int feature_dim, double noise) {
  if (count < 1 || feature_dim < 1 || !(noise >= 0.0) || !std::isfinite(noise)) {
    throw RankerError(ErrorCode::kBadScenario,
                      "gen_synthetic: need count >= 1, feature_dim >= 1, "
                      "finite noise >= 0");
  }
  if (scenario.candidate_size < 2 || scenario.positive_count < 1 ||
      scenario.positive_count >= scenario.candidate_size ||
      scenario.routing_weights.has_value() !=
          (scenario.kind == ScenarioKind::kRouting)) {
    throw RankerError(ErrorCode::kBadScenario,
                      "gen_synthetic: invalid scenario shape");
  }
  Rng rng(scenario.seed);
  std::vector<RankingTask> tasks;
  tasks.reserve(count);
  for (int i = 0; i < count; ++i) {
    RankingTask task;
    task.id = "t" + std::to_string(i);
    task.query_text = "query " + std::to_string(i);
    task.scenario = scenario;
    const auto latent = Gaussian(feature_dim, rng);
    std::vector<std::pair<std::vector<double>, bool>> drawn;
    for (int p = 0; p < scenario.positive_count; ++p) {
      drawn.emplace_back(Jitter(latent, noise, rng), true);
    }
    for (int k = scenario.positive_count; k < scenario.candidate_size; ++k) {
      drawn.emplace_back(Gaussian(feature_dim, rng), false);
    }
    task.query_features = Jitter(latent, noise, rng);
    std::shuffle(drawn.begin(), drawn.end(), rng);
    for (std::size_t k = 0; k < drawn.size(); ++k) {
      Candidate c;
      c.id = "c" + std::to_string(k);
      c.text = "candidate " + c.id;
      c.features = std::move(drawn[k].first);
      if (drawn[k].second) task.positives.insert(c.id);
      task.candidates.push_back(std::move(c));
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<RankingTask> BuildRoutingTasks(std::span<const RoutingQuery> queries,
                                           const RoutingWeights& weights,
                                           int candidate_size,
                                           bool synthetic_features) {
  std::vector<RankingTask> tasks;
  tasks.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& query = queries[q];
    if (static_cast<int>(query.candidates.size()) != candidate_size) {
      throw RankerError(ErrorCode::kShapeMismatch,
                        "routing query " + std::to_string(q) + " has " +
                            std::to_string(query.candidates.size()) +
                            " candidates, expected " +
                            std::to_string(candidate_size));
    }
    std::vector<double> effs, costs;
    for (const auto& c : query.candidates) {
      if (!(c.effectiveness >= 0.0 && c.effectiveness <= 1.0) ||
          !(c.cost >= 0.0) || !std::isfinite(c.cost)) {
        throw RankerError(ErrorCode::kBadConfig,
                          "routing query " + std::to_string(q) + ", model '" +
                              c.name +
                              "': need effectiveness in [0, 1], cost >= 0");
      }
      effs.push_back(c.effectiveness);
      costs.push_back(c.cost);
    }
    const int best = SelectRoutingPositive(effs, costs, weights);
    const auto normalized = NormalizeCosts(costs);

    RankingTask task;
    task.id = query.id.empty() ? "r" + std::to_string(q) : query.id;
    task.query_text = query.query_text;
    task.scenario.kind = ScenarioKind::kRouting;
    task.scenario.candidate_size = candidate_size;
    task.scenario.positive_count = 1;
    task.scenario.routing_weights = weights;
    if (synthetic_features) {
      task.query_features = {weights.effectiveness, weights.cost};
    }
    for (std::size_t k = 0; k < query.candidates.size(); ++k) {
      Candidate c;
      c.id = query.candidates[k].name;
      c.text = query.candidates[k].description;
      if (synthetic_features) c.features = {effs[k], normalized[k]};
      task.candidates.push_back(std::move(c));
    }
    task.positives.insert(task.candidates[best].id);
    tasks.push_back(ValidateTask(task));
  }
  return tasks;
}

std::vector<RoutingQuery> GenRoutingQueries(int count, std::uint64_t seed) {
  struct Profile {
    const char* name;
    const char* description;
    double quality;
    double price;  // per thousand tokens
  };
  static constexpr std::array<Profile, 10> kProfiles = {{
      {"Mistral-7b", "small open instruction-tuned model", 0.45, 0.2},
      {"Mixtral-8x7b", "sparse mixture-of-experts open model", 0.58, 0.6},
      {"Llama-3-8b", "small open chat model", 0.50, 0.2},
      {"Llama-3-70b", "large open chat model", 0.70, 0.9},
      {"Yi-34b", "mid-size bilingual chat model", 0.62, 0.8},
      {"Qwen-2-72b", "large multilingual chat model", 0.72, 0.9},
      {"Claude-Instant", "fast hosted assistant", 0.60, 0.8},
      {"Claude-2", "hosted assistant with long context", 0.74, 8.0},
      {"GPT-3.5", "fast hosted chat model", 0.63, 1.0},
      {"GPT-4", "strongest hosted chat model", 0.85, 30.0},
  }};
  static constexpr std::array<const char*, 6> kTopics = {
      "algebra word problem",     "python debugging question",
      "history trivia",           "summarize a news article",
      "commonsense reasoning",    "translate a paragraph"};
  Rng rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.1);
  std::uniform_int_distribution<int> length(50, 800);
  std::uniform_int_distribution<std::size_t> topic(0, kTopics.size() - 1);
  std::vector<RoutingQuery> queries;
  for (int i = 0; i < count; ++i) {
    RoutingQuery query;
    query.id = "r" + std::to_string(i);
    query.query_text = std::string(kTopics[topic(rng)]) + " #" +
                       std::to_string(i);
    const int tokens = length(rng);
    for (const auto& profile : kProfiles) {
      RoutingCandidate c;
      c.name = profile.name;
      c.description = profile.description;
      c.effectiveness = std::clamp(profile.quality + jitter(rng), 0.0, 1.0);
      c.cost = profile.price * tokens / 1000.0;
      query.candidates.push_back(std::move(c));
    }
    queries.push_back(std::move(query));
  }
  return queries;
}

TaskFileError::TaskFileError(ErrorCode code, int line,
                             std::optional<ErrorCode> cause,
                             const std::string& message)
    : RankerError(code, message), line_(line), cause_(cause) {}

RankingTask ParseTaskLine(const std::string& line, int line_number) {
  json object;
  try {
    object = json::parse(line);
  } catch (const json::exception& e) {
    throw TaskFileError(ErrorCode::kParseError, line_number, std::nullopt,
                        WithLine(line_number, e.what()));
  }
  if (!object.is_object()) {
    throw TaskFileError(ErrorCode::kParseError, line_number, std::nullopt,
                        WithLine(line_number, "expected a JSON object"));
  }
  RankingTask task;
  try {
    task = object.get<RankingTask>();
  } catch (const json::exception& e) {
    throw TaskFileError(ErrorCode::kValidationError, line_number, std::nullopt,
                        WithLine(line_number, e.what()));
  } catch (const RankerError& e) {
    throw TaskFileError(ErrorCode::kValidationError, line_number, e.code(),
                        WithLine(line_number, e.what()));
  }
  try {
    ValidateTask(task);
  } catch (const RankerError& e) {
    throw TaskFileError(ErrorCode::kValidationError, line_number, e.code(),
                        WithLine(line_number, e.what()));
  }
  return task;
}

std::vector<RankingTask> LoadTasks(std::istream& in) {
  std::vector<RankingTask> tasks;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    tasks.push_back(ParseTaskLine(line, line_number));
  }
  return tasks;
}

std::vector<RankingTask> LoadTasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw RankerError(ErrorCode::kIOFailure, "cannot read " + path.string());
  }
  return LoadTasks(in);
}

std::string TaskLine(const RankingTask& task) { return json(task).dump(); }

void SaveTasks(std::span<const RankingTask> tasks,
               const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ignored;
    std::filesystem::create_directories(path.parent_path(), ignored);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure, "cannot write " + path.string());
  }
  for (const auto& task : tasks) out << TaskLine(task) << '\n';
}

}  // namespace ranker
