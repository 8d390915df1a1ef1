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

#include "ranker/core.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ranker/errors.h"

namespace ranker {

namespace {

struct NamedShape {
  std::string_view name;
  ScenarioKind kind;
  int candidate_size;
  std::optional<RoutingWeights> weights;
};

// Routing weights follow the performance-first / balance / cost-first
// settings used by graph-based routers.
const NamedShape kShapes[] = {
    {"movie", ScenarioKind::kRecommendation, 20, std::nullopt},
    {"music", ScenarioKind::kRecommendation, 20, std::nullopt},
    {"game", ScenarioKind::kRecommendation, 20, std::nullopt},
    {"performance", ScenarioKind::kRouting, 10, RoutingWeights{1.0, 0.0}},
    {"balance", ScenarioKind::kRouting, 10, RoutingWeights{0.5, 0.5}},
    {"cost", ScenarioKind::kRouting, 10, RoutingWeights{0.2, 0.8}},
    {"passage5", ScenarioKind::kPassage, 5, std::nullopt},
    {"passage7", ScenarioKind::kPassage, 7, std::nullopt},
    {"passage9", ScenarioKind::kPassage, 9, std::nullopt},
    {"synthetic", ScenarioKind::kSynthetic, 10, std::nullopt},
};

}  // namespace

std::string_view ScenarioKindName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kRecommendation:
      return "recommendation";
    case ScenarioKind::kRouting:
      return "routing";
    case ScenarioKind::kPassage:
      return "passage";
    case ScenarioKind::kSynthetic:
      return "synthetic";
  }
  return "synthetic";
}

ScenarioKind ParseScenarioKind(std::string_view name) {
  for (auto kind : {ScenarioKind::kRecommendation, ScenarioKind::kRouting,
                    ScenarioKind::kPassage, ScenarioKind::kSynthetic}) {
    if (ScenarioKindName(kind) == name) return kind;
  }
  throw RankerError(ErrorCode::kBadScenario,
                    "unknown scenario kind '" + std::string(name) + "'");
}

ScenarioSpec NamedScenario(std::string_view name, std::uint64_t seed) {
  for (const auto& shape : kShapes) {
    if (shape.name == name) {
      ScenarioSpec spec;
      spec.kind = shape.kind;
      spec.candidate_size = shape.candidate_size;
      spec.positive_count = 1;
      spec.routing_weights = shape.weights;
      spec.seed = seed;
      return spec;
    }
  }
  throw RankerError(ErrorCode::kBadScenario,
                    "unknown scenario '" + std::string(name) + "'");
}

std::vector<std::string> NamedScenarioNames() {
  std::vector<std::string> names;
  for (const auto& shape : kShapes) names.emplace_back(shape.name);
  return names;
}

void ValidateCandidatePool(std::span<const Candidate> candidates) {
  if (candidates.empty()) {
    throw RankerError(ErrorCode::kSizeMismatch, "candidates: empty");
  }
  std::unordered_set<std::string_view> seen;
  const std::size_t dim = candidates.front().features.size();
  for (const auto& candidate : candidates) {
    if (candidate.id.empty()) {
      throw RankerError(ErrorCode::kEmptyCandidateId, "candidates.id: empty");
    }
    if (!seen.insert(candidate.id).second) {
      throw RankerError(ErrorCode::kDuplicateCandidateId,
                        "candidates.id: '" + candidate.id + "' repeated");
    }
    if (candidate.features.size() != dim) {
      throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                        "candidates.features: '" + candidate.id + "' has " +
                            std::to_string(candidate.features.size()) +
                            " entries, expected " + std::to_string(dim));
    }
  }
}

const RankingTask& ValidateTask(const RankingTask& task) {
  const auto& scenario = task.scenario;
  if (scenario.candidate_size < 1 || scenario.positive_count < 1 ||
      scenario.positive_count >= scenario.candidate_size) {
    throw RankerError(ErrorCode::kBadScenario,
                      "scenario: need 1 <= positive_count < candidate_size");
  }
  if (scenario.routing_weights.has_value() !=
      (scenario.kind == ScenarioKind::kRouting)) {
    throw RankerError(ErrorCode::kBadScenario,
                      "scenario.routing_weights: present iff kind = routing");
  }
  ValidateCandidatePool(task.candidates);
  if (static_cast<int>(task.candidates.size()) != scenario.candidate_size) {
    throw RankerError(ErrorCode::kSizeMismatch,
                      "candidates: " + std::to_string(task.candidates.size()) +
                          " given, scenario.candidate_size is " +
                          std::to_string(scenario.candidate_size));
  }
  if (task.positives.empty()) {
    throw RankerError(ErrorCode::kEmptyPositives, "positives: empty");
  }
  for (const auto& positive : task.positives) {
    const bool found =
        std::any_of(task.candidates.begin(), task.candidates.end(),
                    [&](const Candidate& c) { return c.id == positive; });
    if (!found) {
      throw RankerError(ErrorCode::kPositiveNotInCandidates,
                        "positives: '" + positive + "' is not a candidate");
    }
  }
  if (static_cast<int>(task.positives.size()) != scenario.positive_count) {
    throw RankerError(ErrorCode::kSizeMismatch,
                      "positives: " + std::to_string(task.positives.size()) +
                          " given, scenario.positive_count is " +
                          std::to_string(scenario.positive_count));
  }
  if (!task.query_features.empty() &&
      !task.candidates.front().features.empty() &&
      task.query_features.size() != task.candidates.front().features.size()) {
    throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                      "query_features: dimension differs from candidates");
  }
  return task;
}

Ranking Ranking::FromOrder(std::vector<CandidateId> best_first) {
  Ranking ranking;
  for (std::size_t i = 0; i < best_first.size(); ++i) {
    if (best_first[i].empty()) {
      throw RankerError(ErrorCode::kEmptyCandidateId, "order: empty id");
    }
    if (!ranking.rank_of_.emplace(best_first[i], static_cast<int>(i) + 1)
             .second) {
      throw RankerError(ErrorCode::kDuplicateCandidateId,
                        "order: '" + best_first[i] + "' repeated");
    }
  }
  ranking.order_ = std::move(best_first);
  return ranking;
}

Ranking Ranking::FromExclusionOrder(std::span<const CandidateId> excluded) {
  return FromOrder(std::vector<CandidateId>(excluded.rbegin(), excluded.rend()));
}

int Ranking::RankOf(const CandidateId& id) const {
  auto it = rank_of_.find(id);
  if (it == rank_of_.end()) {
    throw RankerError(ErrorCode::kUnknownCandidate,
                      "'" + id + "' is not ranked");
  }
  return it->second;
}

bool Ranking::IsPermutationOf(std::span<const Candidate> candidates) const {
  if (candidates.size() != order_.size()) return false;
  return std::all_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) { return rank_of_.count(c.id); });
}

std::vector<CandidateId> EpisodeTrace::ExclusionOrder() const {
  std::vector<CandidateId> order;
  order.reserve(steps.size());
  for (const auto& step : steps) order.push_back(step.excluded);
  return order;
}

bool IsValidTrace(const EpisodeTrace& trace,
                  std::span<const Candidate> candidates) {
  if (trace.steps.size() != candidates.size() || candidates.empty()) {
    return false;
  }
  std::set<CandidateId> pool;
  for (const auto& c : candidates) pool.insert(c.id);
  if (pool.size() != candidates.size()) return false;
  for (const auto& step : trace.steps) {
    const std::set<CandidateId> step_pool(step.pool.begin(), step.pool.end());
    if (step_pool != pool || step.pool.size() != pool.size()) return false;
    if (!pool.erase(step.excluded)) return false;
  }
  return pool.empty() && trace.steps.back().pool.size() == 1;
}

void ValidateConfig(const PPOConfig& config) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw RankerError(ErrorCode::kBadConfig, what);
  };
  require(config.clip_epsilon > 0.0 && config.clip_epsilon < 1.0,
          "clip_epsilon must lie in (0, 1)");
  require(config.gamma >= 0.0 && config.gamma <= 1.0,
          "gamma must lie in [0, 1]");
  require(config.lam >= 0.0 && config.lam <= 1.0, "lam must lie in [0, 1]");
  require(config.kl_coeff >= 0.0 && std::isfinite(config.kl_coeff),
          "kl_coeff must be non-negative");
  // Zero step sizes are allowed so that a run can be checked for inertness.
  require(config.actor_lr >= 0.0 && config.critic_lr >= 0.0,
          "learning rates must be non-negative");
  require(config.ppo_epochs > 0 && config.minibatch_size > 0 &&
              config.episodes_per_iteration > 0 && config.iterations > 0,
          "epoch, minibatch, episode and iteration counts must be positive");
}

}  // namespace ranker
