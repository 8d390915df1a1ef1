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

#include "ranker/engines.h"

#include <algorithm>

#include "ranker/errors.h"

namespace ranker {

std::string_view EngineKindName(EngineKind kind) {
  return kind == EngineKind::kDirect ? "direct" : "iterative";
}

EngineKind ParseEngineKind(std::string_view name) {
  if (name == "direct") return EngineKind::kDirect;
  if (name == "iterative") return EngineKind::kIterative;
  throw RankerError(ErrorCode::kBadConfig,
                    "unknown engine '" + std::string(name) + "'");
}

DirectResult RankDirect(const Policy& policy, const RankingTask& task,
                        DecisionMode mode, Rng& rng,
                        const RewardOptions& reward_options) {
  ValidateCandidatePool(task.candidates);
  auto decision = policy.DecideRanking(task, mode, rng);
  DirectResult result;
  result.reward = RankingReward(decision.raw, task, reward_options);
  result.ranking = NormalizeRanking(decision.raw, task);
  result.raw = std::move(decision.raw);
  result.log_prob = decision.log_prob;
  result.reasoning = std::move(decision.raw_text);
  return result;
}

IterativeResult RankIterative(const Policy& policy, const RankingTask& task,
                              DecisionMode mode, Rng& rng,
                              const IterativeOptions& options) {
  ValidateCandidatePool(task.candidates);
  IterativeResult result;
  result.trace.task_ref = task.id;
  result.trace.query_text = task.query_text;
  result.trace.steps.reserve(task.candidates.size());

  std::vector<Candidate> pool = task.candidates;
  while (!pool.empty()) {
    EpisodeStep step;
    step.pool.reserve(pool.size());
    for (const auto& c : pool) step.pool.push_back(c.id);

    std::size_t index = 0;
    if (pool.size() > 1 || options.query_last_step) {
      auto decision = policy.DecideExclusion(task, pool, mode, rng);
      ++result.policy_calls;
      const auto it =
          std::find_if(pool.begin(), pool.end(), [&](const Candidate& c) {
            return c.id == decision.excluded;
          });
      if (it == pool.end()) {
        throw RankerError(ErrorCode::kUnknownCandidate,
                          policy.name() + " excluded '" + decision.excluded +
                              "', which is not in the pool");
      }
      index = static_cast<std::size_t>(it - pool.begin());
      step.log_prob = decision.log_prob;
      step.value = decision.value_estimate.has_value()
                       ? *decision.value_estimate
                       : policy.EstimateValue(task, pool);
      step.reasoning = std::move(decision.raw_text);
      step.fallback = decision.fallback;
    } else {
      step.value = policy.EstimateValue(task, pool);
    }
    step.excluded = pool[index].id;
    step.reward = ExclusionReward(step.excluded, task);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(index));
    result.trace.steps.push_back(std::move(step));
  }
  result.ranking = Ranking::FromExclusionOrder(result.trace.ExclusionOrder());
  return result;
}

EpisodeSummary EpisodeReturnSummary(const EpisodeTrace& trace) {
  EpisodeSummary summary;
  const int n = static_cast<int>(trace.steps.size());
  for (int k = 0; k < n; ++k) {
    const auto& step = trace.steps[k];
    summary.total_reward += step.reward;
    if (step.reward == 0.0) summary.positive_rank = n - k;  // later = better
  }
  return summary;
}

}  // namespace ranker
