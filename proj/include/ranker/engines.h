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

// The two decoding regimes.
//
// Direct ranking asks the policy once for a full order and scores it with the
// composite ranking reward. Iterative ranking removes one candidate per step
// until the pool is empty; the step-k exclusion (1-based) gets rank
// n - k + 1 and the best-first order is the reversed exclusion sequence.

#ifndef RANKER_ENGINES_H_
#define RANKER_ENGINES_H_

#include <optional>
#include <string>

#include "ranker/core.h"
#include "ranker/policy.h"
#include "ranker/rewards.h"

namespace ranker {

enum class EngineKind { kDirect, kIterative };

std::string_view EngineKindName(EngineKind kind);
// Throws kBadConfig for names other than "direct" and "iterative".
EngineKind ParseEngineKind(std::string_view name);

struct DirectResult {
  Ranking ranking;  // normalized: omitted candidates appended in task order
  RawRankingOutput raw;
  RewardBreakdown reward;
  double log_prob = 0.0;
  std::optional<std::string> reasoning;
};

DirectResult RankDirect(const Policy& policy, const RankingTask& task,
                        DecisionMode mode, Rng& rng,
                        const RewardOptions& reward_options = {});

struct IterativeOptions {
  // By default the last remaining candidate is excluded without asking the
  // policy (log_prob 0). When set, the policy is queried for it as well.
  bool query_last_step = false;
};

struct IterativeResult {
  Ranking ranking;
  EpisodeTrace trace;
  int policy_calls = 0;
};

// Throws on an invalid candidate pool, and kUnknownCandidate when a policy
// returns an id outside the offered pool.
IterativeResult RankIterative(const Policy& policy, const RankingTask& task,
                              DecisionMode mode, Rng& rng,
                              const IterativeOptions& options = {});

struct EpisodeSummary {
  double total_reward = 0.0;
  // Rank of the best-ranked positive (reward-0 exclusion); 0 if none.
  int positive_rank = 0;
};

EpisodeSummary EpisodeReturnSummary(const EpisodeTrace& trace);

}  // namespace ranker

#endif  // RANKER_ENGINES_H_
