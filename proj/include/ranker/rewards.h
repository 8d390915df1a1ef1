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

#ifndef RANKER_REWARDS_H_
#define RANKER_REWARDS_H_

#include <span>
#include <vector>

#include "ranker/core.h"

namespace ranker {

struct RewardOptions {
  // When set, any output that is not a perfect permutation earns r_a = 0
  // instead of the reciprocal rank of its normalized ranking.
  bool strict_ra_zero = false;
};

// Completes a possibly invalid one-shot output into a ranking: matched ids
// keep their emitted order and omitted candidates follow in task order.
Ranking NormalizeRanking(const RawRankingOutput& raw, const RankingTask& task);

// r_g = overlap F1 - 1, r_a = reciprocal rank of the normalized ranking,
// r_d = r_a + r_g. Malformed outputs are penalized, never rejected.
RewardBreakdown RankingReward(const RawRankingOutput& raw,
                              const RankingTask& task,
                              const RewardOptions& options = {});

// 1 when the excluded candidate is a negative, 0 when it is a positive.
// Throws kUnknownCandidate for ids outside the task.
double ExclusionReward(const CandidateId& excluded, const RankingTask& task);

// alpha * effectiveness - beta * normalized_cost. Throws kBadWeights unless
// alpha, beta >= 0 and alpha + beta > 0.
double RoutingUtility(double effectiveness, double normalized_cost,
                      const RoutingWeights& weights);

// Min-max normalization to [0, 1]; all zeros when every cost is equal.
std::vector<double> NormalizeCosts(std::span<const double> costs);

// Index of the highest-utility candidate after cost normalization; ties go to
// the lowest index. Throws kShapeMismatch on empty or unequal inputs.
int SelectRoutingPositive(std::span<const double> effectiveness,
                          std::span<const double> costs,
                          const RoutingWeights& weights);

}  // namespace ranker

#endif  // RANKER_REWARDS_H_
