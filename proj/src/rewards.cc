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

#include "ranker/rewards.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "ranker/errors.h"
#include "ranker/metrics.h"

namespace ranker {

Ranking NormalizeRanking(const RawRankingOutput& raw, const RankingTask& task) {
  std::set<CandidateId> known;
  for (const auto& c : task.candidates) known.insert(c.id);
  std::vector<CandidateId> order;
  order.reserve(task.candidates.size());
  std::set<CandidateId> placed;
  for (const auto& id : raw.matched) {
    if (known.count(id) && placed.insert(id).second) order.push_back(id);
  }
  for (const auto& c : task.candidates) {
    if (placed.insert(c.id).second) order.push_back(c.id);
  }
  return Ranking::FromOrder(std::move(order));
}

RewardBreakdown RankingReward(const RawRankingOutput& raw,
                              const RankingTask& task,
                              const RewardOptions& options) {
  RewardBreakdown reward;
  const double overlap = OverlapF1(raw, task);
  reward.r_g = overlap - 1.0;
  if (options.strict_ra_zero && overlap < 1.0) {
    reward.r_a = 0.0;
  } else {
    reward.r_a = ReciprocalRank(NormalizeRanking(raw, task), task.positives);
  }
  reward.r_d = reward.r_a + reward.r_g;
  return reward;
}

double ExclusionReward(const CandidateId& excluded, const RankingTask& task) {
  const bool known =
      std::any_of(task.candidates.begin(), task.candidates.end(),
                  [&](const Candidate& c) { return c.id == excluded; });
  if (!known) {
    throw RankerError(ErrorCode::kUnknownCandidate,
                      "'" + excluded + "' is not a candidate of the task");
  }
  return task.IsPositive(excluded) ? 0.0 : 1.0;
}

double RoutingUtility(double effectiveness, double normalized_cost,
                      const RoutingWeights& weights) {
  if (!(weights.effectiveness >= 0.0) || !(weights.cost >= 0.0) ||
      !(weights.effectiveness + weights.cost > 0.0)) {
    throw RankerError(ErrorCode::kBadWeights,
                      "need alpha, beta >= 0 and alpha + beta > 0");
  }
  return weights.effectiveness * effectiveness -
         weights.cost * normalized_cost;
}

std::vector<double> NormalizeCosts(std::span<const double> costs) {
  std::vector<double> out(costs.size(), 0.0);
  if (costs.empty()) return out;
  const auto [lo, hi] = std::minmax_element(costs.begin(), costs.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    out[i] = (costs[i] - *lo) / range;
  }
  return out;
}

int SelectRoutingPositive(std::span<const double> effectiveness,
                          std::span<const double> costs,
                          const RoutingWeights& weights) {
  if (effectiveness.empty() || effectiveness.size() != costs.size()) {
    throw RankerError(ErrorCode::kShapeMismatch,
                      "effectiveness and cost tables must be equal-length "
                      "and non-empty");
  }
  const auto normalized = NormalizeCosts(costs);
  int best = 0;
  double best_utility = RoutingUtility(effectiveness[0], normalized[0], weights);
  for (std::size_t i = 1; i < effectiveness.size(); ++i) {
    const double utility =
        RoutingUtility(effectiveness[i], normalized[i], weights);
    if (utility > best_utility) {
      best_utility = utility;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace ranker
