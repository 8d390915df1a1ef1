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

#include "gtest/gtest.h"
#include "ranker/metrics.h"
#include "test_util.h"

namespace ranker {
namespace {

using testing_util::MakeTask;

TEST(RankingReward, PerfectOutput) {
  const auto task = MakeTask(4, {"c2"});
  const auto reward = RankingReward({{"c2", "c1", "c3", "c4"}, 0, 0}, task);
  EXPECT_EQ(reward.r_a, 1.0);
  EXPECT_EQ(reward.r_g, 0.0);
  EXPECT_EQ(reward.r_d, 1.0);
}

TEST(RankingReward, PositiveAtRankFourOfTwenty) {
  const auto task = MakeTask(20, {"c4"});
  RawRankingOutput raw;
  for (int i = 1; i <= 20; ++i) raw.matched.push_back("c" + std::to_string(i));
  EXPECT_DOUBLE_EQ(RankingReward(raw, task).r_d, 0.25);
}

TEST(RankingReward, HallucinatedLine) {
  const auto task = MakeTask(4, {"c3"});
  const RawRankingOutput raw{{"c3", "c1"}, 1, 0};
  const auto reward = RankingReward(raw, task);
  EXPECT_DOUBLE_EQ(reward.r_g, 4.0 / 7.0 - 1.0);
  EXPECT_DOUBLE_EQ(reward.r_a, 1.0);
  EXPECT_EQ(reward.r_d, reward.r_a + reward.r_g);
}

TEST(RankingReward, StrictSwitchZeroesImperfectOutputs) {
  const auto task = MakeTask(4, {"c3"});
  const RawRankingOutput raw{{"c3", "c1"}, 1, 0};
  const auto reward = RankingReward(raw, task, {.strict_ra_zero = true});
  EXPECT_EQ(reward.r_a, 0.0);
  EXPECT_EQ(reward.r_d, reward.r_g);
}

TEST(NormalizeRanking, OmittedCandidatesFollowInTaskOrder) {
  const auto task = MakeTask(5, {"c1"});
  const auto ranking = NormalizeRanking({{"c4", "c2"}, 0, 0}, task);
  EXPECT_EQ(ranking.order(),
            (std::vector<CandidateId>{"c4", "c2", "c1", "c3", "c5"}));
}

TEST(ExclusionReward, NegativeEarnsOne) {
  const auto task = MakeTask(3, {"c1"});
  EXPECT_EQ(ExclusionReward("c2", task), 1.0);
  EXPECT_EQ(ExclusionReward("c1", task), 0.0);
  EXPECT_RANKER_ERROR(ExclusionReward("c9", task),
                      ErrorCode::kUnknownCandidate);
}

TEST(RoutingUtility, WorkedPair) {
  const RoutingWeights balance{0.5, 0.5};
  EXPECT_NEAR(RoutingUtility(0.9, 0.9, balance), 0.0, 1e-15);
  EXPECT_NEAR(RoutingUtility(0.7, 0.1, balance), 0.3, 1e-15);
  EXPECT_RANKER_ERROR(RoutingUtility(0.5, 0.5, {0.0, 0.0}),
                      ErrorCode::kBadWeights);
  EXPECT_RANKER_ERROR(RoutingUtility(0.5, 0.5, {-1.0, 1.0}),
                      ErrorCode::kBadWeights);
}

TEST(SelectRoutingPositive, PerformanceFirstAndTies) {
  const std::vector<double> effs = {0.3, 0.9, 0.5};
  const std::vector<double> costs = {1.0, 100.0, 3.0};
  EXPECT_EQ(SelectRoutingPositive(effs, costs, {1.0, 0.0}), 1);
  EXPECT_EQ(SelectRoutingPositive(effs, costs, {0.0, 1.0}), 0);
  const std::vector<double> same = {0.5, 0.5, 0.5};
  EXPECT_EQ(SelectRoutingPositive(same, same, {0.5, 0.5}), 0);
  EXPECT_RANKER_ERROR(SelectRoutingPositive(
                          effs, std::span<const double>(same).subspan(0, 2),
                          {1, 0}),
                      ErrorCode::kShapeMismatch);
}

TEST(SelectRoutingPositive, InvariantToCostShift) {
  const std::vector<double> effs = {0.8, 0.6, 0.7, 0.4};
  std::vector<double> costs = {5.0, 1.0, 2.0, 0.5};
  const int before = SelectRoutingPositive(effs, costs, {0.5, 0.5});
  for (auto& c : costs) c += 17.0;
  EXPECT_EQ(SelectRoutingPositive(effs, costs, {0.5, 0.5}), before);
}

TEST(NormalizeCosts, MinMax) {
  const std::vector<double> costs = {2.0, 4.0, 3.0};
  EXPECT_EQ(NormalizeCosts(costs), (std::vector<double>{0.0, 1.0, 0.5}));
  const std::vector<double> flat = {3.0, 3.0};
  EXPECT_EQ(NormalizeCosts(flat), (std::vector<double>{0.0, 0.0}));
}

}  // namespace
}  // namespace ranker
