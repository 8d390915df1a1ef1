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

#include <cmath>

#include "gtest/gtest.h"
#include "ranker/metrics.h"
#include "ranker/policy.h"
#include "test_util.h"

namespace ranker {
namespace {

using testing_util::MakeTask;

// Emits a fixed raw output and a fixed exclusion sequence.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(std::vector<CandidateId> script)
      : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }

 protected:
  ExclusionDecision Exclude(const RankingTask&, std::span<const Candidate> pool,
                            DecisionMode, Rng&) const override {
    for (const auto& id : script_) {
      for (const auto& c : pool) {
        if (c.id == id) return {id, 0.0, {}, {}, false};
      }
    }
    return {"not-in-pool", 0.0, {}, {}, false};
  }
  RankingDecision Rank(const RankingTask&, DecisionMode, Rng&) const override {
    return {{script_, 0, 0}, 0.0, {}};
  }

 private:
  std::vector<CandidateId> script_;
};

TEST(RankIterative, ReversedExclusionOrder) {
  const auto task = MakeTask(3, {"c2"});
  ScriptedPolicy policy({"c3", "c1", "c2"});
  Rng rng(1);
  const auto result = RankIterative(policy, task, DecisionMode::kGreedy, rng);
  EXPECT_EQ(result.ranking.order(),
            (std::vector<CandidateId>{"c2", "c1", "c3"}));
  EXPECT_EQ(result.ranking.RankOf("c3"), 3);
  EXPECT_EQ(result.policy_calls, 2);
  EXPECT_TRUE(IsValidTrace(result.trace, task.candidates));
  EXPECT_EQ(result.trace.steps.back().log_prob, 0.0);
}

TEST(RankIterative, QueryLastStepFlag) {
  const auto task = MakeTask(4, {"c1"});
  RandomPolicy policy;
  Rng rng(1);
  EXPECT_EQ(RankIterative(policy, task, DecisionMode::kSample, rng, {true})
                .policy_calls,
            4);
  EXPECT_EQ(RankIterative(policy, task, DecisionMode::kSample, rng, {false})
                .policy_calls,
            3);
}

TEST(RankIterative, SingleCandidate) {
  RankingTask task;
  task.candidates = {{"only", "", {}}};
  task.positives = {"only"};
  RandomPolicy policy;
  Rng rng(1);
  const auto result = RankIterative(policy, task, DecisionMode::kSample, rng);
  EXPECT_EQ(result.policy_calls, 0);
  EXPECT_EQ(result.trace.steps.size(), 1u);
  EXPECT_EQ(result.ranking.RankOf("only"), 1);
}

TEST(RankIterative, OracleRewardsAndSummary) {
  const auto task = MakeTask(5, {"c4"});
  OraclePolicy oracle;
  AntiOraclePolicy anti;
  Rng rng(3);
  const auto best = RankIterative(oracle, task, DecisionMode::kSample, rng);
  std::vector<double> rewards;
  for (const auto& s : best.trace.steps) rewards.push_back(s.reward);
  EXPECT_EQ(rewards, (std::vector<double>{1, 1, 1, 1, 0}));
  EXPECT_EQ(ReciprocalRank(best.ranking, task.positives), 1.0);
  EXPECT_EQ(EpisodeReturnSummary(best.trace).positive_rank, 1);
  EXPECT_EQ(EpisodeReturnSummary(best.trace).total_reward, 4.0);

  const auto worst = RankIterative(anti, task, DecisionMode::kSample, rng);
  EXPECT_EQ(EpisodeReturnSummary(worst.trace).positive_rank, 5);
  EXPECT_DOUBLE_EQ(ReciprocalRank(worst.ranking, task.positives), 0.2);
}

TEST(RankIterative, ForeignExclusionIsAnError) {
  const auto task = MakeTask(3, {"c1"});
  ScriptedPolicy policy({"zz"});
  Rng rng(1);
  EXPECT_RANKER_ERROR(RankIterative(policy, task, DecisionMode::kGreedy, rng),
                      ErrorCode::kUnknownCandidate);
}

TEST(RankDirect, OracleIsPerfect) {
  const auto task = MakeTask(6, {"c5"});
  OraclePolicy oracle;
  Rng rng(1);
  const auto result = RankDirect(oracle, task, DecisionMode::kGreedy, rng);
  EXPECT_EQ(result.reward.r_d, 1.0);
  EXPECT_EQ(result.ranking.RankOf("c5"), 1);
}

TEST(RankDirect, HalfListIsPenalized) {
  const auto task = MakeTask(4, {"c1"});
  ScriptedPolicy policy({"c2", "c1"});
  Rng rng(1);
  const auto result = RankDirect(policy, task, DecisionMode::kGreedy, rng);
  // P = 1, R = 1/2, F1 = 2/3.
  EXPECT_DOUBLE_EQ(result.reward.r_g, 2.0 / 3.0 - 1.0);
  EXPECT_DOUBLE_EQ(result.reward.r_a, 0.5);
  EXPECT_TRUE(result.ranking.IsPermutationOf(task.candidates));
}

TEST(RankDirect, ZeroLinearPolicyMatchesUniformBaseline) {
  // Greedy ties keep task order, so randomize the positive's position.
  const int n = 20;
  const LinearSoftmaxPolicy policy(PolicyParams::Zeros(2));
  Rng rng(17);
  std::uniform_int_distribution<int> position(1, n);
  double sum = 0.0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const auto task = MakeTask(n, {"c" + std::to_string(position(rng))});
    const auto result = RankDirect(policy, task, DecisionMode::kSample, rng);
    sum += ReciprocalRank(result.ranking, task.positives);
  }
  double harmonic = 0.0;
  for (int k = 1; k <= n; ++k) harmonic += 1.0 / k;
  EXPECT_NEAR(sum / trials, harmonic / n, 0.01);
}

}  // namespace
}  // namespace ranker
