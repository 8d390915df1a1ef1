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

#include "gtest/gtest.h"
#include "ranker/errors.h"
#include "ranker/text.h"
#include "test_util.h"

namespace ranker {
namespace {

using testing_util::MakeTask;

TEST(ValidateTask, AcceptsWellFormedTask) {
  const auto task = MakeTask(20, {"c5"});
  EXPECT_EQ(&ValidateTask(task), &task);
}

TEST(ValidateTask, RejectsEmptyPositives) {
  auto task = MakeTask(5, {"c1"});
  task.positives.clear();
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kEmptyPositives);
}

TEST(ValidateTask, RejectsDuplicateIds) {
  auto task = MakeTask(5, {"c1"});
  task.candidates[1].id = "c7";
  task.candidates[3].id = "c7";
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kDuplicateCandidateId);
}

TEST(ValidateTask, RejectsForeignPositive) {
  auto task = MakeTask(5, {"c1"});
  task.positives = {"zz"};
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kPositiveNotInCandidates);
}

TEST(ValidateTask, RejectsSizeMismatch) {
  auto task = MakeTask(5, {"c1"});
  task.scenario.candidate_size = 6;
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kSizeMismatch);
}

TEST(ValidateTask, RejectsAllPositiveScenario) {
  auto task = MakeTask(3, {"c1", "c2", "c3"});
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kBadScenario);
}

TEST(ValidateTask, RejectsMixedFeatureDimensions) {
  auto task = MakeTask(3, {"c1"});
  task.candidates[0].features = {1.0, 2.0};
  task.candidates[1].features = {1.0, 2.0};
  task.candidates[2].features = {1.0};
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kFeatureDimensionMismatch);
}

TEST(ValidateTask, RoutingWeightsOnlyForRouting) {
  auto task = MakeTask(10, {"c1"}, ScenarioKind::kRouting);
  EXPECT_NO_THROW(ValidateTask(task));
  task.scenario.routing_weights.reset();
  EXPECT_RANKER_ERROR(ValidateTask(task), ErrorCode::kBadScenario);
}

TEST(NamedScenario, MatchesDocumentedShapes) {
  EXPECT_EQ(NamedScenario("movie").candidate_size, 20);
  EXPECT_EQ(NamedScenario("game").positive_count, 1);
  EXPECT_EQ(NamedScenario("balance").candidate_size, 10);
  ASSERT_TRUE(NamedScenario("cost").routing_weights.has_value());
  EXPECT_DOUBLE_EQ(NamedScenario("cost").routing_weights->cost, 0.8);
  EXPECT_EQ(NamedScenario("passage7").candidate_size, 7);
  EXPECT_RANKER_ERROR(NamedScenario("nope"), ErrorCode::kBadScenario);
}

TEST(Ranking, ExclusionOrderIsReversed) {
  const std::vector<CandidateId> excluded = {"c3", "c1", "c2"};
  const auto ranking = Ranking::FromExclusionOrder(excluded);
  EXPECT_EQ(ranking.RankOf("c3"), 3);
  EXPECT_EQ(ranking.RankOf("c1"), 2);
  EXPECT_EQ(ranking.RankOf("c2"), 1);
  EXPECT_EQ(ranking.order(), (std::vector<CandidateId>{"c2", "c1", "c3"}));
}

TEST(Ranking, RankOfIsInverseOfOrder) {
  const auto ranking = Ranking::FromOrder({"b", "a", "c"});
  for (int i = 0; i < ranking.size(); ++i) {
    EXPECT_EQ(ranking.RankOf(ranking.order()[i]), i + 1);
  }
  EXPECT_RANKER_ERROR(ranking.RankOf("zz"), ErrorCode::kUnknownCandidate);
  EXPECT_RANKER_ERROR(Ranking::FromOrder({"a", "a"}),
                      ErrorCode::kDuplicateCandidateId);
}

TEST(Ranking, PermutationCheck) {
  const auto task = MakeTask(3, {"c1"});
  EXPECT_TRUE(Ranking::FromOrder({"c2", "c3", "c1"})
                  .IsPermutationOf(task.candidates));
  EXPECT_FALSE(Ranking::FromOrder({"c2", "c3"}).IsPermutationOf(task.candidates));
  EXPECT_FALSE(Ranking::FromOrder({"c2", "c3", "c9"})
                   .IsPermutationOf(task.candidates));
}

TEST(EpisodeTrace, ValidityChecks) {
  const auto task = MakeTask(3, {"c1"});
  EpisodeTrace trace;
  trace.steps = {{{"c1", "c2", "c3"}, "c2", 1, 0, 0, {}, false},
                 {{"c1", "c3"}, "c3", 1, 0, 0, {}, false},
                 {{"c1"}, "c1", 0, 0, 0, {}, false}};
  EXPECT_TRUE(IsValidTrace(trace, task.candidates));
  EXPECT_EQ(trace.ExclusionOrder(),
            (std::vector<CandidateId>{"c2", "c3", "c1"}));
  trace.steps[1].pool = {"c1", "c2"};
  EXPECT_FALSE(IsValidTrace(trace, task.candidates));
}

TEST(PPOConfig, Validation) {
  PPOConfig config;
  EXPECT_NO_THROW(ValidateConfig(config));
  config.clip_epsilon = 1.0;
  EXPECT_RANKER_ERROR(ValidateConfig(config), ErrorCode::kBadConfig);
  config = PPOConfig();
  config.gamma = 1.5;
  EXPECT_RANKER_ERROR(ValidateConfig(config), ErrorCode::kBadConfig);
  config = PPOConfig();
  config.minibatch_size = 0;
  EXPECT_RANKER_ERROR(ValidateConfig(config), ErrorCode::kBadConfig);
  config = PPOConfig();
  config.actor_lr = 0.0;
  config.critic_lr = 0.0;
  EXPECT_NO_THROW(ValidateConfig(config));
}

TEST(Text, TokenizeAndF1) {
  EXPECT_EQ(Tokenize("Star Trek: The Wrath of Khan!"),
            (std::vector<std::string>{"star", "trek", "the", "wrath", "of",
                                      "khan"}));
  EXPECT_EQ(NormalizeText("  Passage   3 "), "passage 3");
  EXPECT_DOUBLE_EQ(TokenF1("a b c", "a b c"), 1.0);
  EXPECT_DOUBLE_EQ(TokenF1("a b", "c d"), 0.0);
  EXPECT_DOUBLE_EQ(TokenF1("a b b", "b"), 0.5);
  EXPECT_DOUBLE_EQ(TokenF1("", ""), 0.0);
}

TEST(RankerError, CarriesCodeAndName) {
  const RankerError error(ErrorCode::kNoMatch, "detail");
  EXPECT_EQ(error.code(), ErrorCode::kNoMatch);
  EXPECT_NE(std::string(error.what()).find("NoMatch"), std::string::npos);
}

}  // namespace
}  // namespace ranker
