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


#ifndef RANKER_TESTS_TEST_UTIL_H_
#define RANKER_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "ranker/core.h"
#include "ranker/errors.h"

namespace ranker {
namespace testing_util {

// Text-only task with ids c1..cn and the given positives.
inline RankingTask MakeTask(int n, const std::vector<std::string>& positives,
                            ScenarioKind kind = ScenarioKind::kSynthetic) {
  RankingTask task;
  task.id = "task";
  task.query_text = "which candidate";
  for (int i = 1; i <= n; ++i) {
    task.candidates.push_back(
        {"c" + std::to_string(i), "candidate number " + std::to_string(i), {}});
  }
  task.positives = IdSet(positives.begin(), positives.end());
  task.scenario.kind = kind;
  task.scenario.candidate_size = n;
  task.scenario.positive_count = static_cast<int>(positives.size());
  if (kind == ScenarioKind::kRouting) task.scenario.routing_weights = RoutingWeights{};
  return task;
}

inline RankingTask PassageTask(int n, int positive) {
  RankingTask task;
  task.id = "passage";
  task.query_text = "when was the eiffel tower built";
  for (int i = 1; i <= n; ++i) {
    task.candidates.push_back({"passage " + std::to_string(i),
                               "text of passage " + std::to_string(i), {}});
  }
  task.positives = {"passage " + std::to_string(positive)};
  task.scenario.kind = ScenarioKind::kPassage;
  task.scenario.candidate_size = n;
  task.scenario.positive_count = 1;
  return task;
}

}  // namespace testing_util
}  // namespace ranker

// Asserts that `statement` throws RankerError carrying `expected_code`.
#define EXPECT_RANKER_ERROR(statement, expected_code)                  \
  do {                                                                 \
    try {                                                              \
      statement;                                                       \
      ADD_FAILURE() << "expected " << ::ranker::ErrorCodeName(expected_code); \
    } catch (const ::ranker::RankerError& e) {                         \
      EXPECT_EQ(e.code(), expected_code) << e.what();                  \
    }                                                                  \
  } while (false)

#endif  // RANKER_TESTS_TEST_UTIL_H_
