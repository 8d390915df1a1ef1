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


// Task sources: seeded synthetic generators, routing-table labeling and the
// line-delimited task file.
//
// Task file format: one JSON object per line,
//
//   {"id": "q1",                                  (optional)
//    "query_text": "...",
//    "query_features": [0.1, ...],                (optional)
//    "candidates": [{"id": "a", "text": "...", "features": [...]}, ...],
//    "positives": ["a"],
//    "scenario": {"kind": "passage", "candidate_size": 5,
//                 "positive_count": 1,
//                 "routing_weights": {"effectiveness": 0.5, "cost": 0.5},
//                 "seed": 7}}                     (weights: routing only)
//
// Blank lines are skipped. `text` and `features` are optional per candidate.

#ifndef RANKER_TASKS_H_
#define RANKER_TASKS_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ranker/core.h"
#include "ranker/errors.h"

namespace ranker {

// Planted-signal tasks. Each task draws a latent vector z ~ N(0, I_d); every
// positive gets z + noise * N(0, I_d), every negative an independent
// N(0, I_d) draw, and the query z + noise * N(0, I_d). Candidates are
// shuffled before ids c0, c1, ... are assigned. Deterministic given
// scenario.seed. Throws kBadScenario.
std::vector<RankingTask> GenSynthetic(const ScenarioSpec& scenario, int count,
                                      int feature_dim, double noise);

struct RoutingCandidate {
  std::string name;
  std::string description;
  double effectiveness = 0.0;  // in [0, 1]
  double cost = 0.0;           // >= 0, any unit
};

struct RoutingQuery {
  std::string id;
  std::string query_text;
  std::vector<RoutingCandidate> candidates;
};

// Labels the routing-utility arg-max (lowest index on ties) as the single
// positive. Candidate id = model name, text = description. With
// `synthetic_features` each candidate carries [effectiveness,
// normalized cost] and the query carries [alpha, beta], so a linear policy
// can express the utility; otherwise tasks are text-only. Throws
// kShapeMismatch (wrong candidate count), kBadConfig (values out of range)
// and kBadWeights.
std::vector<RankingTask> BuildRoutingTasks(std::span<const RoutingQuery> queries,
                                           const RoutingWeights& weights,
                                           int candidate_size = 10,
                                           bool synthetic_features = false);

// Seeded stand-in for a routing benchmark: ten model profiles with
// per-query effectiveness jitter and length-dependent cost.
std::vector<RoutingQuery> GenRoutingQueries(int count, std::uint64_t seed);

// Error raised by LoadTasks/ParseTaskLine. code() is kParseError or
// kValidationError; cause() holds the underlying validation code.
class TaskFileError : public RankerError {
 public:
  TaskFileError(ErrorCode code, int line, std::optional<ErrorCode> cause,
                const std::string& message);

  int line() const { return line_; }
  std::optional<ErrorCode> cause() const { return cause_; }

 private:
  int line_;
  std::optional<ErrorCode> cause_;
};

RankingTask ParseTaskLine(const std::string& line, int line_number);
std::vector<RankingTask> LoadTasks(std::istream& in);
// Throws kIOFailure when the file cannot be opened.
std::vector<RankingTask> LoadTasks(const std::filesystem::path& path);

std::string TaskLine(const RankingTask& task);
void SaveTasks(std::span<const RankingTask> tasks,
               const std::filesystem::path& path);

}  // namespace ranker

#endif  // RANKER_TASKS_H_
