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


// Experiment orchestration shared by the CLI, the Python module and the
// acceptance suite: evaluation, side-by-side comparison, training runs and
// their on-disk outputs.
//
// Output directory layout:
//   report.csv, report.txt   metrics (machine-readable / aligned table)
//   timing.csv               wall-clock and policy calls (not reproducible)
//   failures.csv             tasks whose episode raised, with the error
//   curve.csv                iteration,mean_reward,mean_mrr,kl,loss
//   checkpoints/             iter_<k>.json and final.json
//   traces/                  traces.jsonl

#ifndef RANKER_HARNESS_H_
#define RANKER_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ranker/core.h"
#include "ranker/engines.h"
#include "ranker/metrics.h"
#include "ranker/policy.h"
#include "ranker/rewards.h"
#include "ranker/rl.h"

namespace ranker {

// Per-task seed: SplitMix64 of (seed, index), so results do not depend on
// scheduling or on the number of worker threads.
std::uint64_t TaskSeed(std::uint64_t seed, std::size_t index);

struct EvalOptions {
  EngineKind engine = EngineKind::kIterative;
  std::vector<int> ks = {1, 5, 10};
  std::uint64_t seed = 42;
  int jobs = 1;
  DecisionMode mode = DecisionMode::kGreedy;
  IterativeOptions iterative;
  RewardOptions reward;
  bool keep_traces = false;
};

struct TaskFailure {
  std::size_t index = 0;
  std::string task_id;
  std::string message;
};

struct EvalResult {
  MetricReport report;  // over the tasks that completed
  std::vector<TaskFailure> failures;
  std::vector<Ranking> rankings;  // per task; empty for failed tasks
  std::vector<EpisodeTrace> traces;  // iterative + keep_traces only
  long long policy_calls = 0;
  double wall_seconds = 0.0;
};

// Runs the engine over every task in order. A task whose episode throws is
// recorded in `failures` and left out of the metrics; nothing else is
// dropped. Throws kNoTasks on an empty source and kBadK on bad cutoffs.
EvalResult RunEval(const Policy& policy, std::span<const RankingTask> tasks,
                   const EvalOptions& options);

struct CompareConfig {
  std::string label;
  EngineKind engine = EngineKind::kIterative;
  std::shared_ptr<const Policy> policy;
};

struct CompareRow {
  std::string label;
  EngineKind engine = EngineKind::kIterative;
  std::string policy;
  EvalResult result;
  // (mrr - first row mrr) / first row mrr; 0 when the first row scores 0.
  double relative_improvement = 0.0;
};

// Throws kBadConfig with fewer than two configs.
std::vector<CompareRow> RunCompare(std::span<const CompareConfig> configs,
                                   std::span<const RankingTask> tasks,
                                   const EvalOptions& options);

// Report renderers. Wall-clock is kept out of these so that fixed-seed runs
// are byte-identical; see TimingCsv.
std::string ReportCsv(std::span<const CompareRow> rows,
                      std::span<const int> ks);
std::string ReportTable(std::span<const CompareRow> rows,
                        std::span<const int> ks);
std::string TimingCsv(std::span<const CompareRow> rows);
std::string FailuresCsv(std::span<const CompareRow> rows);
std::string CurveCsv(std::span<const CurvePoint> curve);

// Writes report.csv, report.txt, timing.csv and failures.csv.
void WriteReports(std::span<const CompareRow> rows, std::span<const int> ks,
                  const std::filesystem::path& out_dir);

struct TrainingRunOptions {
  EngineKind engine = EngineKind::kIterative;
  PPOConfig config;
  int checkpoint_every = 50;  // 0 keeps only final.json
  std::optional<TrainerCheckpoint> resume;
  IterativeOptions iterative;
};

// Trains from `initial` (or the resume checkpoint) and writes curve.csv and
// checkpoints/ under out_dir.
TrainingResult RunTraining(const PolicyParams& initial,
                           std::span<const RankingTask> tasks,
                           const TrainingRunOptions& options,
                           const std::filesystem::path& out_dir);

// The planted-signal benchmark: training tasks from `seed`, held-out test
// tasks from `seed + 1`, both with n candidates, one positive, feature
// dimension d.
struct SyntheticSuite {
  std::vector<RankingTask> train;
  std::vector<RankingTask> test;
};
SyntheticSuite PlantedSignalSuite(std::uint64_t seed = 42,
                                  int train_tasks = 256, int test_tasks = 1000,
                                  int n = 10, int d = 8, double noise = 0.1);

// Policy spec accepted by the CLI and the Python module:
//   oracle | anti-oracle | random | lexical
//   linear[:<checkpoint or params file>]   (zero weights without a file)
//   remote | remote-cot                    (remote-cot needs `thoughts`)
struct PolicySettings {
  std::string spec = "random";
  // Remote policies: a transcript to replay instead of calling the API,
  // and/or a transcript to append every exchange to.
  std::string replay;
  std::string record;
  std::string model;     // overrides the client default when non-empty
  std::string base_url;  // overrides RANKER_API_BASE when non-empty
  std::string thoughts;  // trace file feeding remote-cot retrieval
  int thought_top_k = 1;
  double temperature = 0.9;
  int max_tokens = 1024;
  int max_concurrency = 4;
};

// `tasks` fixes the feature dimension of a zero-initialized linear policy.
// Throws kBadConfig on unknown specs and propagates file errors.
std::shared_ptr<const Policy> MakePolicy(const PolicySettings& settings,
                                         std::span<const RankingTask> tasks);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace ranker

#endif  // RANKER_HARNESS_H_
