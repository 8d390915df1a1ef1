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


#include "ranker/harness.h"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "ranker/errors.h"
#include "ranker/remote.h"
#include "ranker/serialization.h"
#include "ranker/tasks.h"

namespace ranker {

namespace {

struct TaskOutcome {
  std::optional<Ranking> ranking;
  std::optional<EpisodeTrace> trace;
  int calls = 0;
  std::string error;
};

TaskOutcome RunOne(const Policy& policy, const RankingTask& task,
                   std::uint64_t seed, const EvalOptions& options) {
  TaskOutcome outcome;
  Rng rng(seed);
  try {
    if (options.engine == EngineKind::kDirect) {
      auto result =
          RankDirect(policy, task, options.mode, rng, options.reward);
      outcome.ranking = std::move(result.ranking);
      outcome.calls = 1;
    } else {
      auto result =
          RankIterative(policy, task, options.mode, rng, options.iterative);
      outcome.ranking = std::move(result.ranking);
      outcome.calls = result.policy_calls;
      if (options.keep_traces) outcome.trace = std::move(result.trace);
    }
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

std::string Fixed(double value) { return fmt::format("{:.6f}", value); }

}  // namespace

std::uint64_t TaskSeed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EvalResult RunEval(const Policy& policy, std::span<const RankingTask> tasks,
                   const EvalOptions& options) {
  if (tasks.empty()) {
    throw RankerError(ErrorCode::kNoTasks, "evaluation needs at least one task");
  }
  for (const int k : options.ks) {
    if (k < 1) throw RankerError(ErrorCode::kBadK, "k=" + std::to_string(k));
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<TaskOutcome> outcomes(tasks.size());
  const int jobs = std::clamp<int>(options.jobs, 1,
                                   static_cast<int>(tasks.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      outcomes[i] = RunOne(policy, tasks[i], TaskSeed(options.seed, i), options);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          outcomes[i] =
              RunOne(policy, tasks[i], TaskSeed(options.seed, i), options);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  EvalResult result;
  std::vector<RankedInstance> ranked;
  result.rankings.resize(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& outcome = outcomes[i];
    result.policy_calls += outcome.calls;
    if (!outcome.ranking) {
      spdlog::warn("task {} ('{}') failed: {}", i, tasks[i].id, outcome.error);
      result.failures.push_back({i, tasks[i].id, std::move(outcome.error)});
      continue;
    }
    ranked.push_back({*outcome.ranking, tasks[i].positives});
    result.rankings[i] = std::move(*outcome.ranking);
    if (outcome.trace) result.traces.push_back(std::move(*outcome.trace));
  }
  if (!ranked.empty()) result.report = Evaluate(ranked, options.ks);
  result.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return result;
}

std::vector<CompareRow> RunCompare(std::span<const CompareConfig> configs,
                                   std::span<const RankingTask> tasks,
                                   const EvalOptions& options) {
  if (configs.size() < 2) {
    throw RankerError(ErrorCode::kBadConfig,
                      "compare needs at least two configurations");
  }
  std::vector<CompareRow> rows;
  for (const auto& config : configs) {
    if (!config.policy) {
      throw RankerError(ErrorCode::kBadConfig,
                        "configuration '" + config.label + "' has no policy");
    }
    EvalOptions row_options = options;
    row_options.engine = config.engine;
    CompareRow row;
    row.label = config.label;
    row.engine = config.engine;
    row.policy = config.policy->name();
    row.result = RunEval(*config.policy, tasks, row_options);
    rows.push_back(std::move(row));
  }
  const double base = rows.front().result.report.mrr;
  for (auto& row : rows) {
    row.relative_improvement =
        base > 0.0 ? (row.result.report.mrr - base) / base : 0.0;
  }
  return rows;
}

std::string ReportCsv(std::span<const CompareRow> rows,
                      std::span<const int> ks) {
  std::string out = "label,engine,policy,n_tasks,failures,mrr";
  for (const int k : ks) out += fmt::format(",ndcg@{}", k);
  out += ",relative_improvement\n";
  for (const auto& row : rows) {
    const auto& report = row.result.report;
    out += fmt::format("{},{},{},{},{},{}", row.label,
                       EngineKindName(row.engine), row.policy, report.n_tasks,
                       row.result.failures.size(), Fixed(report.mrr));
    for (const int k : ks) {
      const auto it = report.ndcg_at.find(k);
      out += "," + Fixed(it == report.ndcg_at.end() ? 0.0 : it->second);
    }
    out += "," + Fixed(row.relative_improvement) + "\n";
  }
  return out;
}

std::string ReportTable(std::span<const CompareRow> rows,
                        std::span<const int> ks) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"label", "engine", "policy", "tasks",
                                     "failed", "MRR"};
  for (const int k : ks) header.push_back(fmt::format("nDCG@{}", k));
  header.push_back("rel.impr");
  cells.push_back(header);
  for (const auto& row : rows) {
    const auto& report = row.result.report;
    std::vector<std::string> line = {
        row.label,
        std::string(EngineKindName(row.engine)),
        row.policy,
        std::to_string(report.n_tasks),
        std::to_string(row.result.failures.size()),
        fmt::format("{:.4f}", report.mrr)};
    for (const int k : ks) {
      const auto it = report.ndcg_at.find(k);
      line.push_back(
          fmt::format("{:.4f}", it == report.ndcg_at.end() ? 0.0 : it->second));
    }
    line.push_back(fmt::format("{:+.2f}%", 100.0 * row.relative_improvement));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      // Text columns left-aligned, numbers right-aligned.
      if (c < 3) {
        out += fmt::format("{:<{}}", cells[r][c], width[c]);
      } else {
        out += fmt::format("{:>{}}", cells[r][c], width[c]);
      }
      out += c + 1 < cells[r].size() ? "  " : "\n";
    }
    if (r == 0) {
      std::size_t total = 0;
      for (const auto w : width) total += w + 2;
      out += std::string(total - 2, '-') + "\n";
    }
  }
  return out;
}

std::string TimingCsv(std::span<const CompareRow> rows) {
  std::string out = "label,wall_seconds,policy_calls,calls_per_task\n";
  for (const auto& row : rows) {
    const auto tasks = row.result.rankings.size();
    out += fmt::format(
        "{},{:.3f},{},{:.3f}\n", row.label, row.result.wall_seconds,
        row.result.policy_calls,
        tasks == 0 ? 0.0
                   : static_cast<double>(row.result.policy_calls) / tasks);
  }
  return out;
}

std::string FailuresCsv(std::span<const CompareRow> rows) {
  std::string out = "label,task_index,task_id,error\n";
  for (const auto& row : rows) {
    for (const auto& failure : row.result.failures) {
      std::string message = failure.message;
      std::replace(message.begin(), message.end(), '\n', ' ');
      std::replace(message.begin(), message.end(), ',', ';');
      out += fmt::format("{},{},{},{}\n", row.label, failure.index,
                         failure.task_id, message);
    }
  }
  return out;
}

std::string CurveCsv(std::span<const CurvePoint> curve) {
  std::string out = "iteration,mean_reward,mean_mrr,kl,loss\n";
  for (const auto& p : curve) {
    out += fmt::format("{},{},{},{},{}\n", p.iteration, p.mean_reward,
                       p.mean_mrr, p.kl, p.loss);
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ignored;
    std::filesystem::create_directories(path.parent_path(), ignored);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure, "cannot write " + path.string());
  }
}

void WriteReports(std::span<const CompareRow> rows, std::span<const int> ks,
                  const std::filesystem::path& out_dir) {
  WriteTextFile(out_dir / "report.csv", ReportCsv(rows, ks));
  WriteTextFile(out_dir / "report.txt", ReportTable(rows, ks));
  WriteTextFile(out_dir / "timing.csv", TimingCsv(rows));
  WriteTextFile(out_dir / "failures.csv", FailuresCsv(rows));
}

TrainingResult RunTraining(const PolicyParams& initial,
                           std::span<const RankingTask> tasks,
                           const TrainingRunOptions& options,
                           const std::filesystem::path& out_dir) {
  const auto checkpoints = out_dir / "checkpoints";
  std::filesystem::create_directories(checkpoints);
  TrainOptions train_options;
  train_options.resume = options.resume;
  train_options.iterative = options.iterative;
  train_options.on_iteration = [&](const CurvePoint& point,
                                   const TrainerCheckpoint& state) {
    if (options.checkpoint_every > 0 &&
        state.iteration % options.checkpoint_every == 0) {
      SaveCheckpoint(state, checkpoints /
                                fmt::format("iter_{}.json", state.iteration));
    }
    spdlog::debug("iteration {}: mrr {:.4f} loss {:.4f}", point.iteration,
                  point.mean_mrr, point.loss);
    return true;
  };
  auto result =
      options.engine == EngineKind::kDirect
          ? TrainDirect(initial, tasks, options.config, train_options)
          : TrainIterative(initial, tasks, options.config, train_options);
  SaveCheckpoint(result.checkpoint, checkpoints / "final.json");
  WriteTextFile(out_dir / "curve.csv", CurveCsv(result.curve));
  return result;
}

std::shared_ptr<const Policy> MakePolicy(const PolicySettings& settings,
                                         std::span<const RankingTask> tasks) {
  const std::string& spec = settings.spec;
  if (spec == "linear" || spec.rfind("linear:", 0) == 0) {
    if (spec.size() > 7) {
      return std::make_shared<LinearSoftmaxPolicy>(
          LoadPolicyParams(spec.substr(7)));
    }
    if (tasks.empty()) {
      throw RankerError(ErrorCode::kNoTasks,
                        "a zero-initialized linear policy needs a task to "
                        "fix its feature dimension");
    }
    return std::make_shared<LinearSoftmaxPolicy>(
        PolicyParams::Zeros(PairingDimension(tasks.front())));
  }
  if (spec == "remote" || spec == "remote-cot") {
    std::shared_ptr<CompletionClient> client;
    if (!settings.replay.empty()) {
      client = ReplayCompletionClient::FromFile(settings.replay);
    } else {
      HttpClientOptions http = HttpClientOptions::FromEnvironment();
      if (!settings.base_url.empty()) http.base_url = settings.base_url;
      if (!settings.model.empty()) http.model = settings.model;
      client = std::make_shared<HttpCompletionClient>(std::move(http));
    }
    if (!settings.record.empty()) {
      client = std::make_shared<RecordingCompletionClient>(std::move(client),
                                                           settings.record);
    }
    RemotePolicyOptions options;
    options.temperature = settings.temperature;
    options.max_tokens = settings.max_tokens;
    options.max_concurrency = settings.max_concurrency;
    options.thought_top_k = settings.thought_top_k;
    if (spec == "remote-cot") {
      if (settings.thoughts.empty()) {
        throw RankerError(ErrorCode::kBadConfig,
                          "remote-cot needs a trace file to retrieve from");
      }
      const auto traces = ImportTraces(settings.thoughts);
      options.thoughts =
          std::make_shared<ThoughtStore>(ThoughtStore::FromTraces(traces));
    }
    return std::make_shared<RemoteLlmPolicy>(std::move(client),
                                             std::move(options));
  }
  return MakeBuiltinPolicy(spec);
}

SyntheticSuite PlantedSignalSuite(std::uint64_t seed, int train_tasks,
                                  int test_tasks, int n, int d, double noise) {
  ScenarioSpec scenario;
  scenario.kind = ScenarioKind::kSynthetic;
  scenario.candidate_size = n;
  scenario.positive_count = 1;
  scenario.seed = seed;
  SyntheticSuite suite;
  suite.train = GenSynthetic(scenario, train_tasks, d, noise);
  scenario.seed = seed + 1;
  suite.test = GenSynthetic(scenario, test_tasks, d, noise);
  return suite;
}

}  // namespace ranker
