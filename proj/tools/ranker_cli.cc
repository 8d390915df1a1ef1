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


// ranker: generate tasks, train, evaluate and compare rankers.
//
//   ranker gen --scenario movie --count 100 --out runs/tasks
//   ranker train --tasks runs/tasks/tasks.jsonl --out runs/train
//   ranker eval --tasks ... --policy linear:runs/train/checkpoints/final.json
//   ranker compare --tasks ... --run iterative:oracle --run direct:random
//   ranker rank --tasks ... --index 3 --policy lexical
//   ranker export-traces --tasks ... --policy remote --replay chat.jsonl
//
// Global flags: --seed, --config <json>, --out <dir>, --jobs, --verbose.
// Config sections: {"ppo": {...}, "engine": "...", "policy": {...},
// "tasks": {...}, "ks": [...]}. Any flag given on the command line wins.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ranker/core.h"
#include "ranker/engines.h"
#include "ranker/errors.h"
#include "ranker/harness.h"
#include "ranker/metrics.h"
#include "ranker/rl.h"
#include "ranker/serialization.h"
#include "ranker/tasks.h"

namespace {

using nlohmann::json;
using ranker::ErrorCode;
using ranker::RankerError;

struct Settings {
  // Global.
  std::uint64_t seed = 42;
  std::string config_path;
  std::string out = "out";
  int jobs = 1;
  bool verbose = false;

  // Task source.
  std::string tasks_path;
  std::string suite;  // "planted": the built-in training benchmark
  std::string scenario = "synthetic";
  int count = 100;
  int dim = 8;
  double noise = 0.1;
  bool routing_features = false;

  // Engine / policy / evaluation.
  std::string engine = "iterative";
  ranker::PolicySettings policy;
  std::vector<int> ks = {1, 5, 10};
  bool query_last_step = false;
  bool sample = false;
  bool strict_ra_zero = false;
  std::vector<std::string> runs;
  int index = 0;
  bool keep_traces = false;

  // Training.
  ranker::PPOConfig ppo;
  int checkpoint_every = 50;
  std::string resume;
  bool ppo_seed_from_config = false;
};

// Flags that were given explicitly; config values only fill the others.
class Overrides {
 public:
  void Track(const std::string& key, CLI::Option* option) {
    options_[key].push_back(option);
  }
  bool Given(const std::string& key) const {
    const auto it = options_.find(key);
    if (it == options_.end()) return false;
    for (const auto* option : it->second) {
      if (option->count() > 0) return true;
    }
    return false;
  }

 private:
  std::map<std::string, std::vector<CLI::Option*>> options_;
};

template <typename T>
void FromConfig(const json& section, const char* key, const Overrides& flags,
                const std::string& flag, T& out) {
  if (flags.Given(flag)) return;
  if (auto it = section.find(key); it != section.end() && !it->is_null()) {
    it->get_to(out);
  }
}

void ApplyConfig(const json& config, const Overrides& flags, Settings& s) {
  FromConfig(config, "seed", flags, "seed", s.seed);
  FromConfig(config, "out", flags, "out", s.out);
  FromConfig(config, "jobs", flags, "jobs", s.jobs);
  FromConfig(config, "engine", flags, "engine", s.engine);
  FromConfig(config, "ks", flags, "k", s.ks);
  FromConfig(config, "query_last_step", flags, "query-last-step",
             s.query_last_step);
  FromConfig(config, "strict_ra_zero", flags, "strict-ra-zero",
             s.strict_ra_zero);
  FromConfig(config, "runs", flags, "run", s.runs);
  if (auto it = config.find("ppo"); it != config.end()) {
    // PPO keys not set by a flag come from the config; the flag-backed keys
    // are re-applied afterwards by ApplyPpoFlags.
    ranker::MergePpoConfig(*it, s.ppo);
    s.ppo_seed_from_config = it->contains("seed");
  }
  if (auto it = config.find("policy"); it != config.end()) {
    const json& p = *it;
    FromConfig(p, "name", flags, "policy", s.policy.spec);
    FromConfig(p, "replay", flags, "replay", s.policy.replay);
    FromConfig(p, "record", flags, "record", s.policy.record);
    FromConfig(p, "model", flags, "model", s.policy.model);
    FromConfig(p, "base_url", flags, "base-url", s.policy.base_url);
    FromConfig(p, "thoughts", flags, "thoughts", s.policy.thoughts);
    FromConfig(p, "thought_top_k", flags, "thought-top-k",
               s.policy.thought_top_k);
    FromConfig(p, "temperature", flags, "temperature", s.policy.temperature);
    FromConfig(p, "max_tokens", flags, "max-tokens", s.policy.max_tokens);
    FromConfig(p, "max_concurrency", flags, "max-concurrency",
               s.policy.max_concurrency);
  }
  if (auto it = config.find("tasks"); it != config.end()) {
    const json& t = *it;
    FromConfig(t, "path", flags, "tasks", s.tasks_path);
    FromConfig(t, "suite", flags, "suite", s.suite);
    FromConfig(t, "scenario", flags, "scenario", s.scenario);
    FromConfig(t, "count", flags, "count", s.count);
    FromConfig(t, "dim", flags, "dim", s.dim);
    FromConfig(t, "noise", flags, "noise", s.noise);
  }
}

json ReadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RankerError(ErrorCode::kIOFailure, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw RankerError(ErrorCode::kParseError, path + ": " + e.what());
  }
}

std::vector<ranker::RankingTask> LoadSource(const Settings& s) {
  if (!s.tasks_path.empty()) return ranker::LoadTasks(s.tasks_path);
  if (s.suite == "planted") return ranker::PlantedSignalSuite(s.seed).train;
  if (s.suite == "planted-test") return ranker::PlantedSignalSuite(s.seed).test;
  if (!s.suite.empty()) {
    throw RankerError(ErrorCode::kBadConfig, "unknown suite '" + s.suite + "'");
  }
  throw RankerError(ErrorCode::kNoTasks,
                    "no task source: pass --tasks <file> or --suite planted");
}

ranker::EvalOptions MakeEvalOptions(const Settings& s) {
  ranker::EvalOptions options;
  options.engine = ranker::ParseEngineKind(s.engine);
  options.ks = s.ks;
  options.seed = s.seed;
  options.jobs = s.jobs;
  options.mode =
      s.sample ? ranker::DecisionMode::kSample : ranker::DecisionMode::kGreedy;
  options.iterative.query_last_step = s.query_last_step;
  options.reward.strict_ra_zero = s.strict_ra_zero;
  options.keep_traces = s.keep_traces;
  return options;
}

std::filesystem::path OutDir(const Settings& s) {
  std::filesystem::create_directories(s.out);
  return s.out;
}

int CmdGen(const Settings& s) {
  std::vector<ranker::RankingTask> tasks;
  if (s.scenario == "performance" || s.scenario == "balance" ||
      s.scenario == "cost") {
    const auto spec = ranker::NamedScenario(s.scenario, s.seed);
    const auto queries = ranker::GenRoutingQueries(s.count, s.seed);
    tasks = ranker::BuildRoutingTasks(queries, *spec.routing_weights,
                                      spec.candidate_size, s.routing_features);
  } else {
    const auto spec = ranker::NamedScenario(s.scenario, s.seed);
    tasks = ranker::GenSynthetic(spec, s.count, s.dim, s.noise);
  }
  const auto path = OutDir(s) / "tasks.jsonl";
  ranker::SaveTasks(tasks, path);
  std::cout << "wrote " << tasks.size() << " tasks to " << path.string()
            << "\n";
  return 0;
}

int CmdTrain(const Settings& s) {
  const auto tasks = LoadSource(s);
  ranker::TrainingRunOptions options;
  options.engine = ranker::ParseEngineKind(s.engine);
  options.config = s.ppo;
  options.checkpoint_every = s.checkpoint_every;
  options.iterative.query_last_step = s.query_last_step;
  ranker::PolicyParams initial;
  if (!s.resume.empty()) {
    options.resume = ranker::LoadCheckpoint(s.resume);
    options.engine = options.resume->engine;
    initial = options.resume->params;
  } else if (s.policy.spec.rfind("linear:", 0) == 0) {
    initial = ranker::LoadPolicyParams(s.policy.spec.substr(7));
  } else {
    initial = ranker::PolicyParams::Zeros(ranker::PairingDimension(tasks[0]));
  }
  const auto out = OutDir(s);
  const auto result = ranker::RunTraining(initial, tasks, options, out);

  // Greedy evaluation of the trained policy on the training source.
  const ranker::LinearSoftmaxPolicy policy(result.params);
  auto eval_options = MakeEvalOptions(s);
  eval_options.engine = options.engine;
  std::vector<ranker::CompareRow> rows(1);
  rows[0].label = "trained";
  rows[0].engine = options.engine;
  rows[0].policy = policy.name();
  rows[0].result = ranker::RunEval(policy, tasks, eval_options);
  ranker::WriteReports(rows, s.ks, out);
  std::cout << ranker::ReportTable(rows, s.ks);
  if (!result.curve.empty()) {
    std::cout << fmt::format("iterations {}..{}; last rollout MRR {:.4f}\n",
                             result.curve.front().iteration,
                             result.curve.back().iteration,
                             result.curve.back().mean_mrr);
  }
  std::cout << "checkpoint: " << (out / "checkpoints" / "final.json").string()
            << "\n";
  return 0;
}

int CmdEval(Settings s) {
  const auto tasks = LoadSource(s);
  const auto policy = ranker::MakePolicy(s.policy, tasks);
  const auto out = OutDir(s);
  auto options = MakeEvalOptions(s);
  std::vector<ranker::CompareRow> rows(1);
  rows[0].label = std::string(s.engine) + ":" + s.policy.spec;
  rows[0].engine = options.engine;
  rows[0].policy = policy->name();
  rows[0].result = ranker::RunEval(*policy, tasks, options);
  ranker::WriteReports(rows, s.ks, out);
  if (s.keep_traces && !rows[0].result.traces.empty()) {
    ranker::ExportTraces(rows[0].result.traces, out / "traces" / "traces.jsonl");
  }
  std::cout << ranker::ReportTable(rows, s.ks);
  return rows[0].result.failures.empty() ? 0 : 3;
}

int CmdCompare(const Settings& s) {
  if (s.runs.size() < 2) {
    throw RankerError(ErrorCode::kBadConfig,
                      "compare needs at least two --run engine:policy");
  }
  const auto tasks = LoadSource(s);
  std::vector<ranker::CompareConfig> configs;
  for (const auto& run : s.runs) {
    const auto colon = run.find(':');
    if (colon == std::string::npos) {
      throw RankerError(ErrorCode::kBadConfig,
                        "--run expects engine:policy, got '" + run + "'");
    }
    ranker::PolicySettings policy = s.policy;
    policy.spec = run.substr(colon + 1);
    configs.push_back({run, ranker::ParseEngineKind(run.substr(0, colon)),
                       ranker::MakePolicy(policy, tasks)});
  }
  const auto rows = ranker::RunCompare(configs, tasks, MakeEvalOptions(s));
  ranker::WriteReports(rows, s.ks, OutDir(s));
  std::cout << ranker::ReportTable(rows, s.ks);
  return 0;
}

int CmdRank(const Settings& s) {
  const auto tasks = LoadSource(s);
  if (s.index < 0 || s.index >= static_cast<int>(tasks.size())) {
    throw RankerError(ErrorCode::kBadConfig,
                      "--index out of range (source has " +
                          std::to_string(tasks.size()) + " tasks)");
  }
  const auto& task = tasks[s.index];
  const auto policy = ranker::MakePolicy(s.policy, tasks);
  const auto options = MakeEvalOptions(s);
  ranker::Rng rng(ranker::TaskSeed(s.seed, s.index));
  std::cout << "query: " << task.query_text << "\n";
  ranker::Ranking ranking;
  if (options.engine == ranker::EngineKind::kDirect) {
    const auto result =
        ranker::RankDirect(*policy, task, options.mode, rng, options.reward);
    ranking = result.ranking;
    std::cout << fmt::format("reward: r_a={:.4f} r_g={:.4f} r_d={:.4f}\n",
                             result.reward.r_a, result.reward.r_g,
                             result.reward.r_d);
  } else {
    const auto result =
        ranker::RankIterative(*policy, task, options.mode, rng,
                              options.iterative);
    ranking = result.ranking;
    const int n = static_cast<int>(task.candidates.size());
    for (std::size_t k = 0; k < result.trace.steps.size(); ++k) {
      const auto& step = result.trace.steps[k];
      std::cout << fmt::format(
          "step {:>2}: exclude {} -> rank {} (reward {}{})\n", k + 1,
          step.excluded, n - static_cast<int>(k), step.reward,
          step.fallback ? ", fallback" : "");
      if (step.reasoning) std::cout << "         " << *step.reasoning << "\n";
    }
  }
  std::cout << "ranking:\n";
  for (int r = 0; r < ranking.size(); ++r) {
    const auto& id = ranking.order()[r];
    std::cout << fmt::format("{:>3}. {}{}\n", r + 1, id,
                             task.IsPositive(id) ? "  *" : "");
  }
  std::cout << fmt::format("reciprocal rank: {:.4f}\n",
                           ranker::ReciprocalRank(ranking, task.positives));
  return 0;
}

int CmdExportTraces(Settings s) {
  s.keep_traces = true;
  s.engine = "iterative";
  const auto tasks = LoadSource(s);
  const auto policy = ranker::MakePolicy(s.policy, tasks);
  const auto result = ranker::RunEval(*policy, tasks, MakeEvalOptions(s));
  const auto path = OutDir(s) / "traces" / "traces.jsonl";
  ranker::ExportTraces(result.traces, path);
  std::cout << "wrote " << result.traces.size() << " traces to "
            << path.string() << "\n";
  return result.failures.empty() ? 0 : 3;
}

void AddPpoFlags(CLI::App* app, Settings& s, Overrides& flags) {
  flags.Track("iterations", app->add_option("--iterations", s.ppo.iterations,
                                            "PPO iterations"));
  flags.Track("episodes", app->add_option("--episodes",
                                          s.ppo.episodes_per_iteration,
                                          "episodes per iteration"));
  flags.Track("gamma", app->add_option("--gamma", s.ppo.gamma, "discount"));
  flags.Track("lam", app->add_option("--lam", s.ppo.lam, "GAE lambda"));
  flags.Track("actor-lr",
              app->add_option("--actor-lr", s.ppo.actor_lr, "policy step"));
  flags.Track("critic-lr",
              app->add_option("--critic-lr", s.ppo.critic_lr, "value step"));
  flags.Track("kl-coeff",
              app->add_option("--kl-coeff", s.ppo.kl_coeff, "KL weight"));
  flags.Track("clip", app->add_option("--clip", s.ppo.clip_epsilon,
                                      "PPO clip epsilon"));
  flags.Track("ppo-epochs",
              app->add_option("--ppo-epochs", s.ppo.ppo_epochs, "epochs"));
  flags.Track("minibatch", app->add_option("--minibatch",
                                           s.ppo.minibatch_size,
                                           "minibatch size"));
  app->add_option("--checkpoint-every", s.checkpoint_every,
                  "checkpoint period in iterations (0: final only)");
  app->add_option("--resume", s.resume, "resume from a checkpoint");
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  Overrides flags;
  CLI::App app{"Iterative-exclusion and direct rankers: tasks, training, "
               "evaluation."};
  app.require_subcommand(1);
  app.fallthrough();
  flags.Track("seed", app.add_option("--seed", s.seed, "random seed")
                          ->capture_default_str());
  app.add_option("--config", s.config_path, "JSON config file");
  flags.Track("out", app.add_option("--out", s.out, "output directory")
                         ->capture_default_str());
  flags.Track("jobs", app.add_option("--jobs", s.jobs,
                                     "task-level worker threads")
                          ->check(CLI::PositiveNumber));
  app.add_flag("-v,--verbose", s.verbose, "debug logging");

  const auto add_source = [&](CLI::App* sub) {
    flags.Track("tasks", sub->add_option("--tasks", s.tasks_path,
                                         "task file (JSON lines)"));
    flags.Track("suite", sub->add_option("--suite", s.suite,
                                         "built-in source: planted, "
                                         "planted-test"));
  };
  const auto add_engine = [&](CLI::App* sub) {
    flags.Track("engine", sub->add_option("--engine", s.engine,
                                          "direct | iterative"));
    flags.Track("query-last-step",
                sub->add_flag("--query-last-step", s.query_last_step,
                              "also ask the policy for the final exclusion"));
    flags.Track("strict-ra-zero",
                sub->add_flag("--strict-ra-zero", s.strict_ra_zero,
                              "direct reward: r_a = 0 for imperfect lists"));
  };
  const auto add_policy = [&](CLI::App* sub) {
    flags.Track("policy", sub->add_option("--policy", s.policy.spec,
                                          "oracle | anti-oracle | random | "
                                          "lexical | linear[:file] | remote "
                                          "| remote-cot"));
    flags.Track("replay", sub->add_option("--replay", s.policy.replay,
                                          "replay a recorded transcript"));
    flags.Track("record", sub->add_option("--record", s.policy.record,
                                          "append exchanges to a transcript"));
    flags.Track("model", sub->add_option("--model", s.policy.model,
                                         "remote model name"));
    flags.Track("base-url", sub->add_option("--base-url", s.policy.base_url,
                                            "OpenAI-compatible API base"));
    flags.Track("thoughts", sub->add_option("--thoughts", s.policy.thoughts,
                                            "trace file for remote-cot"));
    flags.Track("thought-top-k",
                sub->add_option("--thought-top-k", s.policy.thought_top_k,
                                "retrieved traces per prompt"));
    flags.Track("temperature",
                sub->add_option("--temperature", s.policy.temperature,
                                "remote sampling temperature"));
    flags.Track("max-tokens", sub->add_option("--max-tokens",
                                              s.policy.max_tokens,
                                              "remote completion budget"));
    flags.Track("max-concurrency",
                sub->add_option("--max-concurrency", s.policy.max_concurrency,
                                "in-flight remote requests"));
    sub->add_flag("--sample", s.sample,
                  "sample decisions instead of greedy decoding");
  };
  const auto add_ks = [&](CLI::App* sub) {
    flags.Track("k", sub->add_option("-k,--k", s.ks, "nDCG cutoffs")
                         ->delimiter(','));
  };

  auto* gen = app.add_subcommand("gen", "generate a task file");
  flags.Track("scenario",
              gen->add_option("--scenario", s.scenario,
                              "movie | music | game | performance | balance | "
                              "cost | passage5 | passage7 | passage9 | "
                              "synthetic"));
  flags.Track("count", gen->add_option("--count", s.count, "number of tasks"));
  flags.Track("dim", gen->add_option("--dim", s.dim, "feature dimension"));
  flags.Track("noise", gen->add_option("--noise", s.noise, "positive noise"));
  gen->add_flag("--routing-features", s.routing_features,
                "routing scenarios: attach [effectiveness, cost] features");

  auto* train = app.add_subcommand("train", "train the linear policy with PPO");
  add_source(train);
  add_engine(train);
  add_ks(train);
  flags.Track("policy", train->add_option("--policy", s.policy.spec,
                                          "linear:<file> to warm-start"));
  AddPpoFlags(train, s, flags);

  auto* eval = app.add_subcommand("eval", "evaluate one engine and policy");
  add_source(eval);
  add_engine(eval);
  add_policy(eval);
  add_ks(eval);
  eval->add_flag("--traces", s.keep_traces,
                 "iterative: also write traces/traces.jsonl");

  auto* compare = app.add_subcommand("compare", "evaluate several configs");
  add_source(compare);
  add_policy(compare);
  add_ks(compare);
  flags.Track("run", compare->add_option("--run", s.runs,
                                         "engine:policy (repeatable)"));

  auto* rank = app.add_subcommand("rank", "rank a single task verbosely");
  add_source(rank);
  add_engine(rank);
  add_policy(rank);
  rank->add_option("--index", s.index, "task index in the source");

  auto* export_traces =
      app.add_subcommand("export-traces", "run iterative episodes, save traces");
  add_source(export_traces);
  add_policy(export_traces);
  add_engine(export_traces);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(s.verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (!s.config_path.empty()) {
      // Snapshot flag-backed PPO fields so the config cannot clobber them.
      const ranker::PPOConfig from_flags = s.ppo;
      ApplyConfig(ReadConfig(s.config_path), flags, s);
      const std::pair<const char*, std::function<void()>> restore[] = {
          {"iterations", [&] { s.ppo.iterations = from_flags.iterations; }},
          {"episodes",
           [&] {
             s.ppo.episodes_per_iteration = from_flags.episodes_per_iteration;
           }},
          {"gamma", [&] { s.ppo.gamma = from_flags.gamma; }},
          {"lam", [&] { s.ppo.lam = from_flags.lam; }},
          {"actor-lr", [&] { s.ppo.actor_lr = from_flags.actor_lr; }},
          {"critic-lr", [&] { s.ppo.critic_lr = from_flags.critic_lr; }},
          {"kl-coeff", [&] { s.ppo.kl_coeff = from_flags.kl_coeff; }},
          {"clip", [&] { s.ppo.clip_epsilon = from_flags.clip_epsilon; }},
          {"ppo-epochs", [&] { s.ppo.ppo_epochs = from_flags.ppo_epochs; }},
          {"minibatch",
           [&] { s.ppo.minibatch_size = from_flags.minibatch_size; }},
      };
      for (const auto& [flag, apply] : restore) {
        if (flags.Given(flag)) apply();
      }
    }
    // The PPO seed follows --seed unless only the config's ppo section sets
    // it.
    if (flags.Given("seed") || !s.ppo_seed_from_config) s.ppo.seed = s.seed;

    if (gen->parsed()) return CmdGen(s);
    if (train->parsed()) return CmdTrain(s);
    if (eval->parsed()) return CmdEval(s);
    if (compare->parsed()) return CmdCompare(s);
    if (rank->parsed()) return CmdRank(s);
    if (export_traces->parsed()) return CmdExportTraces(s);
  } catch (const RankerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
