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


// Python bindings. Tasks, traces, configs and parameters cross the boundary
// as plain dicts/lists in the same JSON shapes the task and trace files use.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranker/engines.h"
#include "ranker/errors.h"
#include "ranker/features.h"
#include "ranker/harness.h"
#include "ranker/metrics.h"
#include "ranker/parse.h"
#include "ranker/policy.h"
#include "ranker/rewards.h"
#include "ranker/rl.h"
#include "ranker/serialization.h"
#include "ranker/tasks.h"

namespace py = pybind11;
using nlohmann::json;

namespace ranker {
namespace {

json ToJson(py::handle obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    json out = json::object();
    for (const auto& [key, value] : obj.cast<py::dict>()) {
      out[py::str(key).cast<std::string>()] = ToJson(value);
    }
    return out;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj) ||
      py::isinstance<py::set>(obj)) {
    json out = json::array();
    for (const auto& value : obj) out.push_back(ToJson(value));
    return out;
  }
  throw py::type_error("unsupported value: " +
                       py::repr(obj).cast<std::string>());
}

py::object FromJson(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& value : j) out.append(FromJson(value));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) out[py::str(key)] = FromJson(value);
      return out;
    }
    default:
      throw py::type_error("unsupported JSON value");
  }
}

RankingTask TaskFrom(py::handle obj) {
  RankingTask task = ToJson(obj).get<RankingTask>();
  ValidateTask(task);
  return task;
}

std::vector<RankingTask> TasksFrom(const py::iterable& tasks) {
  std::vector<RankingTask> out;
  for (const auto& task : tasks) out.push_back(TaskFrom(task));
  return out;
}

py::list TasksTo(const std::vector<RankingTask>& tasks) {
  py::list out;
  for (const auto& task : tasks) out.append(FromJson(json(task)));
  return out;
}

DecisionMode ModeOf(bool sample) {
  return sample ? DecisionMode::kSample : DecisionMode::kGreedy;
}

std::shared_ptr<const Policy> PolicyFrom(const std::string& spec,
                                         const py::object& params,
                                         const std::string& replay,
                                         const std::string& thoughts,
                                         std::span<const RankingTask> tasks) {
  if (!params.is_none()) {
    return std::make_shared<LinearSoftmaxPolicy>(
        ToJson(params).get<PolicyParams>());
  }
  PolicySettings settings;
  settings.spec = spec;
  settings.replay = replay;
  settings.thoughts = thoughts;
  return MakePolicy(settings, tasks);
}

py::dict ReportTo(const MetricReport& report) {
  py::dict ndcg;
  for (const auto& [k, value] : report.ndcg_at) ndcg[py::int_(k)] = value;
  py::dict out;
  out["mrr"] = report.mrr;
  out["ndcg"] = ndcg;
  out["n_tasks"] = report.n_tasks;
  return out;
}

py::dict RewardTo(const RewardBreakdown& reward) {
  py::dict out;
  out["r_a"] = reward.r_a;
  out["r_g"] = reward.r_g;
  out["r_d"] = reward.r_d;
  return out;
}

py::dict RawTo(const RawRankingOutput& raw) {
  py::dict out;
  out["matched"] = raw.matched;
  out["hallucinated"] = raw.hallucinated_count;
  out["duplicates"] = raw.duplicates_dropped;
  return out;
}

}  // namespace
}  // namespace ranker

PYBIND11_MODULE(_ranker, m) {
  using namespace ranker;
  m.doc() = "Iterative-exclusion and direct rankers (native core).";

  static py::exception<RankerError> error(m, "RankerError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RankerError& e) {
      py::object type = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = type(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  // Tasks.
  m.def("scenario_names", &NamedScenarioNames);
  m.def(
      "gen_synthetic",
      [](const std::string& scenario, int count, int dim, double noise,
         std::uint64_t seed) {
        return TasksTo(GenSynthetic(NamedScenario(scenario, seed), count, dim,
                                    noise));
      },
      py::arg("scenario") = "synthetic", py::arg("count") = 100,
      py::arg("dim") = 8, py::arg("noise") = 0.1, py::arg("seed") = 0);
  m.def(
      "planted_signal_suite",
      [](std::uint64_t seed, int train, int test, int n, int d, double noise) {
        const auto suite = PlantedSignalSuite(seed, train, test, n, d, noise);
        return py::make_tuple(TasksTo(suite.train), TasksTo(suite.test));
      },
      py::arg("seed") = 42, py::arg("train") = 256, py::arg("test") = 1000,
      py::arg("n") = 10, py::arg("d") = 8, py::arg("noise") = 0.1);
  m.def(
      "load_tasks",
      [](const std::string& path) {
        return TasksTo(LoadTasks(std::filesystem::path(path)));
      },
      py::arg("path"));
  m.def(
      "save_tasks",
      [](const py::iterable& tasks, const std::string& path) {
        SaveTasks(TasksFrom(tasks), path);
      },
      py::arg("tasks"), py::arg("path"));
  m.def(
      "validate_task", [](const py::object& task) { TaskFrom(task); },
      py::arg("task"));

  // Metrics and rewards.
  m.def(
      "reciprocal_rank",
      [](const std::vector<std::string>& order, const IdSet& positives) {
        return ReciprocalRank(Ranking::FromOrder(order), positives);
      },
      py::arg("order"), py::arg("positives"));
  m.def(
      "ndcg_at_k",
      [](const std::vector<std::string>& order, const IdSet& positives,
         int k) { return NdcgAtK(Ranking::FromOrder(order), positives, k); },
      py::arg("order"), py::arg("positives"), py::arg("k"));
  m.def(
      "overlap_f1",
      [](const std::vector<std::string>& matched, int candidate_count,
         int hallucinated, int duplicates) {
        return OverlapF1(RawRankingOutput{matched, hallucinated, duplicates},
                         candidate_count);
      },
      py::arg("matched"), py::arg("candidate_count"),
      py::arg("hallucinated") = 0, py::arg("duplicates") = 0);
  m.def(
      "ranking_reward",
      [](const py::object& task, const std::vector<std::string>& matched,
         int hallucinated, int duplicates, bool strict_ra_zero) {
        RewardOptions options;
        options.strict_ra_zero = strict_ra_zero;
        return RewardTo(RankingReward(
            RawRankingOutput{matched, hallucinated, duplicates},
            TaskFrom(task), options));
      },
      py::arg("task"), py::arg("matched"), py::arg("hallucinated") = 0,
      py::arg("duplicates") = 0, py::arg("strict_ra_zero") = false);
  m.def(
      "exclusion_reward",
      [](const std::string& excluded, const py::object& task) {
        return ExclusionReward(excluded, TaskFrom(task));
      },
      py::arg("excluded"), py::arg("task"));
  m.def("routing_utility",
        [](double effectiveness, double normalized_cost, double alpha,
           double beta) {
          return RoutingUtility(effectiveness, normalized_cost, {alpha, beta});
        },
        py::arg("effectiveness"), py::arg("normalized_cost"),
        py::arg("alpha"), py::arg("beta"));

  // Parsing.
  m.def("extract_answer", &ExtractAnswer, py::arg("text"));
  m.def(
      "parse_ranking",
      [](const std::string& text, const py::object& task) {
        return RawTo(ParseRanking(text, TaskFrom(task)));
      },
      py::arg("text"), py::arg("task"));
  m.def(
      "parse_exclusion",
      [](const std::string& text, const py::object& candidates) {
        const auto pool = ToJson(candidates).get<std::vector<Candidate>>();
        return ParseExclusion(text, pool);
      },
      py::arg("text"), py::arg("candidates"));

  // Ranking and evaluation.
  m.def(
      "rank",
      [](const py::object& task_obj, const std::string& policy_spec,
         const std::string& engine, std::uint64_t seed, bool sample,
         const py::object& params, const std::string& replay) {
        const std::vector<RankingTask> tasks = {TaskFrom(task_obj)};
        const auto policy = PolicyFrom(policy_spec, params, replay, "", tasks);
        Rng rng(seed);
        py::dict out;
        if (ParseEngineKind(engine) == EngineKind::kIterative) {
          const auto result =
              RankIterative(*policy, tasks[0], ModeOf(sample), rng);
          out["order"] = result.ranking.order();
          out["trace"] = FromJson(json(result.trace));
          out["policy_calls"] = result.policy_calls;
        } else {
          const auto result = RankDirect(*policy, tasks[0], ModeOf(sample), rng);
          out["order"] = result.ranking.order();
          out["raw"] = RawTo(result.raw);
          out["reward"] = RewardTo(result.reward);
        }
        out["reciprocal_rank"] =
            ReciprocalRank(Ranking::FromOrder(out["order"]
                                                  .cast<std::vector<std::string>>()),
                           tasks[0].positives);
        return out;
      },
      py::arg("task"), py::arg("policy") = "oracle",
      py::arg("engine") = "iterative", py::arg("seed") = 42,
      py::arg("sample") = false, py::arg("params") = py::none(),
      py::arg("replay") = "");
  m.def(
      "evaluate",
      [](const py::iterable& task_objs, const std::string& policy_spec,
         const std::string& engine, std::vector<int> ks, std::uint64_t seed,
         int jobs, bool sample, const py::object& params,
         const std::string& replay, const std::string& thoughts) {
        const auto tasks = TasksFrom(task_objs);
        const auto policy =
            PolicyFrom(policy_spec, params, replay, thoughts, tasks);
        EvalOptions options;
        options.engine = ParseEngineKind(engine);
        options.ks = std::move(ks);
        options.seed = seed;
        options.jobs = jobs;
        options.mode = ModeOf(sample);
        EvalResult result;
        {
          py::gil_scoped_release release;
          result = RunEval(*policy, tasks, options);
        }
        py::dict out = ReportTo(result.report);
        py::list failures;
        for (const auto& f : result.failures) {
          failures.append(py::make_tuple(f.index, f.task_id, f.message));
        }
        out["failures"] = failures;
        out["policy_calls"] = result.policy_calls;
        return out;
      },
      py::arg("tasks"), py::arg("policy") = "random",
      py::arg("engine") = "iterative",
      py::arg("ks") = std::vector<int>{1, 5, 10}, py::arg("seed") = 42,
      py::arg("jobs") = 1, py::arg("sample") = false,
      py::arg("params") = py::none(), py::arg("replay") = "",
      py::arg("thoughts") = "");

  // Reinforcement learning.
  m.def(
      "compute_gae",
      [](const std::vector<double>& rewards, const std::vector<double>& values,
         double gamma, double lam) {
        const auto gae = ComputeGae(rewards, values, gamma, lam);
        return py::make_tuple(gae.advantages, gae.returns);
      },
      py::arg("rewards"), py::arg("values"), py::arg("gamma"), py::arg("lam"));
  m.def("default_ppo_config", [] { return FromJson(json(PPOConfig())); });
  m.def(
      "zero_params",
      [](const py::object& task) {
        return FromJson(json(PolicyParams::Zeros(PairingDimension(TaskFrom(task)))));
      },
      py::arg("task"));
  m.def(
      "train",
      [](const py::iterable& task_objs, const std::string& engine,
         const py::object& config_obj, const py::object& params,
         const std::string& out_dir) {
        const auto tasks = TasksFrom(task_objs);
        if (tasks.empty()) throw RankerError(ErrorCode::kNoTasks, "no tasks");
        PPOConfig config;
        if (!config_obj.is_none()) MergePpoConfig(ToJson(config_obj), config);
        const PolicyParams initial =
            params.is_none() ? PolicyParams::Zeros(PairingDimension(tasks[0]))
                             : ToJson(params).get<PolicyParams>();
        TrainingResult result;
        {
          py::gil_scoped_release release;
          if (out_dir.empty()) {
            result = ParseEngineKind(engine) == EngineKind::kIterative
                         ? TrainIterative(initial, tasks, config)
                         : TrainDirect(initial, tasks, config);
          } else {
            TrainingRunOptions options;
            options.engine = ParseEngineKind(engine);
            options.config = config;
            result = RunTraining(initial, tasks, options, out_dir);
          }
        }
        py::list curve;
        for (const auto& point : result.curve) {
          py::dict row;
          row["iteration"] = point.iteration;
          row["mean_reward"] = point.mean_reward;
          row["mean_mrr"] = point.mean_mrr;
          row["kl"] = point.kl;
          row["loss"] = point.loss;
          curve.append(row);
        }
        py::dict out;
        out["params"] = FromJson(json(result.params));
        out["curve"] = curve;
        return out;
      },
      py::arg("tasks"), py::arg("engine") = "iterative",
      py::arg("config") = py::none(), py::arg("params") = py::none(),
      py::arg("out_dir") = "");
}
