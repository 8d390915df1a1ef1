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


// Acceptance suite: one PASS/FAIL line per criterion, each with its
// measurement, tolerance and wall time. Exits non-zero when any criterion
// fails. Reference values are computed here independently of the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranker/engines.h"
#include "ranker/features.h"
#include "ranker/harness.h"
#include "ranker/metrics.h"
#include "ranker/parse.h"
#include "ranker/policy.h"
#include "ranker/remote.h"
#include "ranker/rewards.h"
#include "ranker/rl.h"
#include "ranker/tasks.h"
#include "spdlog/fmt/fmt.h"
#include "spdlog/spdlog.h"

namespace ranker {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
  bool gating = true;
};

// ---------------------------------------------------------------- helpers

RankingTask TextTask(int n, const std::vector<int>& positive_indices) {
  RankingTask task;
  task.id = "t";
  task.query_text = "query";
  for (int i = 0; i < n; ++i) {
    task.candidates.push_back(
        {"c" + std::to_string(i), "candidate text " + std::to_string(i), {}});
  }
  for (int p : positive_indices) task.positives.insert("c" + std::to_string(p));
  task.scenario.candidate_size = n;
  task.scenario.positive_count = static_cast<int>(positive_indices.size());
  return task;
}

double Harmonic(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

// Reference reciprocal rank and nDCG@k for a best-first index order.
double RefReciprocalRank(const std::vector<int>& order,
                         const std::vector<bool>& positive) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (positive[order[i]]) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double RefNdcg(const std::vector<int>& order, const std::vector<bool>& positive,
               int k) {
  double dcg = 0.0, ideal = 0.0;
  const int count = static_cast<int>(
      std::count(positive.begin(), positive.end(), true));
  for (int i = 0; i < k; ++i) {
    if (positive[order[i]]) dcg += 1.0 / std::log2(i + 2.0);
    if (i < count) ideal += 1.0 / std::log2(i + 2.0);
  }
  return dcg / ideal;
}

// ------------------------------------------------------------- criteria

Outcome MetricOracles() {
  double worst = 0.0;
  long cases = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int p = 1; p <= std::min(2, n); ++p) {
      // Every positive set of size p.
      std::vector<bool> mask(n, false);
      std::fill(mask.end() - p, mask.end(), true);
      do {
        std::vector<int> positives;
        for (int i = 0; i < n; ++i) {
          if (mask[i]) positives.push_back(i);
        }
        const auto task = TextTask(n, positives);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<RankedInstance> batch;
        double mrr_sum = 0.0;
        do {
          std::vector<CandidateId> ids;
          for (int i : order) ids.push_back(task.candidates[i].id);
          const auto ranking = Ranking::FromOrder(ids);
          const double rr = RefReciprocalRank(order, mask);
          mrr_sum += rr;
          worst = std::max(worst,
                           std::abs(ReciprocalRank(ranking, task.positives) - rr));
          for (int k = 1; k <= n; ++k) {
            worst = std::max(worst, std::abs(NdcgAtK(ranking, task.positives, k) -
                                             RefNdcg(order, mask, k)));
          }
          batch.push_back({ranking, task.positives});
          ++cases;
        } while (std::next_permutation(order.begin(), order.end()));
        worst = std::max(worst, std::abs(MeanMrr(batch) -
                                         mrr_sum / static_cast<double>(
                                                       batch.size())));
      } while (std::next_permutation(mask.begin(), mask.end()));
    }
  }
  return {worst <= 1e-12,
          fmt::format("{} rankings, max |error| {:.3g} (tol 1e-12)", cases,
                      worst)};
}

// Replies with a random display line from the prompt, or with noise, so the
// remote policy's parsing and fallback paths run without a network.
class ScriptedClient : public CompletionClient {
 public:
  explicit ScriptedClient(std::uint64_t seed) : rng_(seed) {}
  std::string Complete(const CompletionRequest& request) override {
    std::vector<std::string> lines;
    std::istringstream in(request.prompt.user);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("c", 0) == 0 && line.find(": ") != std::string::npos) {
        lines.push_back(line.substr(0, line.find(": ")));
      }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    if (lines.empty() || std::uniform_real_distribution<>()(rng_) < 0.3) {
      return "<answer>none of these</answer>";
    }
    return "<think>weakest</think><answer>" +
           lines[std::uniform_int_distribution<std::size_t>(
               0, lines.size() - 1)(rng_)] +
           "</answer>";
  }

 private:
  std::mutex mutex_;
  Rng rng_;
};

Outcome PermutationSafety() {
  Rng rng(2026);
  std::normal_distribution<double> normal;
  const int d = 3;
  auto params = PolicyParams::Zeros(2 * d + 2);
  for (auto& w : params.weights) w = normal(rng);
  std::vector<std::shared_ptr<const Policy>> policies = {
      std::make_shared<OraclePolicy>(), std::make_shared<AntiOraclePolicy>(),
      std::make_shared<RandomPolicy>(), std::make_shared<LexicalPolicy>(),
      std::make_shared<LinearSoftmaxPolicy>(params),
      std::make_shared<RemoteLlmPolicy>(std::make_shared<ScriptedClient>(7))};
  const int episodes = 100000;
  int bad = 0;
  for (int e = 0; e < episodes; ++e) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    const int p = std::uniform_int_distribution<int>(1, n)(rng);
    std::vector<int> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    std::shuffle(indices.begin(), indices.end(), rng);
    auto task = TextTask(n, std::vector<int>(indices.begin(),
                                             indices.begin() + p));
    task.query_features.resize(d);
    for (auto& x : task.query_features) x = normal(rng);
    for (auto& c : task.candidates) {
      c.features.resize(d);
      for (auto& x : c.features) x = normal(rng);
    }
    const auto& policy = *policies[e % policies.size()];
    IterativeOptions options;
    options.query_last_step = (e / policies.size()) % 2 == 1;
    const auto mode = e % 3 == 0 ? DecisionMode::kGreedy : DecisionMode::kSample;
    const auto result = RankIterative(policy, task, mode, rng, options);
    double total = 0.0;
    for (const auto& step : result.trace.steps) total += step.reward;
    if (!result.ranking.IsPermutationOf(task.candidates) ||
        !IsValidTrace(result.trace, task.candidates) ||
        total != static_cast<double>(n - p)) {
      ++bad;
    }
  }
  return {bad == 0,
          fmt::format("{} episodes over {} policies, {} violations", episodes,
                      policies.size(), bad)};
}

Outcome OracleBounds() {
  std::string detail;
  bool pass = true;
  for (int n : {2, 5, 10, 20}) {
    ScenarioSpec spec;
    spec.candidate_size = n;
    const auto tasks = GenSynthetic(spec, 200, 2, 0.1);
    const auto oracle_run = RunEval(OraclePolicy(), tasks, {});
    const auto anti_run = RunEval(AntiOraclePolicy(), tasks, {});
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      pass = pass &&
             ReciprocalRank(oracle_run.rankings[i], tasks[i].positives) ==
                 1.0 &&
             ReciprocalRank(anti_run.rankings[i], tasks[i].positives) ==
                 1.0 / n;
    }
    const double oracle = oracle_run.report.mrr;
    const double anti = anti_run.report.mrr;
    pass = pass && oracle == 1.0 && anti == 1.0 / n;
    detail += fmt::format("n={}: oracle {} anti {} (1/n={}); ", n, oracle,
                          anti, 1.0 / n);
  }
  return {pass, detail + "exact per task and in the mean"};
}

Outcome RandomBaseline() {
  std::string detail;
  bool pass = true;
  for (int n : {20, 10}) {
    ScenarioSpec spec;
    spec.candidate_size = n;
    spec.seed = static_cast<std::uint64_t>(n);
    const auto tasks = GenSynthetic(spec, 20000, 2, 0.1);
    EvalOptions options;
    options.mode = DecisionMode::kSample;
    options.seed = 1000 + n;
    const auto result = RunEval(RandomPolicy(), tasks, options);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const double rr = ReciprocalRank(result.rankings[i], tasks[i].positives);
      sum += rr;
      sum_sq += rr * rr;
    }
    const double count = static_cast<double>(tasks.size());
    const double mean = sum / count;
    const double se = std::sqrt((sum_sq / count - mean * mean) / (count - 1));
    const double expected = Harmonic(n) / n;
    const double z = (mean - expected) / se;
    pass = pass && std::abs(z) <= 3.0;
    detail += fmt::format("n={}: {:.5f} vs H_n/n {:.5f} (z={:+.2f}); ", n,
                          mean, expected, z);
  }
  return {pass, detail + "tol 3 SE"};
}

std::vector<Transition> RandomBatch(Rng& rng, PolicyParams& params,
                                    const PPOConfig& config) {
  std::normal_distribution<double> normal(0.0, 0.5);
  const auto suite = PlantedSignalSuite(rng(), 4, 1,
                                        std::uniform_int_distribution(3, 7)(rng),
                                        2, 0.3);
  params = PolicyParams::Zeros(PairingDimension(suite.train[0]));
  for (auto& w : params.weights) w = normal(rng);
  params.bias = normal(rng);
  for (auto& v : params.value_weights) v = normal(rng);
  const LinearSoftmaxPolicy behaviour(params);
  std::vector<Transition> batch;
  for (const auto& task : suite.train) {
    if (rng() % 2 == 0) {
      const auto episode =
          RankIterative(behaviour, task, DecisionMode::kSample, rng);
      for (auto& t : IterativeTransitions(task, episode, params, config)) {
        batch.push_back(std::move(t));
      }
    } else {
      const auto episode =
          RankDirect(behaviour, task, DecisionMode::kSample, rng);
      for (auto& t : DirectTransitions(task, episode, params, params)) {
        batch.push_back(std::move(t));
      }
    }
  }
  NormalizeAdvantages(batch);
  return batch;
}

Outcome GaeAndPpoMath() {
  Rng rng(99);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;

  // GAE against the double-sum definition.
  double gae_error = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int length = std::uniform_int_distribution(1, 15)(rng);
    const double gamma = unit(rng), lam = unit(rng);
    std::vector<double> rewards(length), values(length);
    for (auto& r : rewards) r = normal(rng);
    for (auto& v : values) v = normal(rng);
    const auto gae = ComputeGae(rewards, values, gamma, lam);
    for (int t = 0; t < length; ++t) {
      double advantage = 0.0;
      for (int l = 0; t + l < length; ++l) {
        const double next = t + l + 1 < length ? values[t + l + 1] : 0.0;
        const double delta = rewards[t + l] + gamma * next - values[t + l];
        advantage += std::pow(gamma * lam, l) * delta;
      }
      gae_error = std::max(gae_error, std::abs(gae.advantages[t] - advantage));
      gae_error = std::max(gae_error, std::abs(gae.returns[t] -
                                               (advantage + values[t])));
    }
  }

  // Analytic gradients against central differences.
  double grad_error = 0.0;
  double pg_error = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    PPOConfig config;
    config.kl_coeff = 0.05 * unit(rng);
    config.clip_epsilon = 0.1 + 0.2 * unit(rng);
    PolicyParams params;
    auto batch = RandomBatch(rng, params, config);

    // At the behaviour policy (first epoch) with no KL term the policy
    // gradient is the vanilla estimator -mean(A * grad log pi).
    {
      PPOConfig plain = config;
      plain.kl_coeff = 0.0;
      const auto grad = PpoGradient(params, batch, plain);
      std::vector<double> vanilla(params.weights.size(), 0.0);
      int actions = 0;
      for (const auto& t : batch) {
        if (t.kind == ActionKind::kNone) continue;
        ++actions;
        const auto dlogp = TransitionLogProbGradient(params, t);
        for (std::size_t i = 0; i < vanilla.size(); ++i) {
          vanilla[i] -= t.advantage * dlogp[i];
        }
      }
      for (std::size_t i = 0; i < vanilla.size(); ++i) {
        pg_error = std::max(pg_error,
                            std::abs(grad.weights[i] - vanilla[i] / actions));
      }
    }

    for (auto& w : params.weights) w += 0.05 * normal(rng);
    const auto grad = PpoGradient(params, batch, config);
    const double h = 1e-6;
    const auto loss = [&](const PolicyParams& p) {
      return PpoObjective(p, batch, config).total;
    };
    const auto check = [&](double analytic, double numeric) {
      grad_error = std::max(grad_error, std::abs(analytic - numeric) /
                                            std::max(1.0, std::abs(numeric)));
    };
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
      auto plus = params, minus = params;
      plus.weights[i] += h;
      minus.weights[i] -= h;
      check(grad.weights[i], (loss(plus) - loss(minus)) / (2 * h));
    }
    {
      auto plus = params, minus = params;
      plus.bias += h;
      minus.bias -= h;
      check(grad.bias, (loss(plus) - loss(minus)) / (2 * h));
    }
    for (std::size_t i = 0; i < params.value_weights.size(); ++i) {
      auto plus = params, minus = params;
      plus.value_weights[i] += h;
      minus.value_weights[i] -= h;
      check(grad.value_weights[i], (loss(plus) - loss(minus)) / (2 * h));
    }
  }

  // Surrogate at rho = 1.
  double surrogate_error = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int size = std::uniform_int_distribution(1, 64)(rng);
    std::vector<double> log_probs(size), advantages(size);
    for (auto& l : log_probs) l = -std::abs(normal(rng));
    for (auto& a : advantages) a = normal(rng);
    const double mean =
        std::accumulate(advantages.begin(), advantages.end(), 0.0) / size;
    surrogate_error = std::max(
        surrogate_error,
        std::abs(PpoSurrogate(log_probs, log_probs, advantages, 0.2).loss +
                 mean));
  }

  const bool pass = gae_error <= 1e-9 && grad_error <= 1e-4 &&
                    surrogate_error <= 1e-12 && pg_error <= 1e-9;
  return {pass,
          fmt::format("GAE {:.2g} (tol 1e-9); gradient rel {:.2g} over 100 "
                      "batches (tol 1e-4); surrogate at rho=1 {:.2g} (tol "
                      "1e-12); first-epoch vs vanilla PG {:.2g} (tol 1e-9)",
                      gae_error, grad_error, surrogate_error, pg_error)};
}

// Both training criteria use the same documented suite and budget.
constexpr std::uint64_t kSuiteSeed = 42;

double GreedyTestMrr(const PolicyParams& params, const SyntheticSuite& suite,
                     EngineKind engine) {
  EvalOptions options;
  options.engine = engine;
  return RunEval(LinearSoftmaxPolicy(params), suite.test, options).report.mrr;
}

struct TrainedPair {
  double iterative = 0.0;
  double direct = 0.0;
  double iterative_seconds = 0.0;
  double direct_seconds = 0.0;
};

const TrainedPair& TrainBoth() {
  static const TrainedPair pair = [] {
    const auto suite = PlantedSignalSuite(kSuiteSeed);
    const auto initial = PolicyParams::Zeros(PairingDimension(suite.train[0]));
    const PPOConfig config;  // 200 iterations x 32 episodes
    TrainedPair result;
    auto start = std::chrono::steady_clock::now();
    const auto iterative = TrainIterative(initial, suite.train, config);
    result.iterative_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
    result.iterative =
        GreedyTestMrr(iterative.params, suite, EngineKind::kIterative);
    start = std::chrono::steady_clock::now();
    const auto direct = TrainDirect(initial, suite.train, config);
    result.direct_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    result.direct = GreedyTestMrr(direct.params, suite, EngineKind::kDirect);
    return result;
  }();
  return pair;
}

Outcome TrainingEfficacy() {
  const auto& trained = TrainBoth();
  const auto suite = PlantedSignalSuite(kSuiteSeed);
  EvalOptions sampled;
  sampled.mode = DecisionMode::kSample;
  const double random = RunEval(RandomPolicy(), suite.test, sampled).report.mrr;

  // Zero learning rates: parameters must come back bit for bit.
  Rng rng(5);
  std::normal_distribution<double> normal;
  auto initial = PolicyParams::Zeros(PairingDimension(suite.train[0]));
  for (auto& w : initial.weights) w = normal(rng);
  initial.bias = normal(rng);
  for (auto& v : initial.value_weights) v = normal(rng);
  PPOConfig frozen;
  frozen.actor_lr = 0.0;
  frozen.critic_lr = 0.0;
  frozen.iterations = 20;
  const auto a = TrainIterative(initial, suite.train, frozen).params;
  const auto b = TrainDirect(initial, suite.train, frozen).params;
  const auto identical = [&](const PolicyParams& p) {
    return std::memcmp(p.weights.data(), initial.weights.data(),
                       sizeof(double) * p.weights.size()) == 0 &&
           std::memcmp(&p.bias, &initial.bias, sizeof(double)) == 0 &&
           std::memcmp(p.value_weights.data(), initial.value_weights.data(),
                       sizeof(double) * p.value_weights.size()) == 0;
  };
  const bool frozen_ok = identical(a) && identical(b);
  return {trained.iterative >= 0.8 && frozen_ok &&
              trained.iterative_seconds < 120.0,
          fmt::format("greedy test MRR {:.4f} (need >= 0.8; random {:.4f}) "
                      "after 200x32 in {:.1f}s; zero-lr params {}",
                      trained.iterative, random, trained.iterative_seconds,
                      frozen_ok ? "bit-identical" : "CHANGED")};
}

Outcome DirectVersusIterative() {
  const auto& trained = TrainBoth();
  return {trained.iterative > trained.direct,
          fmt::format("iterative {:.4f} vs direct {:.4f} (suite seed {}, "
                      "200x32 each, {:.1f}s + {:.1f}s)",
                      trained.iterative, trained.direct, kSuiteSeed,
                      trained.iterative_seconds, trained.direct_seconds)};
}

Outcome RewardAlgebra() {
  Rng rng(17);
  int bad = 0, perfect = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution(2, 12)(rng);
    const int positive = std::uniform_int_distribution(0, n - 1)(rng);
    const auto task = TextTask(n, {positive});
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    RawRankingOutput raw;
    const bool make_perfect = rng() % 4 == 0;
    const int kept =
        make_perfect ? n : std::uniform_int_distribution(0, n)(rng);
    for (int i = 0; i < kept; ++i) {
      raw.matched.push_back(task.candidates[order[i]].id);
    }
    if (!make_perfect) {
      raw.hallucinated_count = std::uniform_int_distribution(0, 3)(rng);
      raw.duplicates_dropped = std::uniform_int_distribution(0, 3)(rng);
    }
    const bool is_perfect = kept == n && raw.hallucinated_count == 0 &&
                            raw.duplicates_dropped == 0;
    perfect += is_perfect;

    // Independent reference: F1 over emitted lines, rank after completion.
    const double emitted =
        kept + raw.hallucinated_count + raw.duplicates_dropped;
    const double precision = emitted > 0 ? kept / emitted : 0.0;
    const double recall = static_cast<double>(kept) / n;
    const double f1 = precision + recall > 0
                          ? 2 * precision * recall / (precision + recall)
                          : 0.0;
    int rank = 0;
    for (int i = 0; i < kept; ++i) {
      if (order[i] == positive) rank = i + 1;
    }
    if (rank == 0) {
      rank = kept;
      for (int i = 0; i < n; ++i) {
        if (std::find(raw.matched.begin(), raw.matched.end(),
                      task.candidates[i].id) == raw.matched.end()) {
          ++rank;
          if (i == positive) break;
        }
      }
    }
    const auto reward = RankingReward(raw, task);
    const bool ok =
        std::abs(reward.r_d - (reward.r_a + reward.r_g)) <= 1e-12 &&
        reward.r_g >= -1.0 && reward.r_g <= 0.0 &&
        (reward.r_g == 0.0) == is_perfect &&
        std::abs(reward.r_g - (f1 - 1.0)) <= 1e-12 &&
        std::abs(reward.r_a - 1.0 / rank) <= 1e-12;
    bad += !ok;
  }
  // Worked case: 2 correct lines and 1 hallucination over 4 candidates.
  const auto task = TextTask(4, {2});
  const auto worked = RankingReward({{"c2", "c0"}, 1, 0}, task);
  const bool worked_ok = worked.r_g == 4.0 / 7.0 - 1.0 && worked.r_a == 1.0 &&
                         worked.r_d == 1.0 + (4.0 / 7.0 - 1.0);
  return {bad == 0 && worked_ok,
          fmt::format("1000 outputs ({} perfect), {} violations; worked case "
                      "r_g = {:.12f} (4/7 - 1 = {:.12f})",
                      perfect, bad, worked.r_g, 4.0 / 7.0 - 1.0)};
}

Outcome ParsingFixtures() {
  std::ifstream in(std::string(RANKER_FIXTURE_DIR) + "/transcripts.jsonl");
  if (!in) return {false, "fixture file missing"};
  int checked = 0;
  std::vector<std::string> wrong;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto row = nlohmann::json::parse(line);
    std::vector<Candidate> pool;
    for (const auto& c : row.at("candidates")) {
      pool.push_back({c.at("id"), c.at("text"), {}});
    }
    const std::string response = row.at("response");
    bool ok;
    if (row.at("mode") == "exclusion") {
      const auto got = ParseExclusion(response, pool);
      ok = row.at("expected").is_null()
               ? !got.has_value()
               : got == row.at("expected").get<std::string>();
    } else {
      RankingTask task;
      task.candidates = pool;
      task.positives = {pool.front().id};
      const auto raw = ParseRanking(response, task);
      ok = raw.matched == row.at("expected").get<std::vector<std::string>>() &&
           raw.hallucinated_count == row.at("hallucinated").get<int>() &&
           raw.duplicates_dropped == row.at("duplicates").get<int>();
    }
    ++checked;
    if (!ok) wrong.push_back(row.at("name"));
  }
  std::string detail = fmt::format("{}/{} transcripts parsed as recorded",
                                   checked - wrong.size(), checked);
  for (const auto& name : wrong) detail += "; wrong: " + name;
  return {wrong.empty() && checked > 0, detail};
}

// Runs the CLI and returns its exit status.
int RunCli(const std::string& args) {
  const std::string command =
      std::string("\"") + RANKER_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(command.c_str());
}

std::map<std::string, std::string> SnapshotFiles(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto relative = fs::relative(entry.path(), dir).string();
    if (entry.path().filename() == "timing.csv") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    files[relative] = buffer.str();
  }
  return files;
}

Outcome Reproducibility() {
  const fs::path root = fs::temp_directory_path() / "ranker_acceptance_repro";
  fs::remove_all(root);
  const std::string tasks = (root / "gen" / "tasks.jsonl").string();
  if (RunCli("gen --scenario synthetic --count 200 --dim 8 --out \"" +
             (root / "gen").string() + "\"") != 0) {
    return {false, "gen failed"};
  }
  std::vector<std::pair<std::string, std::string>> commands = {
      {"eval", "eval --policy random --sample --traces --tasks \"" + tasks +
                   "\""},
      {"train", "train --suite planted --iterations 50 --checkpoint-every 10"},
  };
  std::string detail;
  bool pass = true;
  for (const auto& [name, args] : commands) {
    std::vector<std::map<std::string, std::string>> runs;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = root / fmt::format("{}_{}", name, run);
      const int status = RunCli("--jobs 1 --seed 42 --out \"" + out.string() +
                                "\" " + args);
      if (status != 0) return {false, name + " exited with an error"};
      runs.push_back(SnapshotFiles(out));
    }
    const bool same = runs[0] == runs[1] && !runs[0].empty();
    pass = pass && same;
    detail += fmt::format("{}: {} files {}; ", name, runs[0].size(),
                          same ? "identical" : "DIFFER");
  }
  fs::remove_all(root);
  return {pass, detail + "timing.csv (wall clock) excluded"};
}

// Informational: the same comparison repeated over other suite seeds.
Outcome DirectVersusIterativeSeeds() {
  std::string detail;
  int wins = 0;
  double gap = 0.0;
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  for (const auto seed : seeds) {
    const auto suite = PlantedSignalSuite(seed);
    const auto initial = PolicyParams::Zeros(PairingDimension(suite.train[0]));
    const PPOConfig config;
    const double iterative = GreedyTestMrr(
        TrainIterative(initial, suite.train, config).params, suite,
        EngineKind::kIterative);
    const double direct =
        GreedyTestMrr(TrainDirect(initial, suite.train, config).params, suite,
                      EngineKind::kDirect);
    wins += iterative > direct;
    gap += iterative - direct;
    detail += fmt::format("{}:{:+.4f} ", seed, iterative - direct);
  }
  return {true, fmt::format("iterative - direct by suite seed: {}; iterative "
                            "ahead on {}/{}, mean gap {:+.4f}; not gating",
                            detail, wins, seeds.size(), gap / seeds.size())};
}

// Informational: the discount used by default versus an undiscounted return.
Outcome DiscountAblation() {
  const auto suite = PlantedSignalSuite(kSuiteSeed);
  const auto initial = PolicyParams::Zeros(PairingDimension(suite.train[0]));
  std::string detail;
  for (double gamma : {1.0, 0.9}) {
    PPOConfig config;
    config.gamma = gamma;
    const auto trained = TrainIterative(initial, suite.train, config);
    detail += fmt::format("gamma={}: MRR {:.4f}; ", gamma,
                          GreedyTestMrr(trained.params, suite,
                                        EngineKind::kIterative));
  }
  return {true, detail + "not gating"};
}

}  // namespace
}  // namespace ranker

int main() {
  using namespace ranker;
  spdlog::set_level(spdlog::level::err);
  const std::vector<Criterion> criteria = {
      {"metric oracles", 10, MetricOracles},
      {"permutation safety", 60, PermutationSafety},
      {"oracle/anti-oracle bounds", 5, OracleBounds},
      {"random baseline", 60, RandomBaseline},
      {"GAE and PPO math", 30, GaeAndPpoMath},
      {"training efficacy", 120, TrainingEfficacy},
      {"direct vs iterative direction", 300, DirectVersusIterative},
      {"reward algebra", 5, RewardAlgebra},
      {"parsing fixtures", 1, ParsingFixtures},
      {"reproducibility", 0, Reproducibility},
      {"direct vs iterative over seeds (info)", 0,
       DirectVersusIterativeSeeds, false},
      {"discount ablation (info)", 0, DiscountAblation, false},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    bool pass = outcome.pass;
    if (criterion.time_limit_seconds > 0 &&
        seconds >= criterion.time_limit_seconds) {
      pass = false;
      outcome.detail += fmt::format("; over the {}s budget",
                                    criterion.time_limit_seconds);
    }
    const char* tag = !criterion.gating ? "INFO" : pass ? "PASS" : "FAIL";
    if (criterion.gating && !pass) ++failures;
    std::cout << fmt::format("[{}] {}: {} ({:.2f}s)", tag, criterion.name,
                             outcome.detail, seconds)
              << std::endl;
  }
  const auto gating = std::count_if(
      criteria.begin(), criteria.end(),
      [](const Criterion& c) { return c.gating; });
  std::cout << fmt::format("{} of {} criteria failed", failures, gating)
            << std::endl;
  return failures == 0 ? 0 : 1;
}
