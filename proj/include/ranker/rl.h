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

// PPO with generalized advantage estimation for the linear-softmax policy.
//
// Iterative training treats every policy exclusion as one action rewarded by
// the exclusion reward; direct training treats a whole sampled ranking as one
// action rewarded by r_d. Both minimize
//
//   L = -mean(min(rho * A, clip(rho, 1 - eps, 1 + eps) * A))
//       + kl_coeff * mean(k(exp(ref - new))) + mean((V - R)^2),
//   k(x) = x - 1 - ln x,
//
// with plain gradient descent: actor_lr on the policy weights, critic_lr on
// the value weights. The KL reference is the policy at iteration 0.

#ifndef RANKER_RL_H_
#define RANKER_RL_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ranker/core.h"
#include "ranker/engines.h"
#include "ranker/features.h"
#include "ranker/policy.h"

namespace ranker {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// delta_t = r_t + gamma * V_{t+1} - V_t with V after the last step = 0,
// A_t = sum_l (gamma * lam)^l delta_{t+l}, returns_t = A_t + V_t.
// Throws kLengthMismatch / kBadConfig.
GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values, double gamma, double lam);
GaeResult ComputeGae(const EpisodeTrace& trace, double gamma, double lam);

struct SurrogateResult {
  double loss = 0.0;
  std::vector<double> terms;
};

// Throws kLengthMismatch, kBadConfig (clip outside (0, 1)).
SurrogateResult PpoSurrogate(std::span<const double> new_log_probs,
                             std::span<const double> old_log_probs,
                             std::span<const double> advantages,
                             double clip_epsilon);

// mean over transitions of rho - 1 - ln rho with rho = exp(ref - new).
double KlRegularizer(std::span<const double> new_log_probs,
                     std::span<const double> ref_log_probs);

double ValueLoss(std::span<const double> predictions,
                 std::span<const double> returns);

enum class ActionKind {
  kNone,         // forced terminal step: trains the value head only
  kExclusion,    // one row of `features` removed from the pool
  kPermutation,  // full best-first order over the rows of `features`
};

struct Transition {
  FeatureMatrix features;
  std::vector<double> state;
  ActionKind kind = ActionKind::kNone;
  int action = -1;
  std::vector<int> order;
  std::vector<CandidateId> pool_ids;
  double old_log_prob = 0.0;
  double ref_log_prob = 0.0;
  double advantage = 0.0;      // after per-batch normalization
  double raw_advantage = 0.0;  // as estimated by GAE
  double return_to_go = 0.0;
};

struct TrainingBatch {
  std::vector<Transition> transitions;
  int iteration = 0;
};

// Zero-mean, unit-variance rescaling over the action transitions. A batch
// with no spread is only centred.
void NormalizeAdvantages(std::vector<Transition>& transitions);

double TransitionLogProb(const PolicyParams& params, const Transition& t);
std::vector<double> TransitionLogProbGradient(const PolicyParams& params,
                                              const Transition& t);

struct LossTerms {
  double surrogate = 0.0;
  double kl = 0.0;
  double value = 0.0;
  double total = 0.0;
};

LossTerms PpoObjective(const PolicyParams& params,
                       std::span<const Transition> transitions,
                       const PPOConfig& config);

struct ParamGradient {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> value_weights;
};

// Analytic gradient of PpoObjective(...).total.
ParamGradient PpoGradient(const PolicyParams& params,
                          std::span<const Transition> transitions,
                          const PPOConfig& config);

struct CurvePoint {
  int iteration = 0;
  double mean_reward = 0.0;  // mean discounted episode return of rollouts
  double mean_mrr = 0.0;     // mean reciprocal rank of rollouts
  double kl = 0.0;           // KL term against the reference after updates
  double loss = 0.0;         // total objective on the batch after updates

  bool operator==(const CurvePoint&) const = default;
};

struct TrainerCheckpoint {
  static constexpr int kVersion = 1;

  EngineKind engine = EngineKind::kIterative;
  PolicyParams params;
  PolicyParams reference;
  PPOConfig config;
  int iteration = 0;  // iterations completed
  std::string rng_state;

  bool operator==(const TrainerCheckpoint&) const = default;
};

struct TrainOptions {
  std::optional<TrainerCheckpoint> resume;
  // Called after every iteration; returning false stops training early.
  std::function<bool(const CurvePoint&, const TrainerCheckpoint&)> on_iteration;
  IterativeOptions iterative;
};

struct TrainingResult {
  PolicyParams params;
  std::vector<CurvePoint> curve;
  TrainerCheckpoint checkpoint;
};

// Throws kNoTasks, kBadConfig, kFeatureDimensionMismatch and kNonFiniteLoss.
// Deterministic for a fixed config.seed.
TrainingResult TrainIterative(const PolicyParams& initial,
                              std::span<const RankingTask> tasks,
                              const PPOConfig& config,
                              const TrainOptions& options = {});

TrainingResult TrainDirect(const PolicyParams& initial,
                           std::span<const RankingTask> tasks,
                           const PPOConfig& config,
                           const TrainOptions& options = {});

// Rollout helpers, exposed for tests: one episode turned into transitions
// with GAE advantages (unnormalized) and old/reference log-probabilities.
std::vector<Transition> IterativeTransitions(const RankingTask& task,
                                             const IterativeResult& episode,
                                             const PolicyParams& reference,
                                             const PPOConfig& config);
std::vector<Transition> DirectTransitions(const RankingTask& task,
                                          const DirectResult& episode,
                                          const PolicyParams& current,
                                          const PolicyParams& reference);

}  // namespace ranker

#endif  // RANKER_RL_H_
