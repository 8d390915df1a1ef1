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

#include "ranker/rl.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "ranker/errors.h"
#include "ranker/metrics.h"

namespace ranker {

namespace {

void RequireSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw RankerError(ErrorCode::kLengthMismatch,
                      std::string(what) + ": " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
}

bool HasAction(const Transition& t) { return t.kind != ActionKind::kNone; }

bool AllFinite(const PolicyParams& params) {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(params.weights.begin(), params.weights.end(), finite) &&
         std::all_of(params.value_weights.begin(), params.value_weights.end(),
                     finite) &&
         std::isfinite(params.bias);
}

std::string SerializeRng(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng DeserializeRng(const std::string& state) {
  Rng rng;
  std::istringstream in(state);
  in >> rng;
  if (!in) throw RankerError(ErrorCode::kBadConfig, "corrupt RNG state");
  return rng;
}

double DiscountedReturn(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double scale = 1.0;
  for (const double r : rewards) {
    total += scale * r;
    scale *= gamma;
  }
  return total;
}

struct Rollout {
  std::vector<Transition> transitions;
  double discounted_return = 0.0;
  double reciprocal_rank = 0.0;
};

using RolloutFn = std::function<Rollout(const LinearSoftmaxPolicy& policy,
                                        const PolicyParams& reference,
                                        const RankingTask& task, Rng& rng)>;

TrainingResult Train(EngineKind engine, const PolicyParams& initial,
                     std::span<const RankingTask> tasks,
                     const PPOConfig& config, const TrainOptions& options,
                     const RolloutFn& rollout) {
  ValidateConfig(config);
  if (tasks.empty()) {
    throw RankerError(ErrorCode::kNoTasks, "training needs at least one task");
  }
  for (const auto& task : tasks) {
    if (PairingDimension(task) != initial.pairing_dim()) {
      throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                        "task '" + task.id + "' has pairing dimension " +
                            std::to_string(PairingDimension(task)) +
                            ", policy has " +
                            std::to_string(initial.pairing_dim()));
    }
  }

  TrainerCheckpoint state;
  Rng rng(config.seed);
  if (options.resume) {
    state = *options.resume;
    state.config = config;
    rng = DeserializeRng(state.rng_state);
  } else {
    state.engine = engine;
    state.params = initial;
    state.reference = initial;
    state.config = config;
    state.iteration = 0;
  }
  LinearSoftmaxPolicy(state.params);  // validates dimensions and finiteness

  TrainingResult result;
  std::uniform_int_distribution<std::size_t> pick_task(0, tasks.size() - 1);
  for (int iteration = state.iteration; iteration < config.iterations;
       ++iteration) {
    const LinearSoftmaxPolicy snapshot(state.params);
    TrainingBatch batch;
    batch.iteration = iteration;
    double return_sum = 0.0;
    double rr_sum = 0.0;
    for (int e = 0; e < config.episodes_per_iteration; ++e) {
      const auto& task = tasks[pick_task(rng)];
      auto episode = rollout(snapshot, state.reference, task, rng);
      return_sum += episode.discounted_return;
      rr_sum += episode.reciprocal_rank;
      for (auto& t : episode.transitions) {
        batch.transitions.push_back(std::move(t));
      }
    }
    if (config.normalize_advantages) NormalizeAdvantages(batch.transitions);

    std::vector<std::size_t> index(batch.transitions.size());
    std::iota(index.begin(), index.end(), 0);
    std::vector<Transition> minibatch;
    for (int epoch = 0; epoch < config.ppo_epochs; ++epoch) {
      std::shuffle(index.begin(), index.end(), rng);
      for (std::size_t start = 0; start < index.size();
           start += config.minibatch_size) {
        const std::size_t stop =
            std::min(index.size(), start + config.minibatch_size);
        minibatch.clear();
        for (std::size_t i = start; i < stop; ++i) {
          minibatch.push_back(batch.transitions[index[i]]);
        }
        const auto grad = PpoGradient(state.params, minibatch, config);
        for (std::size_t i = 0; i < grad.weights.size(); ++i) {
          state.params.weights[i] -= config.actor_lr * grad.weights[i];
        }
        state.params.bias -= config.actor_lr * grad.bias;
        for (std::size_t i = 0; i < grad.value_weights.size(); ++i) {
          state.params.value_weights[i] -=
              config.critic_lr * grad.value_weights[i];
        }
        if (!AllFinite(state.params)) {
          throw RankerError(
              ErrorCode::kNonFiniteLoss,
              "parameters diverged at iteration " + std::to_string(iteration) +
                  ", epoch " + std::to_string(epoch) +
                  "; lower actor_lr/critic_lr");
        }
      }
    }

    const auto terms = PpoObjective(state.params, batch.transitions, config);
    if (!std::isfinite(terms.total)) {
      throw RankerError(ErrorCode::kNonFiniteLoss,
                        "loss is not finite at iteration " +
                            std::to_string(iteration) + " (surrogate " +
                            std::to_string(terms.surrogate) + ", kl " +
                            std::to_string(terms.kl) + ", value " +
                            std::to_string(terms.value) + ")");
    }
    CurvePoint point;
    point.iteration = iteration;
    point.mean_reward = return_sum / config.episodes_per_iteration;
    point.mean_mrr = rr_sum / config.episodes_per_iteration;
    point.kl = terms.kl;
    point.loss = terms.total;
    result.curve.push_back(point);

    state.iteration = iteration + 1;
    state.rng_state = SerializeRng(rng);
    if (options.on_iteration && !options.on_iteration(point, state)) break;
  }
  state.rng_state = SerializeRng(rng);
  result.params = state.params;
  result.checkpoint = std::move(state);
  return result;
}

}  // namespace

GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values, double gamma,
                     double lam) {
  RequireSameLength(rewards.size(), values.size(), "rewards vs values");
  if (gamma < 0.0 || gamma > 1.0 || lam < 0.0 || lam > 1.0) {
    throw RankerError(ErrorCode::kBadConfig, "gamma and lam must lie in [0, 1]");
  }
  const std::size_t n = rewards.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = t + 1 < n ? values[t + 1] : 0.0;
    const double delta = rewards[t] + gamma * next_value - values[t];
    running = delta + gamma * lam * running;
    out.advantages[t] = running;
    out.returns[t] = running + values[t];
  }
  return out;
}

GaeResult ComputeGae(const EpisodeTrace& trace, double gamma, double lam) {
  std::vector<double> rewards;
  std::vector<double> values;
  for (const auto& step : trace.steps) {
    rewards.push_back(step.reward);
    values.push_back(step.value);
  }
  return ComputeGae(rewards, values, gamma, lam);
}

SurrogateResult PpoSurrogate(std::span<const double> new_log_probs,
                             std::span<const double> old_log_probs,
                             std::span<const double> advantages,
                             double clip_epsilon) {
  RequireSameLength(new_log_probs.size(), old_log_probs.size(),
                    "new vs old log-probs");
  RequireSameLength(new_log_probs.size(), advantages.size(),
                    "log-probs vs advantages");
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) {
    throw RankerError(ErrorCode::kBadConfig, "clip_epsilon must lie in (0, 1)");
  }
  SurrogateResult out;
  out.terms.reserve(advantages.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < advantages.size(); ++i) {
    const double ratio = std::exp(new_log_probs[i] - old_log_probs[i]);
    const double clipped =
        std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
    const double term =
        std::min(ratio * advantages[i], clipped * advantages[i]);
    out.terms.push_back(term);
    sum += term;
  }
  out.loss = advantages.empty() ? 0.0 : -sum / advantages.size();
  return out;
}

double KlRegularizer(std::span<const double> new_log_probs,
                     std::span<const double> ref_log_probs) {
  RequireSameLength(new_log_probs.size(), ref_log_probs.size(),
                    "new vs reference log-probs");
  if (new_log_probs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < new_log_probs.size(); ++i) {
    const double log_ratio = ref_log_probs[i] - new_log_probs[i];
    // expm1 keeps k(rho) >= 0 accurate when the log-ratio is tiny.
    sum += std::expm1(log_ratio) - log_ratio;
  }
  return sum / new_log_probs.size();
}

double ValueLoss(std::span<const double> predictions,
                 std::span<const double> returns) {
  RequireSameLength(predictions.size(), returns.size(),
                    "predictions vs returns");
  if (predictions.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double diff = predictions[i] - returns[i];
    sum += diff * diff;
  }
  return sum / predictions.size();
}

void NormalizeAdvantages(std::vector<Transition>& transitions) {
  double sum = 0.0;
  int count = 0;
  for (auto& t : transitions) {
    t.advantage = t.raw_advantage;
    if (HasAction(t)) {
      sum += t.raw_advantage;
      ++count;
    }
  }
  if (count == 0) return;
  const double mean = sum / count;
  double squares = 0.0;
  for (const auto& t : transitions) {
    if (HasAction(t)) squares += (t.raw_advantage - mean) * (t.raw_advantage - mean);
  }
  const double stddev = std::sqrt(squares / count);
  for (auto& t : transitions) {
    if (!HasAction(t)) continue;
    t.advantage = t.raw_advantage - mean;
    if (stddev > 1e-8) t.advantage /= stddev;
  }
}

double TransitionLogProb(const PolicyParams& params, const Transition& t) {
  switch (t.kind) {
    case ActionKind::kExclusion:
      return ExclusionLogProbs(params, t.features)[t.action];
    case ActionKind::kPermutation:
      return PermutationLogProb(params, t.features, t.order);
    case ActionKind::kNone:
      break;
  }
  return 0.0;
}

std::vector<double> TransitionLogProbGradient(const PolicyParams& params,
                                              const Transition& t) {
  switch (t.kind) {
    case ActionKind::kExclusion:
      return ExclusionLogProbGradient(params, t.features, t.action);
    case ActionKind::kPermutation:
      return PermutationLogProbGradient(params, t.features, t.order);
    case ActionKind::kNone:
      break;
  }
  return std::vector<double>(params.weights.size(), 0.0);
}

LossTerms PpoObjective(const PolicyParams& params,
                       std::span<const Transition> transitions,
                       const PPOConfig& config) {
  std::vector<double> new_lp, old_lp, ref_lp, advantages, values, returns;
  for (const auto& t : transitions) {
    values.push_back(LinearValue(params, t.state));
    returns.push_back(t.return_to_go);
    if (!HasAction(t)) continue;
    new_lp.push_back(TransitionLogProb(params, t));
    old_lp.push_back(t.old_log_prob);
    ref_lp.push_back(t.ref_log_prob);
    advantages.push_back(t.advantage);
  }
  LossTerms terms;
  terms.surrogate =
      PpoSurrogate(new_lp, old_lp, advantages, config.clip_epsilon).loss;
  terms.kl = KlRegularizer(new_lp, ref_lp);
  terms.value = ValueLoss(values, returns);
  terms.total = terms.surrogate + config.kl_coeff * terms.kl + terms.value;
  return terms;
}

ParamGradient PpoGradient(const PolicyParams& params,
                          std::span<const Transition> transitions,
                          const PPOConfig& config) {
  ParamGradient grad;
  grad.weights.assign(params.weights.size(), 0.0);
  grad.value_weights.assign(params.value_weights.size(), 0.0);
  if (transitions.empty()) return grad;

  const auto actions = std::count_if(transitions.begin(), transitions.end(),
                                     HasAction);
  const double eps = config.clip_epsilon;
  for (const auto& t : transitions) {
    const double value_coeff =
        2.0 * (LinearValue(params, t.state) - t.return_to_go) /
        transitions.size();
    for (std::size_t i = 0; i < t.state.size(); ++i) {
      grad.value_weights[i] += value_coeff * t.state[i];
    }
    if (!HasAction(t)) continue;

    const double log_prob = TransitionLogProb(params, t);
    const double ratio = std::exp(log_prob - t.old_log_prob);
    const double unclipped = ratio * t.advantage;
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * t.advantage;
    // d(term)/d(log_prob): the clipped branch is constant in the parameters.
    double coeff = unclipped <= clipped ? -ratio * t.advantage : 0.0;
    // d k(exp(ref - new)) / d new = 1 - exp(ref - new).
    coeff += config.kl_coeff * -std::expm1(t.ref_log_prob - log_prob);
    coeff /= static_cast<double>(actions);
    if (coeff == 0.0) continue;
    const auto dlogp = TransitionLogProbGradient(params, t);
    for (std::size_t i = 0; i < dlogp.size(); ++i) {
      grad.weights[i] += coeff * dlogp[i];
    }
  }
  return grad;
}

std::vector<Transition> IterativeTransitions(const RankingTask& task,
                                             const IterativeResult& episode,
                                             const PolicyParams& reference,
                                             const PPOConfig& config) {
  std::map<CandidateId, const Candidate*> by_id;
  for (const auto& c : task.candidates) by_id[c.id] = &c;
  const int n = static_cast<int>(task.candidates.size());
  const auto gae = ComputeGae(episode.trace, config.gamma, config.lam);

  std::vector<Transition> out;
  out.reserve(episode.trace.steps.size());
  std::vector<Candidate> pool;
  for (std::size_t k = 0; k < episode.trace.steps.size(); ++k) {
    const auto& step = episode.trace.steps[k];
    pool.clear();
    for (const auto& id : step.pool) pool.push_back(*by_id.at(id));
    Transition t;
    t.features = PairingMatrix(QueryOf(task), pool);
    t.state = StateFeatures(t.features, n);
    t.pool_ids = step.pool;
    if (pool.size() > 1) {
      t.kind = ActionKind::kExclusion;
      t.action = static_cast<int>(
          std::find(step.pool.begin(), step.pool.end(), step.excluded) -
          step.pool.begin());
      t.old_log_prob = step.log_prob;
      t.ref_log_prob = ExclusionLogProbs(reference, t.features)[t.action];
    }
    t.raw_advantage = gae.advantages[k];
    t.advantage = t.raw_advantage;
    t.return_to_go = gae.returns[k];
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Transition> DirectTransitions(const RankingTask& task,
                                          const DirectResult& episode,
                                          const PolicyParams& current,
                                          const PolicyParams& reference) {
  std::map<CandidateId, int> row_of;
  for (std::size_t i = 0; i < task.candidates.size(); ++i) {
    row_of[task.candidates[i].id] = static_cast<int>(i);
  }
  Transition t;
  t.kind = ActionKind::kPermutation;
  t.features = PairingMatrix(QueryOf(task), task.candidates);
  t.state = StateFeatures(t.features, static_cast<int>(task.candidates.size()));
  for (const auto& id : episode.ranking.order()) {
    t.order.push_back(row_of.at(id));
    t.pool_ids.push_back(id);
  }
  t.old_log_prob = episode.log_prob;
  t.ref_log_prob = PermutationLogProb(reference, t.features, t.order);
  // Single-step episode: GAE reduces to A = r_d - V(s).
  const double value = LinearValue(current, t.state);
  const auto gae = ComputeGae(std::vector<double>{episode.reward.r_d},
                              std::vector<double>{value}, 1.0, 1.0);
  t.raw_advantage = gae.advantages[0];
  t.advantage = t.raw_advantage;
  t.return_to_go = gae.returns[0];
  return {std::move(t)};
}

TrainingResult TrainIterative(const PolicyParams& initial,
                              std::span<const RankingTask> tasks,
                              const PPOConfig& config,
                              const TrainOptions& options) {
  const auto rollout = [&](const LinearSoftmaxPolicy& policy,
                           const PolicyParams& reference,
                           const RankingTask& task, Rng& rng) {
    const auto episode = RankIterative(policy, task, DecisionMode::kSample,
                                       rng, options.iterative);
    Rollout out;
    out.transitions = IterativeTransitions(task, episode, reference, config);
    std::vector<double> rewards;
    for (const auto& step : episode.trace.steps) rewards.push_back(step.reward);
    out.discounted_return = DiscountedReturn(rewards, config.gamma);
    out.reciprocal_rank = ReciprocalRank(episode.ranking, task.positives);
    return out;
  };
  return Train(EngineKind::kIterative, initial, tasks, config, options,
               rollout);
}

TrainingResult TrainDirect(const PolicyParams& initial,
                           std::span<const RankingTask> tasks,
                           const PPOConfig& config,
                           const TrainOptions& options) {
  const auto rollout = [&](const LinearSoftmaxPolicy& policy,
                           const PolicyParams& reference,
                           const RankingTask& task, Rng& rng) {
    const auto episode = RankDirect(policy, task, DecisionMode::kSample, rng);
    Rollout out;
    out.transitions =
        DirectTransitions(task, episode, policy.params(), reference);
    out.discounted_return = episode.reward.r_d;
    out.reciprocal_rank = ReciprocalRank(episode.ranking, task.positives);
    return out;
  };
  return Train(EngineKind::kDirect, initial, tasks, config, options, rollout);
}

}  // namespace ranker
