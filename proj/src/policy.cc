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

#include "ranker/policy.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ranker/errors.h"
#include "ranker/text.h"

namespace ranker {

namespace {

double LogSumExp(std::span<const double> values) {
  const double peak = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

std::size_t UniformIndex(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Uniform choice among pool members whose positivity equals `want_positive`,
// falling back to the other class when the wanted one is exhausted.
ExclusionDecision ExcludeByClass(const RankingTask& task,
                                 std::span<const Candidate> pool,
                                 bool want_positive, Rng& rng) {
  std::vector<const Candidate*> wanted;
  std::vector<const Candidate*> others;
  for (const auto& c : pool) {
    (task.IsPositive(c.id) == want_positive ? wanted : others).push_back(&c);
  }
  const auto& from = wanted.empty() ? others : wanted;
  ExclusionDecision decision;
  decision.excluded = from[UniformIndex(from.size(), rng)]->id;
  decision.log_prob = -std::log(static_cast<double>(from.size()));
  return decision;
}

RankingDecision OrderByClass(const RankingTask& task, bool positives_first) {
  RankingDecision decision;
  for (const bool positive : {positives_first, !positives_first}) {
    for (const auto& c : task.candidates) {
      if (task.IsPositive(c.id) == positive) {
        decision.raw.matched.push_back(c.id);
      }
    }
  }
  return decision;
}

}  // namespace

ExclusionDecision Policy::DecideExclusion(const RankingTask& task,
                                          std::span<const Candidate> pool,
                                          DecisionMode mode, Rng& rng) const {
  if (pool.empty()) {
    throw RankerError(ErrorCode::kEmptyPool, name() + ": empty pool");
  }
  return Exclude(task, pool, mode, rng);
}

RankingDecision Policy::DecideRanking(const RankingTask& task,
                                      DecisionMode mode, Rng& rng) const {
  if (task.candidates.empty()) {
    throw RankerError(ErrorCode::kEmptyPool, name() + ": no candidates");
  }
  return Rank(task, mode, rng);
}

double Policy::EstimateValue(const RankingTask&,
                             std::span<const Candidate>) const {
  return 0.0;
}

ExclusionDecision OraclePolicy::Exclude(const RankingTask& task,
                                        std::span<const Candidate> pool,
                                        DecisionMode, Rng& rng) const {
  return ExcludeByClass(task, pool, /*want_positive=*/false, rng);
}

RankingDecision OraclePolicy::Rank(const RankingTask& task, DecisionMode,
                                   Rng&) const {
  return OrderByClass(task, /*positives_first=*/true);
}

ExclusionDecision AntiOraclePolicy::Exclude(const RankingTask& task,
                                            std::span<const Candidate> pool,
                                            DecisionMode, Rng& rng) const {
  return ExcludeByClass(task, pool, /*want_positive=*/true, rng);
}

RankingDecision AntiOraclePolicy::Rank(const RankingTask& task, DecisionMode,
                                       Rng&) const {
  return OrderByClass(task, /*positives_first=*/false);
}

ExclusionDecision RandomPolicy::Exclude(const RankingTask&,
                                        std::span<const Candidate> pool,
                                        DecisionMode, Rng& rng) const {
  ExclusionDecision decision;
  decision.excluded = pool[UniformIndex(pool.size(), rng)].id;
  decision.log_prob = -std::log(static_cast<double>(pool.size()));
  return decision;
}

RankingDecision RandomPolicy::Rank(const RankingTask& task, DecisionMode,
                                   Rng& rng) const {
  RankingDecision decision;
  for (const auto& c : task.candidates) decision.raw.matched.push_back(c.id);
  std::shuffle(decision.raw.matched.begin(), decision.raw.matched.end(), rng);
  decision.log_prob =
      -std::lgamma(static_cast<double>(task.candidates.size()) + 1.0);
  return decision;
}

ExclusionDecision LexicalPolicy::Exclude(const RankingTask& task,
                                         std::span<const Candidate> pool,
                                         DecisionMode, Rng&) const {
  std::size_t worst = 0;
  double worst_score = 2.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double score = TokenF1(task.query_text, pool[i].text);
    if (score <= worst_score) {
      worst_score = score;
      worst = i;
    }
  }
  ExclusionDecision decision;
  decision.excluded = pool[worst].id;
  return decision;
}

RankingDecision LexicalPolicy::Rank(const RankingTask& task, DecisionMode,
                                    Rng&) const {
  std::vector<std::pair<double, const Candidate*>> scored;
  for (const auto& c : task.candidates) {
    scored.emplace_back(TokenF1(task.query_text, c.text), &c);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  RankingDecision decision;
  for (const auto& [score, c] : scored) decision.raw.matched.push_back(c->id);
  return decision;
}

PolicyParams PolicyParams::Zeros(int pairing_dim) {
  PolicyParams params;
  params.weights.assign(pairing_dim, 0.0);
  params.value_weights.assign(pairing_dim + 2, 0.0);
  return params;
}

std::vector<double> LinearScores(const PolicyParams& params,
                                 const FeatureMatrix& features) {
  if (features.cols != params.pairing_dim()) {
    throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                      "policy expects " + std::to_string(params.pairing_dim()) +
                          " pairing features, task provides " +
                          std::to_string(features.cols));
  }
  std::vector<double> scores(features.rows, params.bias);
  for (int r = 0; r < features.rows; ++r) {
    const auto row = features.row(r);
    scores[r] += std::inner_product(row.begin(), row.end(),
                                    params.weights.begin(), 0.0);
  }
  return scores;
}

std::vector<double> ExclusionLogProbs(const PolicyParams& params,
                                      const FeatureMatrix& features) {
  auto logits = LinearScores(params, features);
  for (auto& v : logits) v = -v;
  const double norm = LogSumExp(logits);
  for (auto& v : logits) v -= norm;
  return logits;
}

double PermutationLogProb(const PolicyParams& params,
                          const FeatureMatrix& features,
                          std::span<const int> order) {
  const auto scores = LinearScores(params, features);
  std::vector<double> remaining;
  double total = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    remaining.clear();
    for (std::size_t t = j; t < order.size(); ++t) {
      remaining.push_back(scores[order[t]]);
    }
    total += scores[order[j]] - LogSumExp(remaining);
  }
  return total;
}

std::vector<double> ExclusionLogProbGradient(const PolicyParams& params,
                                             const FeatureMatrix& features,
                                             int action) {
  // d/dw log softmax(-s)[a] = -phi_a + sum_c p_c phi_c.
  const auto log_probs = ExclusionLogProbs(params, features);
  std::vector<double> grad(features.cols, 0.0);
  for (int r = 0; r < features.rows; ++r) {
    const double coeff = std::exp(log_probs[r]) - (r == action ? 1.0 : 0.0);
    const auto row = features.row(r);
    for (int c = 0; c < features.cols; ++c) grad[c] += coeff * row[c];
  }
  return grad;
}

std::vector<double> PermutationLogProbGradient(const PolicyParams& params,
                                               const FeatureMatrix& features,
                                               std::span<const int> order) {
  const auto scores = LinearScores(params, features);
  std::vector<double> grad(features.cols, 0.0);
  std::vector<double> remaining;
  for (std::size_t j = 0; j < order.size(); ++j) {
    remaining.clear();
    for (std::size_t t = j; t < order.size(); ++t) {
      remaining.push_back(scores[order[t]]);
    }
    const double norm = LogSumExp(remaining);
    for (std::size_t t = j; t < order.size(); ++t) {
      const double coeff = (t == j ? 1.0 : 0.0) - std::exp(remaining[t - j] - norm);
      const auto row = features.row(order[t]);
      for (int c = 0; c < features.cols; ++c) grad[c] += coeff * row[c];
    }
  }
  return grad;
}

double LinearValue(const PolicyParams& params, std::span<const double> state) {
  if (state.size() != params.value_weights.size()) {
    throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                      "value head expects " +
                          std::to_string(params.value_weights.size()) +
                          " state features, got " +
                          std::to_string(state.size()));
  }
  return std::inner_product(state.begin(), state.end(),
                            params.value_weights.begin(), 0.0);
}

int SampleIndex(std::span<const double> log_probs, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < log_probs.size(); ++i) {
    cumulative += std::exp(log_probs[i]);
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left the cumulative mass just below u; take the last index with
  // non-zero probability.
  for (std::size_t i = log_probs.size(); i-- > 0;) {
    if (std::isfinite(log_probs[i])) return static_cast<int>(i);
  }
  return static_cast<int>(log_probs.size()) - 1;
}

LinearSoftmaxPolicy::LinearSoftmaxPolicy(PolicyParams params)
    : params_(std::move(params)) {
  if (params_.value_weights.size() != params_.weights.size() + 2) {
    throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                      "value_weights must have pairing_dim + 2 entries");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(params_.weights.begin(), params_.weights.end(), finite) ||
      !std::all_of(params_.value_weights.begin(), params_.value_weights.end(),
                   finite) ||
      !std::isfinite(params_.bias)) {
    throw RankerError(ErrorCode::kBadConfig, "policy parameters not finite");
  }
}

FeatureMatrix LinearSoftmaxPolicy::Features(
    const RankingTask& task, std::span<const Candidate> pool) const {
  return PairingMatrix(QueryOf(task), pool);
}

double LinearSoftmaxPolicy::EstimateValue(
    const RankingTask& task, std::span<const Candidate> pool) const {
  const auto features = Features(task, pool);
  return LinearValue(params_, StateFeatures(
                                  features, static_cast<int>(task.candidates.size())));
}

ExclusionDecision LinearSoftmaxPolicy::Exclude(const RankingTask& task,
                                               std::span<const Candidate> pool,
                                               DecisionMode mode,
                                               Rng& rng) const {
  const auto features = Features(task, pool);
  const auto log_probs = ExclusionLogProbs(params_, features);
  int action = 0;
  if (mode == DecisionMode::kSample) {
    action = SampleIndex(log_probs, rng);
  } else {
    for (std::size_t i = 1; i < log_probs.size(); ++i) {
      if (log_probs[i] >= log_probs[action]) action = static_cast<int>(i);
    }
  }
  ExclusionDecision decision;
  decision.excluded = pool[action].id;
  decision.log_prob = log_probs[action];
  decision.value_estimate = LinearValue(
      params_,
      StateFeatures(features, static_cast<int>(task.candidates.size())));
  return decision;
}

RankingDecision LinearSoftmaxPolicy::Rank(const RankingTask& task,
                                          DecisionMode mode, Rng& rng) const {
  const auto features = Features(task, task.candidates);
  const auto scores = LinearScores(params_, features);
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  if (mode == DecisionMode::kGreedy) {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
  } else {
    // Sequential Plackett-Luce draw: best candidate first.
    std::vector<int> pool = order;
    order.clear();
    std::vector<double> log_probs;
    while (!pool.empty()) {
      log_probs.clear();
      for (const int i : pool) log_probs.push_back(scores[i]);
      const double norm = LogSumExp(log_probs);
      for (auto& v : log_probs) v -= norm;
      const int pick = SampleIndex(log_probs, rng);
      order.push_back(pool[pick]);
      pool.erase(pool.begin() + pick);
    }
  }
  RankingDecision decision;
  for (const int i : order) decision.raw.matched.push_back(task.candidates[i].id);
  decision.log_prob = PermutationLogProb(params_, features, order);
  return decision;
}

std::unique_ptr<Policy> MakeBuiltinPolicy(const std::string& name) {
  if (name == "oracle") return std::make_unique<OraclePolicy>();
  if (name == "anti-oracle") return std::make_unique<AntiOraclePolicy>();
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "lexical") return std::make_unique<LexicalPolicy>();
  throw RankerError(ErrorCode::kBadConfig, "unknown policy '" + name + "'");
}

}  // namespace ranker
