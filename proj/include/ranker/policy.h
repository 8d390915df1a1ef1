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

// Decision policies for both decoding regimes. A policy either removes one
// candidate from a pool (iterative exclusion) or emits a full ranking in one
// shot (direct ranking).
//
// Policies are immutable once built; concurrent decisions on the same policy
// are safe as long as each caller supplies its own Rng.

#ifndef RANKER_POLICY_H_
#define RANKER_POLICY_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ranker/core.h"
#include "ranker/features.h"

namespace ranker {

enum class DecisionMode { kSample, kGreedy };

struct ExclusionDecision {
  CandidateId excluded;
  // Natural log of the probability assigned to `excluded`; 0 for
  // deterministic policies.
  double log_prob = 0.0;
  std::optional<std::string> raw_text;
  std::optional<double> value_estimate;
  // The policy's answer named no pool member and a uniform draw replaced it.
  bool fallback = false;
};

struct RankingDecision {
  RawRankingOutput raw;
  // Log-probability of the emitted order; 0 for deterministic policies.
  double log_prob = 0.0;
  std::optional<std::string> raw_text;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  // Throws kEmptyPool on an empty pool. The result is always a pool member.
  ExclusionDecision DecideExclusion(const RankingTask& task,
                                    std::span<const Candidate> pool,
                                    DecisionMode mode, Rng& rng) const;

  RankingDecision DecideRanking(const RankingTask& task, DecisionMode mode,
                                Rng& rng) const;

  // Baseline estimate of the return from a pool state; 0 unless learned.
  virtual double EstimateValue(const RankingTask& task,
                               std::span<const Candidate> pool) const;

 protected:
  virtual ExclusionDecision Exclude(const RankingTask& task,
                                    std::span<const Candidate> pool,
                                    DecisionMode mode, Rng& rng) const = 0;
  virtual RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                               Rng& rng) const = 0;
};

// Excludes a uniformly random negative while any remains, then positives.
class OraclePolicy : public Policy {
 public:
  std::string name() const override { return "oracle"; }

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;
};

// Mirror image of the oracle: positives leave the pool first.
class AntiOraclePolicy : public Policy {
 public:
  std::string name() const override { return "anti-oracle"; }

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;
};

// Uniform over the pool in both modes.
class RandomPolicy : public Policy {
 public:
  std::string name() const override { return "random"; }

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;
};

// Token-F1 similarity between query text and candidate text. Excludes the
// least similar candidate (the last one in pool order on ties) and ranks by
// descending similarity with a stable sort.
class LexicalPolicy : public Policy {
 public:
  std::string name() const override { return "lexical"; }

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;
};

struct PolicyParams {
  std::vector<double> weights;        // one per pairing feature
  double bias = 0.0;
  std::vector<double> value_weights;  // one per state feature

  static PolicyParams Zeros(int pairing_dim);

  int pairing_dim() const { return static_cast<int>(weights.size()); }
  bool operator==(const PolicyParams&) const = default;
};

// Relevance scores s(c) = w . phi(q, c) + b, one per matrix row.
std::vector<double> LinearScores(const PolicyParams& params,
                                 const FeatureMatrix& features);

// Exclusion distribution: softmax over -s(c), so the least relevant
// candidate is the most likely to leave the pool.
std::vector<double> ExclusionLogProbs(const PolicyParams& params,
                                      const FeatureMatrix& features);

// Plackett-Luce log-probability of a best-first order (row indices) under
// scores s(c): sum_j [s(o_j) - logsumexp(s over o_j..o_n)].
double PermutationLogProb(const PolicyParams& params,
                          const FeatureMatrix& features,
                          std::span<const int> order);

// Gradients of the two log-probabilities above with respect to the weights.
// The bias cancels in both softmaxes and has zero gradient.
std::vector<double> ExclusionLogProbGradient(const PolicyParams& params,
                                             const FeatureMatrix& features,
                                             int action);
std::vector<double> PermutationLogProbGradient(const PolicyParams& params,
                                               const FeatureMatrix& features,
                                               std::span<const int> order);

double LinearValue(const PolicyParams& params, std::span<const double> state);

// Trainable action-level policy: a linear score per (query, candidate) pair
// with a softmax over the pool. Sampling mode draws from the distribution;
// greedy mode takes the arg-max (exclusion: lowest score, last on ties;
// ranking: stable descending sort).
class LinearSoftmaxPolicy : public Policy {
 public:
  explicit LinearSoftmaxPolicy(PolicyParams params);

  std::string name() const override { return "linear"; }
  const PolicyParams& params() const { return params_; }

  double EstimateValue(const RankingTask& task,
                       std::span<const Candidate> pool) const override;

 protected:
  ExclusionDecision Exclude(const RankingTask& task,
                            std::span<const Candidate> pool, DecisionMode mode,
                            Rng& rng) const override;
  RankingDecision Rank(const RankingTask& task, DecisionMode mode,
                       Rng& rng) const override;

 private:
  FeatureMatrix Features(const RankingTask& task,
                         std::span<const Candidate> pool) const;

  PolicyParams params_;
};

// Samples an index from a log-probability vector.
int SampleIndex(std::span<const double> log_probs, Rng& rng);

// Builds one of the parameter-free policies by name: "oracle",
// "anti-oracle", "random", "lexical". Throws kBadConfig otherwise.
std::unique_ptr<Policy> MakeBuiltinPolicy(const std::string& name);

}  // namespace ranker

#endif  // RANKER_POLICY_H_
