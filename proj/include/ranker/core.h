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

// Domain types shared by every module: candidates, tasks, rankings,
// exclusion episodes and training configuration.
//
// Rank convention: ranks are 1-based and rank 1 is best. In an iterative
// exclusion episode over n candidates the candidate excluded at step k
// (1-based) receives rank n - k + 1, so the first exclusion is the worst
// (rank n) and the sole survivor is the best (rank 1). The best-first order
// is therefore the reversed exclusion sequence.

#ifndef RANKER_CORE_H_
#define RANKER_CORE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ranker {

using Rng = std::mt19937_64;
using CandidateId = std::string;
using IdSet = std::set<CandidateId>;

struct Candidate {
  CandidateId id;
  std::string text;
  // Empty when the task source is text-only.
  std::vector<double> features;

  bool operator==(const Candidate&) const = default;
};

enum class ScenarioKind { kRecommendation, kRouting, kPassage, kSynthetic };

std::string_view ScenarioKindName(ScenarioKind kind);
// Throws RankerError(kBadScenario) on an unknown name.
ScenarioKind ParseScenarioKind(std::string_view name);

struct RoutingWeights {
  double effectiveness = 0.5;  // alpha
  double cost = 0.5;           // beta

  bool operator==(const RoutingWeights&) const = default;
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kSynthetic;
  int candidate_size = 10;
  int positive_count = 1;
  // Present iff kind == kRouting.
  std::optional<RoutingWeights> routing_weights;
  std::uint64_t seed = 0;

  bool operator==(const ScenarioSpec&) const = default;
};

// Named task shapes: "movie", "music", "game" (recommendation, 20 candidates),
// "performance", "balance", "cost" (routing, 10 candidates), "passage5",
// "passage7", "passage9", and "synthetic" (10 candidates). All have a single
// positive. Throws RankerError(kBadScenario) for other names.
ScenarioSpec NamedScenario(std::string_view name, std::uint64_t seed = 0);
std::vector<std::string> NamedScenarioNames();

struct RankingTask {
  // Stable identifier used by episode traces; may be empty for ad-hoc tasks.
  std::string id;
  std::string query_text;
  std::vector<double> query_features;
  std::vector<Candidate> candidates;
  IdSet positives;
  ScenarioSpec scenario;

  bool operator==(const RankingTask&) const = default;

  bool IsPositive(const CandidateId& candidate) const {
    return positives.count(candidate) > 0;
  }
  int NegativeCount() const {
    return static_cast<int>(candidates.size() - positives.size());
  }
};

// Returns the task unchanged when every invariant holds; otherwise throws
// RankerError naming the offending field (kDuplicateCandidateId,
// kEmptyCandidateId, kEmptyPositives, kPositiveNotInCandidates, kSizeMismatch,
// kFeatureDimensionMismatch, kBadScenario).
const RankingTask& ValidateTask(const RankingTask& task);

// The subset of validation the engines need: a non-empty pool of unique,
// non-empty ids with consistent feature dimensions. Throws like ValidateTask.
void ValidateCandidatePool(std::span<const Candidate> candidates);

class Ranking {
 public:
  Ranking() = default;

  // Throws RankerError(kDuplicateCandidateId / kEmptyCandidateId).
  static Ranking FromOrder(std::vector<CandidateId> best_first);

  // Builds the ranking for an exclusion sequence: excluded[k-1] gets rank
  // n - k + 1 and the best-first order is the reversed sequence.
  static Ranking FromExclusionOrder(std::span<const CandidateId> excluded);

  const std::vector<CandidateId>& order() const { return order_; }
  const std::map<CandidateId, int>& rank_of() const { return rank_of_; }
  int size() const { return static_cast<int>(order_.size()); }

  // Throws RankerError(kUnknownCandidate) when the id is not ranked.
  int RankOf(const CandidateId& id) const;

  // True iff the order is a permutation of the task's candidate ids.
  bool IsPermutationOf(std::span<const Candidate> candidates) const;

  bool operator==(const Ranking&) const = default;

 private:
  std::vector<CandidateId> order_;
  std::map<CandidateId, int> rank_of_;
};

// Pre-validation output of one-shot decoding.
struct RawRankingOutput {
  std::vector<CandidateId> matched;
  int hallucinated_count = 0;
  int duplicates_dropped = 0;

  bool operator==(const RawRankingOutput&) const = default;
};

struct EpisodeStep {
  std::vector<CandidateId> pool;
  CandidateId excluded;
  double reward = 0.0;
  // Natural log of the probability the policy assigned to the exclusion;
  // 0 for deterministic or forced steps.
  double log_prob = 0.0;
  double value = 0.0;
  std::optional<std::string> reasoning;
  // Set when a malformed policy answer was replaced by a random exclusion.
  bool fallback = false;

  bool operator==(const EpisodeStep&) const = default;
};

struct EpisodeTrace {
  std::string task_ref;
  std::string query_text;
  std::vector<EpisodeStep> steps;

  bool operator==(const EpisodeTrace&) const = default;

  std::vector<CandidateId> ExclusionOrder() const;
};

// Checks the structural episode invariants against the originating pool:
// pools shrink by exactly the previous exclusion, the final pool is a
// singleton, and the exclusions form a permutation of the candidates.
bool IsValidTrace(const EpisodeTrace& trace,
                  std::span<const Candidate> candidates);

struct PPOConfig {
  double clip_epsilon = 0.2;
  double gamma = 0.9;
  double lam = 0.95;
  double kl_coeff = 1e-4;
  double actor_lr = 1e-2;
  double critic_lr = 2e-2;
  int ppo_epochs = 4;
  int minibatch_size = 64;
  int episodes_per_iteration = 32;
  int iterations = 200;
  bool normalize_advantages = true;
  std::uint64_t seed = 42;

  bool operator==(const PPOConfig&) const = default;
};

// Throws RankerError(kBadConfig) when a field is out of range.
void ValidateConfig(const PPOConfig& config);

struct RewardBreakdown {
  double r_a = 0.0;  // ranking reward (evaluator value)
  double r_g = 0.0;  // format penalty, overlap F1 minus one
  double r_d = 0.0;  // r_a + r_g

  bool operator==(const RewardBreakdown&) const = default;
};

}  // namespace ranker

#endif  // RANKER_CORE_H_
