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

#include "ranker/metrics.h"

#include <algorithm>
#include <cmath>

#include "ranker/errors.h"

namespace ranker {

namespace {

void CheckPositives(const Ranking& ranking, const IdSet& positives) {
  if (positives.empty()) {
    throw RankerError(ErrorCode::kPositivesMissing, "positives: empty");
  }
  for (const auto& id : positives) {
    if (!ranking.rank_of().count(id)) {
      throw RankerError(ErrorCode::kPositivesMissing,
                        "positive '" + id + "' is not in the ranking");
    }
  }
}

double Discount(int rank) { return 1.0 / std::log2(rank + 1.0); }

// Compensated (Neumaier) running sum, so that a mean of identical values
// reproduces the value itself.
class Accumulator {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    compensation_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x
                                                   : (x - t) + sum_;
    sum_ = t;
  }
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace

double ReciprocalRank(const Ranking& ranking, const IdSet& positives) {
  CheckPositives(ranking, positives);
  int best = ranking.size();
  for (const auto& id : positives) best = std::min(best, ranking.RankOf(id));
  return 1.0 / best;
}

double MeanMrr(std::span<const RankedInstance> results) {
  if (results.empty()) {
    throw RankerError(ErrorCode::kEmptyBatch, "no ranked instances");
  }
  Accumulator sum;
  for (const auto& instance : results) {
    sum.Add(ReciprocalRank(instance.ranking, instance.positives));
  }
  return sum.Total() / static_cast<double>(results.size());
}

double NdcgAtK(const Ranking& ranking, const IdSet& positives, int k) {
  if (k < 1 || k > ranking.size()) {
    throw RankerError(ErrorCode::kBadK,
                      "k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(ranking.size()) + "]");
  }
  CheckPositives(ranking, positives);
  double dcg = 0.0;
  for (const auto& id : positives) {
    const int rank = ranking.RankOf(id);
    if (rank <= k) dcg += Discount(rank);
  }
  double ideal = 0.0;
  const int relevant = std::min<int>(k, static_cast<int>(positives.size()));
  for (int rank = 1; rank <= relevant; ++rank) ideal += Discount(rank);
  return dcg / ideal;
}

double OverlapF1(const RawRankingOutput& raw, int candidate_count) {
  const double matched = static_cast<double>(raw.matched.size());
  if (matched == 0.0 || candidate_count <= 0) return 0.0;
  const double emitted =
      matched + raw.hallucinated_count + raw.duplicates_dropped;
  // 2PR / (P + R) with P = m / emitted and R = m / n, as one division.
  return 2.0 * matched / (emitted + candidate_count);
}

double OverlapF1(const RawRankingOutput& raw, const RankingTask& task) {
  return OverlapF1(raw, static_cast<int>(task.candidates.size()));
}

MetricReport Evaluate(std::span<const RankedInstance> results,
                      std::span<const int> ks) {
  MetricReport report;
  report.mrr = MeanMrr(results);
  report.n_tasks = static_cast<int>(results.size());
  for (const int k : ks) {
    if (k < 1) {
      throw RankerError(ErrorCode::kBadK, "k=" + std::to_string(k));
    }
    Accumulator sum;
    for (const auto& instance : results) {
      const int cutoff = std::clamp(k, 1, instance.ranking.size());
      sum.Add(NdcgAtK(instance.ranking, instance.positives, cutoff));
    }
    report.ndcg_at[k] = sum.Total() / static_cast<double>(results.size());
  }
  return report;
}

}  // namespace ranker
