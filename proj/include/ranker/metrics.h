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

// Ranking evaluators with binary relevance: reciprocal rank, nDCG@k, and the
// overlap F1 between an emitted candidate list and the true candidate set.

#ifndef RANKER_METRICS_H_
#define RANKER_METRICS_H_

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ranker/core.h"

namespace ranker {

struct MetricReport {
  double mrr = 0.0;
  std::map<int, double> ndcg_at;
  int n_tasks = 0;

  bool operator==(const MetricReport&) const = default;
};

// 1 / rank of the best-ranked positive. Throws kPositivesMissing when
// positives is empty or names an id the ranking does not contain.
double ReciprocalRank(const Ranking& ranking, const IdSet& positives);

struct RankedInstance {
  Ranking ranking;
  IdSet positives;
};

// Throws kEmptyBatch on an empty list.
double MeanMrr(std::span<const RankedInstance> results);

// Binary-gain DCG@k (gain 1/log2(rank + 1)) over the ideal DCG@k.
// Throws kBadK unless 1 <= k <= ranking size.
double NdcgAtK(const Ranking& ranking, const IdSet& positives, int k);

// Precision counts hallucinations and dropped duplicates as wrong emissions;
// recall is over the full candidate set.
double OverlapF1(const RawRankingOutput& raw, int candidate_count);
double OverlapF1(const RawRankingOutput& raw, const RankingTask& task);

// Aggregates MRR and nDCG at each requested cutoff. Cutoffs larger than a
// ranking are clamped to its size. Throws kEmptyBatch.
MetricReport Evaluate(std::span<const RankedInstance> results,
                      std::span<const int> ks);

}  // namespace ranker

#endif  // RANKER_METRICS_H_
