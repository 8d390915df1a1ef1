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

#ifndef RANKER_FEATURES_H_
#define RANKER_FEATURES_H_

#include <span>
#include <string_view>
#include <vector>

#include "ranker/core.h"

namespace ranker {

struct QueryContext {
  std::string_view text;
  std::span<const double> features;
};

inline QueryContext QueryOf(const RankingTask& task) {
  return {task.query_text, task.query_features};
}

// phi(q, c) = [c.features, c.features * q.features (when both present),
//              TokenF1(q.text, c.text), 1].
// A task source with feature dimension d yields 2d + 2 entries; a text-only
// source yields 2. Throws kFeatureDimensionMismatch when the query and
// candidate vectors disagree in length.
std::vector<double> PairingFeatures(const QueryContext& query,
                                    const Candidate& candidate);

// Length of PairingFeatures for the task's candidates.
int PairingDimension(const RankingTask& task);

// Row-major |pool| x PairingDimension matrix.
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols,
            static_cast<std::size_t>(cols)};
  }
  bool operator==(const FeatureMatrix&) const = default;
};

FeatureMatrix PairingMatrix(const QueryContext& query,
                            std::span<const Candidate> pool);

// State summary for the value baseline: [mean_c phi(q, c) over the pool,
// |pool| / |D|, 1]. Length PairingDimension + 2.
std::vector<double> StateFeatures(const FeatureMatrix& pool_features,
                                  int full_size);

}  // namespace ranker

#endif  // RANKER_FEATURES_H_
