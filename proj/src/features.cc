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

#include "ranker/features.h"

#include "ranker/errors.h"
#include "ranker/text.h"

namespace ranker {

std::vector<double> PairingFeatures(const QueryContext& query,
                                    const Candidate& candidate) {
  const auto& own = candidate.features;
  const bool with_product = !own.empty() && !query.features.empty();
  if (with_product && own.size() != query.features.size()) {
    throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                      "candidate '" + candidate.id + "' has " +
                          std::to_string(own.size()) +
                          " features, query has " +
                          std::to_string(query.features.size()));
  }
  std::vector<double> phi;
  phi.reserve(2 * own.size() + 2);
  phi.insert(phi.end(), own.begin(), own.end());
  if (with_product) {
    for (std::size_t i = 0; i < own.size(); ++i) {
      phi.push_back(own[i] * query.features[i]);
    }
  }
  phi.push_back(TokenF1(query.text, candidate.text));
  phi.push_back(1.0);
  return phi;
}

int PairingDimension(const RankingTask& task) {
  const std::size_t d =
      task.candidates.empty() ? 0 : task.candidates.front().features.size();
  const bool with_product = d > 0 && !task.query_features.empty();
  return static_cast<int>(d + (with_product ? d : 0) + 2);
}

FeatureMatrix PairingMatrix(const QueryContext& query,
                            std::span<const Candidate> pool) {
  FeatureMatrix m;
  m.rows = static_cast<int>(pool.size());
  for (const auto& candidate : pool) {
    auto phi = PairingFeatures(query, candidate);
    if (m.cols == 0) {
      m.cols = static_cast<int>(phi.size());
      m.data.reserve(static_cast<std::size_t>(m.rows) * m.cols);
    } else if (static_cast<int>(phi.size()) != m.cols) {
      throw RankerError(ErrorCode::kFeatureDimensionMismatch,
                        "candidate '" + candidate.id +
                            "' has a different feature dimension");
    }
    m.data.insert(m.data.end(), phi.begin(), phi.end());
  }
  return m;
}

std::vector<double> StateFeatures(const FeatureMatrix& pool_features,
                                  int full_size) {
  std::vector<double> psi(static_cast<std::size_t>(pool_features.cols) + 2, 0.0);
  for (int r = 0; r < pool_features.rows; ++r) {
    const auto row = pool_features.row(r);
    for (int c = 0; c < pool_features.cols; ++c) psi[c] += row[c];
  }
  if (pool_features.rows > 0) {
    for (int c = 0; c < pool_features.cols; ++c) psi[c] /= pool_features.rows;
  }
  psi[pool_features.cols] =
      full_size > 0 ? static_cast<double>(pool_features.rows) / full_size : 0.0;
  psi[pool_features.cols + 1] = 1.0;
  return psi;
}

}  // namespace ranker
