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

#include "ranker/thoughts.h"

#include <algorithm>
#include <numeric>

#include "ranker/errors.h"
#include "ranker/text.h"

namespace ranker {

void ThoughtStore::Add(std::string query, std::string reasoning) {
  entries_.push_back({std::move(query), std::move(reasoning)});
}

ThoughtStore ThoughtStore::FromTraces(std::span<const EpisodeTrace> traces) {
  ThoughtStore store;
  for (const auto& trace : traces) {
    std::string reasoning;
    for (const auto& step : trace.steps) {
      if (!step.reasoning || step.reasoning->empty()) continue;
      if (!reasoning.empty()) reasoning += '\n';
      reasoning += *step.reasoning;
    }
    if (!reasoning.empty()) store.Add(trace.query_text, std::move(reasoning));
  }
  return store;
}

std::vector<ThoughtEntry> ThoughtStore::Retrieve(std::string_view query,
                                                 int top_k) const {
  if (top_k < 1) {
    throw RankerError(ErrorCode::kBadConfig, "top_k must be at least 1");
  }
  std::vector<double> scores(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    scores[i] = TokenF1(query, entries_[i].query);
  }
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  std::vector<ThoughtEntry> out;
  for (std::size_t i = 0; i < order.size() && static_cast<int>(i) < top_k; ++i) {
    out.push_back(entries_[order[i]]);
  }
  return out;
}

std::string RenderThoughtPreamble(std::span<const ThoughtEntry> thoughts) {
  if (thoughts.empty()) return {};
  std::string out =
      "Here are reasoning examples from similar queries. Use them as a "
      "template for your own reasoning.";
  for (const auto& t : thoughts) {
    out += "\n\nQuery: ";
    out += t.query;
    out += "\nReasoning: ";
    out += t.reasoning;
  }
  return out;
}

}  // namespace ranker
