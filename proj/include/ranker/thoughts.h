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

#ifndef RANKER_THOUGHTS_H_
#define RANKER_THOUGHTS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ranker/core.h"

namespace ranker {

struct ThoughtEntry {
  std::string query;
  std::string reasoning;

  bool operator==(const ThoughtEntry&) const = default;
};

// Reasoning traces from past episodes, retrieved by lexical similarity of
// their queries.
class ThoughtStore {
 public:
  void Add(std::string query, std::string reasoning);

  // One entry per trace that carries reasoning text; step reasonings are
  // joined with newlines.
  static ThoughtStore FromTraces(std::span<const EpisodeTrace> traces);

  // Up to top_k entries by descending TokenF1(query, entry.query); ties keep
  // insertion order. Throws kBadConfig when top_k < 1.
  std::vector<ThoughtEntry> Retrieve(std::string_view query, int top_k) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<ThoughtEntry>& entries() const { return entries_; }

 private:
  std::vector<ThoughtEntry> entries_;
};

// Prompt preamble carrying retrieved entries; empty when there are none.
std::string RenderThoughtPreamble(std::span<const ThoughtEntry> thoughts);

}  // namespace ranker

#endif  // RANKER_THOUGHTS_H_
