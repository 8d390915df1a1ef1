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

// Chat prompts for the two decoding regimes, one pair per scenario.
//
// Template bodies use {placeholders}:
//   {history}       query text (recommendation: serialized purchase history)
//   {query}         query text (routing, passage, synthetic)
//   {count}         number of candidates in the offered pool
//   {items}         one display string per line
//   {names}         comma-separated candidate ids (routing only)
// A candidate's display string is its text for recommendation tasks and
// "<id>: <text>" otherwise; each pool member's display string appears exactly
// once in the rendered prompt.

#ifndef RANKER_PROMPTS_H_
#define RANKER_PROMPTS_H_

#include <span>
#include <string>
#include <string_view>

#include "ranker/core.h"

namespace ranker {

enum class PromptStyle { kDirect, kIterative };

struct PromptTemplate {
  PromptStyle style = PromptStyle::kDirect;
  ScenarioKind scenario = ScenarioKind::kPassage;
  std::string system;
  std::string body;
};

const PromptTemplate& DefaultTemplate(PromptStyle style, ScenarioKind scenario);

struct ChatPrompt {
  std::string system;
  std::string user;

  bool operator==(const ChatPrompt&) const = default;
};

std::string DisplayString(ScenarioKind scenario, const Candidate& candidate);

// `preamble`, when non-empty, is placed ahead of the rendered body (used for
// retrieved thought templates).
ChatPrompt RenderPrompt(const PromptTemplate& prompt, const RankingTask& task,
                        std::span<const Candidate> pool,
                        std::string_view preamble = {});

}  // namespace ranker

#endif  // RANKER_PROMPTS_H_
