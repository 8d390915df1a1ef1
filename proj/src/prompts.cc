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

#include "ranker/prompts.h"

#include <array>

namespace ranker {

namespace {

constexpr std::string_view kFormatTail =
    "Show your work in <think> </think> tags. And return the final answer in "
    "<answer> </answer> tags.";

constexpr std::string_view kRecommendationSystem =
    "You are a helpful assistant that ranks products by how likely the user "
    "is to buy them, based on their previous purchase history.";
constexpr std::string_view kRoutingSystem =
    "You are a helpful assistant that selects the most suitable large "
    "language model (LLM) for a given query, based on performance and token "
    "cost.";
constexpr std::string_view kPassageSystem =
    "You are a helpful assistant that ranks passages by relevance to a given "
    "query.";

std::string Join(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (const auto part : parts) out += part;
  return out;
}

PromptTemplate Make(PromptStyle style, ScenarioKind scenario) {
  PromptTemplate t;
  t.style = style;
  t.scenario = scenario;
  const bool direct = style == PromptStyle::kDirect;
  switch (scenario) {
    case ScenarioKind::kRecommendation:
      t.system = kRecommendationSystem;
      t.body = Join(
          {"I've purchased the following items in the past, in order:\n"
           "{history}\n"
           "Now there are {count} candidate items that I might purchase "
           "next:\n{items}\n",
           direct ? "Please rank these items by measuring the possibilities "
                    "that I would like to buy next most, according to my "
                    "purchase history. Please think step by step.\nSplit your "
                    "output with line break. You MUST rank the given "
                    "candidate items. You can not generate items that are "
                    "not in the given candidate list. "
                  : "Please select the one item that is least likely to be "
                    "my next purchase, according to my purchase history. "
                    "Please think step by step.\nYou MUST choose exactly one "
                    "item from the given candidate list.\nYou can NOT "
                    "generate or reference items that are not in the given "
                    "candidate list. ",
           kFormatTail});
      break;
    case ScenarioKind::kRouting:
      t.system = kRoutingSystem;
      t.body = Join(
          {"{items}\n## Here is a query: {query} and LLM candidates: "
           "{names}. Please think step by step according to the description "
           "of each query and LLM, and evaluate from the perspectives of "
           "performance in answering the query and token price",
           direct ? ". Rank all LLMs from most suitable to least suitable "
                    "for this query. Return the LLM names in order, one per "
                    "line. Split your output with line break. You MUST rank "
                    "all LLMs from the candidate list. You can not generate "
                    "content that is not in the given candidate list.\n"
                  : ", and select the least likely LLM from the LLM "
                    "candidates. Only return the LLM name corresponding to "
                    "the LLM. You MUST choose one LLM name from LLM "
                    "candidates. You can not generate content that are not "
                    "in the given LLM candidates.\n",
           kFormatTail});
      break;
    case ScenarioKind::kPassage:
    case ScenarioKind::kSynthetic:
      t.system = kPassageSystem;
      t.body = Join(
          {"## Here is a query: {query}\n{items}\n"
           "Please think step by step according to the content of each "
           "passage and how well it supports or relates to the query. ",
           direct ? "Rank all passages from most relevant to least relevant. "
                    "Return the passage IDs in order, one per line (e.g.,\n"
                    "passage 1\npassage 3\npassage 2). You MUST rank all "
                    "passages from the candidate list. You can not generate "
                    "content that is not in the given candidate list.\n"
                  : "Select the least likely passage from the candidate "
                    "list. Only return the passage ID corresponding to the "
                    "excluded passage (e.g., \"passage 3\"). You MUST choose "
                    "one passage from the candidate list. You can not "
                    "generate content that is not in the given candidate "
                    "list.\n",
           kFormatTail});
      break;
  }
  return t;
}

const std::array<PromptTemplate, 8> kTemplates = {
    Make(PromptStyle::kDirect, ScenarioKind::kRecommendation),
    Make(PromptStyle::kDirect, ScenarioKind::kRouting),
    Make(PromptStyle::kDirect, ScenarioKind::kPassage),
    Make(PromptStyle::kDirect, ScenarioKind::kSynthetic),
    Make(PromptStyle::kIterative, ScenarioKind::kRecommendation),
    Make(PromptStyle::kIterative, ScenarioKind::kRouting),
    Make(PromptStyle::kIterative, ScenarioKind::kPassage),
    Make(PromptStyle::kIterative, ScenarioKind::kSynthetic),
};

// Single pass so that substituted text is never rescanned for placeholders.
std::string Substitute(std::string_view body,
                       std::initializer_list<
                           std::pair<std::string_view, std::string_view>>
                           values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = body.find('}', open);
    if (close == std::string_view::npos) break;
    const auto key = body.substr(open + 1, close - open - 1);
    out.append(body.substr(pos, open - pos));
    bool replaced = false;
    for (const auto& [name, value] : values) {
      if (name == key) {
        out.append(value);
        replaced = true;
        break;
      }
    }
    if (!replaced) out.append(body.substr(open, close - open + 1));
    pos = close + 1;
  }
  out.append(body.substr(pos));
  return out;
}

}  // namespace

const PromptTemplate& DefaultTemplate(PromptStyle style,
                                      ScenarioKind scenario) {
  for (const auto& t : kTemplates) {
    if (t.style == style && t.scenario == scenario) return t;
  }
  return kTemplates.front();
}

std::string DisplayString(ScenarioKind scenario, const Candidate& candidate) {
  if (scenario == ScenarioKind::kRecommendation && !candidate.text.empty()) {
    return candidate.text;
  }
  if (candidate.text.empty()) return candidate.id;
  return candidate.id + ": " + candidate.text;
}

ChatPrompt RenderPrompt(const PromptTemplate& prompt, const RankingTask& task,
                        std::span<const Candidate> pool,
                        std::string_view preamble) {
  std::string items;
  std::string names;
  for (const auto& c : pool) {
    if (!items.empty()) items += '\n';
    items += DisplayString(prompt.scenario, c);
    if (!names.empty()) names += ", ";
    names += c.id;
  }
  const std::string count = std::to_string(pool.size());
  const std::string body =
      Substitute(prompt.body, {{"count", count},
                               {"history", task.query_text},
                               {"query", task.query_text},
                               {"names", names},
                               {"items", items}});

  ChatPrompt chat;
  chat.system = prompt.system;
  if (!preamble.empty()) {
    chat.user = std::string(preamble);
    chat.user += "\n\n";
  }
  chat.user += body;
  return chat;
}

}  // namespace ranker
