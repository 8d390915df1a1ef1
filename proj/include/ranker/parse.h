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

// Mapping free-text model output back onto task candidates.
//
// Matching a line against a pool tries, in order:
//   1. exact id equality;
//   2. equality after NormalizeText() against a candidate id or text;
//   3. the highest token-F1 similarity between the line and a candidate's
//      text, accepted when it reaches the threshold (default 0.5).
// Ties at every stage go to the earliest candidate in pool order.
//
// List numbering is stripped from each answer line before matching. The
// prefix grammar, applied once after leading whitespace, is
//
//   prefix := digits ( "." | ")" | "-" ) space+
//           | ( "-" | "*" ) space+
//
// where digits is one or more ASCII digits and space is any ASCII
// whitespace. A line that consists only of a prefix keeps its text.

#ifndef RANKER_PARSE_H_
#define RANKER_PARSE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ranker/core.h"

namespace ranker {

inline constexpr double kDefaultMatchThreshold = 0.5;

// Content of the last well-formed <answer>...</answer> span, or the whole
// text with every <think>...</think> span removed when there is none.
std::string ExtractAnswer(std::string_view text);

// Reasoning inside the first <think>...</think> span, if any.
std::optional<std::string> ExtractThink(std::string_view text);

std::string_view StripListNumbering(std::string_view line);

std::optional<CandidateId> MatchCandidate(
    std::string_view line, std::span<const Candidate> pool,
    double threshold = kDefaultMatchThreshold);

RawRankingOutput ParseRanking(std::string_view text, const RankingTask& task,
                              double threshold = kDefaultMatchThreshold);

// Returns std::nullopt (no match) when no answer line names a pool member;
// the caller chooses the fallback. With several lines the first matching
// line wins.
std::optional<CandidateId> ParseExclusion(
    std::string_view text, std::span<const Candidate> pool,
    double threshold = kDefaultMatchThreshold);

}  // namespace ranker

#endif  // RANKER_PARSE_H_
