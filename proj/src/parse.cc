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

#include "ranker/parse.h"

#include <cctype>
#include <set>
#include <vector>

#include "ranker/text.h"

namespace ranker {

namespace {

constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";
constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (true) {
    const auto pos = text.find('\n');
    lines.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return lines;
}

}  // namespace

std::string ExtractAnswer(std::string_view text) {
  std::optional<std::string_view> last;
  std::size_t from = 0;
  while (true) {
    const auto open = text.find(kAnswerOpen, from);
    if (open == std::string_view::npos) break;
    const auto body = open + kAnswerOpen.size();
    const auto close = text.find(kAnswerClose, body);
    if (close == std::string_view::npos) break;
    // A nested opener means the first one was never closed; restart there.
    const auto reopen = text.find(kAnswerOpen, body);
    if (reopen != std::string_view::npos && reopen < close) {
      from = reopen;
      continue;
    }
    last = text.substr(body, close - body);
    from = close + kAnswerClose.size();
  }
  if (last) return std::string(*last);

  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find(kThinkOpen, pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find(kThinkClose, open + kThinkOpen.size());
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    pos = close + kThinkClose.size();
  }
  out.append(text.substr(pos));
  return out;
}

std::optional<std::string> ExtractThink(std::string_view text) {
  const auto open = text.find(kThinkOpen);
  if (open == std::string_view::npos) return std::nullopt;
  const auto body = open + kThinkOpen.size();
  const auto close = text.find(kThinkClose, body);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(Trim(text.substr(body, close - body)));
}

std::string_view StripListNumbering(std::string_view line) {
  std::string_view rest = line;
  while (!rest.empty() && IsSpace(rest.front())) rest.remove_prefix(1);
  std::size_t i = 0;
  if (!rest.empty() && IsDigit(rest[0])) {
    while (i < rest.size() && IsDigit(rest[i])) ++i;
    if (i == rest.size()) return line;
    const char mark = rest[i];
    if (mark != '.' && mark != ')' && mark != '-') return line;
    ++i;
  } else if (!rest.empty() && (rest[0] == '-' || rest[0] == '*')) {
    i = 1;
  } else {
    return line;
  }
  const std::size_t marker_end = i;
  while (i < rest.size() && IsSpace(rest[i])) ++i;
  if (i == marker_end || i == rest.size()) return line;
  return rest.substr(i);
}

std::optional<CandidateId> MatchCandidate(std::string_view line,
                                          std::span<const Candidate> pool,
                                          double threshold) {
  const std::string_view trimmed = Trim(line);
  for (const auto& c : pool) {
    if (c.id == trimmed) return c.id;
  }
  const std::string normalized = NormalizeText(trimmed);
  if (normalized.empty()) return std::nullopt;
  for (const auto& c : pool) {
    if (NormalizeText(c.id) == normalized) return c.id;
  }
  for (const auto& c : pool) {
    if (NormalizeText(c.text) == normalized) return c.id;
  }
  const Candidate* best = nullptr;
  double best_score = -1.0;
  for (const auto& c : pool) {
    const double score = TokenF1(trimmed, c.text);
    if (score > best_score) {
      best_score = score;
      best = &c;
    }
  }
  if (best != nullptr && best_score >= threshold) return best->id;
  return std::nullopt;
}

RawRankingOutput ParseRanking(std::string_view text, const RankingTask& task,
                              double threshold) {
  RawRankingOutput out;
  std::set<CandidateId> seen;
  const std::string answer = ExtractAnswer(text);
  for (const auto line : SplitLines(answer)) {
    if (Trim(line).empty()) continue;
    const auto match =
        MatchCandidate(StripListNumbering(line), task.candidates, threshold);
    if (!match) {
      ++out.hallucinated_count;
    } else if (!seen.insert(*match).second) {
      ++out.duplicates_dropped;
    } else {
      out.matched.push_back(*match);
    }
  }
  return out;
}

std::optional<CandidateId> ParseExclusion(std::string_view text,
                                          std::span<const Candidate> pool,
                                          double threshold) {
  const std::string answer = ExtractAnswer(text);
  for (const auto line : SplitLines(answer)) {
    if (Trim(line).empty()) continue;
    if (auto match =
            MatchCandidate(StripListNumbering(line), pool, threshold)) {
      return match;
    }
  }
  return std::nullopt;
}

}  // namespace ranker
