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

#ifndef RANKER_TEXT_H_
#define RANKER_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace ranker {

// Lowercase ASCII alphanumeric runs; every other byte separates tokens.
std::vector<std::string> Tokenize(std::string_view text);

// Tokens joined by single spaces. Two strings that differ only in case,
// whitespace or punctuation normalize to the same value.
std::string NormalizeText(std::string_view text);

// Multiset token-overlap F1 between two strings, in [0, 1]. Zero when either
// side has no tokens.
double TokenF1(std::string_view a, std::string_view b);

std::string_view Trim(std::string_view text);

}  // namespace ranker

#endif  // RANKER_TEXT_H_
