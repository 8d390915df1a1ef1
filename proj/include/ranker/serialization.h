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

// JSON encodings of the library's value types, plus the versioned trace and
// checkpoint files built on them. Doubles are written in shortest
// round-trip form, so decode(encode(x)) == x bit for bit.

#ifndef RANKER_SERIALIZATION_H_
#define RANKER_SERIALIZATION_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranker/core.h"
#include "ranker/policy.h"
#include "ranker/rl.h"

namespace ranker {

void to_json(nlohmann::json& j, const Candidate& c);
void from_json(const nlohmann::json& j, Candidate& c);
void to_json(nlohmann::json& j, const RoutingWeights& w);
void from_json(const nlohmann::json& j, RoutingWeights& w);
void to_json(nlohmann::json& j, const ScenarioSpec& s);
void from_json(const nlohmann::json& j, ScenarioSpec& s);
// `id` and `query_features` are omitted when empty.
void to_json(nlohmann::json& j, const RankingTask& t);
void from_json(const nlohmann::json& j, RankingTask& t);
void to_json(nlohmann::json& j, const EpisodeStep& s);
void from_json(const nlohmann::json& j, EpisodeStep& s);
void to_json(nlohmann::json& j, const EpisodeTrace& t);
void from_json(const nlohmann::json& j, EpisodeTrace& t);
void to_json(nlohmann::json& j, const PPOConfig& c);
void from_json(const nlohmann::json& j, PPOConfig& c);
void to_json(nlohmann::json& j, const PolicyParams& p);
void from_json(const nlohmann::json& j, PolicyParams& p);
void to_json(nlohmann::json& j, const TrainerCheckpoint& c);
void from_json(const nlohmann::json& j, TrainerCheckpoint& c);

// Partial config update: only keys present in `j` are changed.
void MergePpoConfig(const nlohmann::json& j, PPOConfig& config);

inline constexpr int kTraceFileVersion = 1;

// Line 1: {"schema":"ranker-traces","version":1}; then one trace per line.
// Each record also carries the exclusion order for readers that do not
// want to walk the steps. Throws kIOFailure.
void ExportTraces(std::span<const EpisodeTrace> traces,
                  const std::filesystem::path& path);
// Throws kIOFailure, kSchemaVersionMismatch and kParseError.
std::vector<EpisodeTrace> ImportTraces(const std::filesystem::path& path);

// Throws kIOFailure, kSchemaVersionMismatch and kParseError.
void SaveCheckpoint(const TrainerCheckpoint& checkpoint,
                    const std::filesystem::path& path);
TrainerCheckpoint LoadCheckpoint(const std::filesystem::path& path);

// Reads policy parameters from either a checkpoint file or a bare params
// object ({"weights", "bias", "value_weights"}).
PolicyParams LoadPolicyParams(const std::filesystem::path& path);

}  // namespace ranker

#endif  // RANKER_SERIALIZATION_H_
