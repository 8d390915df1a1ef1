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


#include "ranker/serialization.h"

#include <fstream>

#include "ranker/engines.h"
#include "ranker/errors.h"

namespace ranker {

using nlohmann::json;

namespace {

constexpr char kTraceSchema[] = "ranker-traces";
constexpr char kCheckpointSchema[] = "ranker-checkpoint";

template <typename T>
void ReadOptional(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    it->get_to(out);
  }
}

void CheckHeader(const json& header, const char* schema, int version,
                 const std::string& where) {
  if (!header.is_object() || header.value("schema", std::string()) != schema) {
    throw RankerError(ErrorCode::kSchemaVersionMismatch,
                      where + ": not a " + schema + " file");
  }
  const int found = header.value("version", -1);
  if (found != version) {
    throw RankerError(ErrorCode::kSchemaVersionMismatch,
                      where + ": " + schema + " version " +
                          std::to_string(found) + ", expected " +
                          std::to_string(version));
  }
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ignored;
    std::filesystem::create_directories(path.parent_path(), ignored);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure,
                      "cannot write " + path.string());
  }
  return out;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw RankerError(ErrorCode::kIOFailure, "cannot read " + path.string());
  }
  return in;
}

json ParseJson(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw RankerError(ErrorCode::kParseError, where + ": " + e.what());
  }
}

}  // namespace

void to_json(json& j, const Candidate& c) {
  j = {{"id", c.id}, {"text", c.text}};
  if (!c.features.empty()) j["features"] = c.features;
}

void from_json(const json& j, Candidate& c) {
  j.at("id").get_to(c.id);
  c.text = j.value("text", std::string());
  c.features.clear();
  ReadOptional(j, "features", c.features);
}

void to_json(json& j, const RoutingWeights& w) {
  j = {{"effectiveness", w.effectiveness}, {"cost", w.cost}};
}

void from_json(const json& j, RoutingWeights& w) {
  if (j.is_array()) {
    if (j.size() != 2) {
      throw RankerError(ErrorCode::kBadWeights,
                        "routing_weights: expected [alpha, beta]");
    }
    j[0].get_to(w.effectiveness);
    j[1].get_to(w.cost);
    return;
  }
  j.at("effectiveness").get_to(w.effectiveness);
  j.at("cost").get_to(w.cost);
}

void to_json(json& j, const ScenarioSpec& s) {
  j = {{"kind", ScenarioKindName(s.kind)},
       {"candidate_size", s.candidate_size},
       {"positive_count", s.positive_count}};
  if (s.routing_weights) j["routing_weights"] = *s.routing_weights;
  if (s.seed != 0) j["seed"] = s.seed;
}

void from_json(const json& j, ScenarioSpec& s) {
  s = ScenarioSpec();
  s.kind = ParseScenarioKind(j.at("kind").get<std::string>());
  j.at("candidate_size").get_to(s.candidate_size);
  j.at("positive_count").get_to(s.positive_count);
  if (auto it = j.find("routing_weights"); it != j.end() && !it->is_null()) {
    s.routing_weights = it->get<RoutingWeights>();
  }
  ReadOptional(j, "seed", s.seed);
}

void to_json(json& j, const RankingTask& t) {
  j = json::object();
  if (!t.id.empty()) j["id"] = t.id;
  j["query_text"] = t.query_text;
  if (!t.query_features.empty()) j["query_features"] = t.query_features;
  j["candidates"] = t.candidates;
  j["positives"] = t.positives;
  j["scenario"] = t.scenario;
}

void from_json(const json& j, RankingTask& t) {
  t = RankingTask();
  ReadOptional(j, "id", t.id);
  j.at("query_text").get_to(t.query_text);
  ReadOptional(j, "query_features", t.query_features);
  j.at("candidates").get_to(t.candidates);
  j.at("positives").get_to(t.positives);
  j.at("scenario").get_to(t.scenario);
}

void to_json(json& j, const EpisodeStep& s) {
  j = {{"pool", s.pool},         {"excluded", s.excluded},
       {"reward", s.reward},     {"log_prob", s.log_prob},
       {"value", s.value},       {"fallback", s.fallback}};
  if (s.reasoning) j["reasoning"] = *s.reasoning;
}

void from_json(const json& j, EpisodeStep& s) {
  s = EpisodeStep();
  j.at("pool").get_to(s.pool);
  j.at("excluded").get_to(s.excluded);
  j.at("reward").get_to(s.reward);
  ReadOptional(j, "log_prob", s.log_prob);
  ReadOptional(j, "value", s.value);
  ReadOptional(j, "fallback", s.fallback);
  if (auto it = j.find("reasoning"); it != j.end() && !it->is_null()) {
    s.reasoning = it->get<std::string>();
  }
}

void to_json(json& j, const EpisodeTrace& t) {
  j = {{"task_ref", t.task_ref},
       {"query_text", t.query_text},
       {"exclusion_order", t.ExclusionOrder()},
       {"steps", t.steps}};
}

void from_json(const json& j, EpisodeTrace& t) {
  t = EpisodeTrace();
  ReadOptional(j, "task_ref", t.task_ref);
  ReadOptional(j, "query_text", t.query_text);
  j.at("steps").get_to(t.steps);
}

void to_json(json& j, const PPOConfig& c) {
  j = {{"clip_epsilon", c.clip_epsilon},
       {"gamma", c.gamma},
       {"lam", c.lam},
       {"kl_coeff", c.kl_coeff},
       {"actor_lr", c.actor_lr},
       {"critic_lr", c.critic_lr},
       {"ppo_epochs", c.ppo_epochs},
       {"minibatch_size", c.minibatch_size},
       {"episodes_per_iteration", c.episodes_per_iteration},
       {"iterations", c.iterations},
       {"normalize_advantages", c.normalize_advantages},
       {"seed", c.seed}};
}

void MergePpoConfig(const json& j, PPOConfig& c) {
  ReadOptional(j, "clip_epsilon", c.clip_epsilon);
  ReadOptional(j, "gamma", c.gamma);
  ReadOptional(j, "lam", c.lam);
  ReadOptional(j, "kl_coeff", c.kl_coeff);
  ReadOptional(j, "actor_lr", c.actor_lr);
  ReadOptional(j, "critic_lr", c.critic_lr);
  ReadOptional(j, "ppo_epochs", c.ppo_epochs);
  ReadOptional(j, "minibatch_size", c.minibatch_size);
  ReadOptional(j, "episodes_per_iteration", c.episodes_per_iteration);
  ReadOptional(j, "iterations", c.iterations);
  ReadOptional(j, "normalize_advantages", c.normalize_advantages);
  ReadOptional(j, "seed", c.seed);
}

void from_json(const json& j, PPOConfig& c) {
  c = PPOConfig();
  MergePpoConfig(j, c);
}

void to_json(json& j, const PolicyParams& p) {
  j = {{"weights", p.weights},
       {"bias", p.bias},
       {"value_weights", p.value_weights}};
}

void from_json(const json& j, PolicyParams& p) {
  j.at("weights").get_to(p.weights);
  p.bias = j.value("bias", 0.0);
  if (auto it = j.find("value_weights"); it != j.end()) {
    it->get_to(p.value_weights);
  } else {
    p.value_weights.assign(p.weights.size() + 2, 0.0);
  }
}

void to_json(json& j, const TrainerCheckpoint& c) {
  j = {{"schema", kCheckpointSchema},
       {"version", TrainerCheckpoint::kVersion},
       {"engine", EngineKindName(c.engine)},
       {"iteration", c.iteration},
       {"config", c.config},
       {"params", c.params},
       {"reference", c.reference},
       {"rng_state", c.rng_state}};
}

void from_json(const json& j, TrainerCheckpoint& c) {
  CheckHeader(j, kCheckpointSchema, TrainerCheckpoint::kVersion,
              "checkpoint");
  c = TrainerCheckpoint();
  c.engine = ParseEngineKind(j.at("engine").get<std::string>());
  j.at("iteration").get_to(c.iteration);
  j.at("config").get_to(c.config);
  j.at("params").get_to(c.params);
  j.at("reference").get_to(c.reference);
  j.at("rng_state").get_to(c.rng_state);
}

void ExportTraces(std::span<const EpisodeTrace> traces,
                  const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << json{{"schema", kTraceSchema}, {"version", kTraceFileVersion}}.dump()
      << '\n';
  for (const auto& trace : traces) out << json(trace).dump() << '\n';
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure, "short write to " + path.string());
  }
}

std::vector<EpisodeTrace> ImportTraces(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw RankerError(ErrorCode::kSchemaVersionMismatch,
                      path.string() + ": missing trace header");
  }
  CheckHeader(ParseJson(line, path.string() + ":1"), kTraceSchema,
              kTraceFileVersion, path.string());
  std::vector<EpisodeTrace> traces;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_number);
    const json record = ParseJson(line, where);
    try {
      traces.push_back(record.get<EpisodeTrace>());
    } catch (const json::exception& e) {
      throw RankerError(ErrorCode::kParseError, where + ": " + e.what());
    }
  }
  return traces;
}

void SaveCheckpoint(const TrainerCheckpoint& checkpoint,
                    const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << json(checkpoint).dump(2) << '\n';
  if (!out) {
    throw RankerError(ErrorCode::kIOFailure, "short write to " + path.string());
  }
}

TrainerCheckpoint LoadCheckpoint(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const json j = ParseJson(text, path.string());
  try {
    return j.get<TrainerCheckpoint>();
  } catch (const json::exception& e) {
    throw RankerError(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

PolicyParams LoadPolicyParams(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const json j = ParseJson(text, path.string());
  try {
    if (j.contains("schema")) return j.get<TrainerCheckpoint>().params;
    return j.get<PolicyParams>();
  } catch (const json::exception& e) {
    throw RankerError(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

}  // namespace ranker
