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

#ifndef RANKER_ERRORS_H_
#define RANKER_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ranker {

enum class ErrorCode {
  // Task validation.
  kDuplicateCandidateId,
  kEmptyCandidateId,
  kEmptyPositives,
  kPositiveNotInCandidates,
  kSizeMismatch,
  kFeatureDimensionMismatch,
  kBadScenario,
  // Metrics / rewards.
  kPositivesMissing,
  kEmptyBatch,
  kBadK,
  kUnknownCandidate,
  kBadWeights,
  // Policies / engines.
  kEmptyPool,
  kRemoteFailure,
  kNoMatch,
  // Reinforcement learning.
  kLengthMismatch,
  kNoTasks,
  kNonFiniteLoss,
  kBadConfig,
  // Task and trace files.
  kShapeMismatch,
  kParseError,
  kValidationError,
  kIOFailure,
  kSchemaVersionMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and the Python bindings) can dispatch without parsing messages.
class RankerError : public std::runtime_error {
 public:
  RankerError(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ranker

#endif  // RANKER_ERRORS_H_
