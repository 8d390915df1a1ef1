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

#include "ranker/errors.h"

namespace ranker {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateCandidateId:
      return "DuplicateCandidateId";
    case ErrorCode::kEmptyCandidateId:
      return "EmptyCandidateId";
    case ErrorCode::kEmptyPositives:
      return "EmptyPositives";
    case ErrorCode::kPositiveNotInCandidates:
      return "PositiveNotInCandidates";
    case ErrorCode::kSizeMismatch:
      return "SizeMismatch";
    case ErrorCode::kFeatureDimensionMismatch:
      return "FeatureDimensionMismatch";
    case ErrorCode::kBadScenario:
      return "BadScenario";
    case ErrorCode::kPositivesMissing:
      return "PositivesMissing";
    case ErrorCode::kEmptyBatch:
      return "EmptyBatch";
    case ErrorCode::kBadK:
      return "BadK";
    case ErrorCode::kUnknownCandidate:
      return "UnknownCandidate";
    case ErrorCode::kBadWeights:
      return "BadWeights";
    case ErrorCode::kEmptyPool:
      return "EmptyPool";
    case ErrorCode::kRemoteFailure:
      return "RemoteFailure";
    case ErrorCode::kNoMatch:
      return "NoMatch";
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kNoTasks:
      return "NoTasks";
    case ErrorCode::kNonFiniteLoss:
      return "NonFiniteLoss";
    case ErrorCode::kBadConfig:
      return "BadConfig";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kValidationError:
      return "ValidationError";
    case ErrorCode::kIOFailure:
      return "IOFailure";
    case ErrorCode::kSchemaVersionMismatch:
      return "SchemaVersionMismatch";
  }
  return "Unknown";
}

RankerError::RankerError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace ranker
