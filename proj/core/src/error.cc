// Copyright 2026 The AIGV Bench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aigv/error.h"

namespace aigv {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFewerThanTwoRatings: return "FewerThanTwoRatings";
    case ErrorCode::kNoSurvivingRaters: return "NoSurvivingRaters";
    case ErrorCode::kInvalidScore: return "InvalidScore";
    case ErrorCode::kMissingVariant: return "MissingVariant";
    case ErrorCode::kGroupTooSmall: return "GroupTooSmall";
    case ErrorCode::kSampleLargerThanPool: return "SampleLargerThanPool";
    case ErrorCode::kEmptyJudgments: return "EmptyJudgments";
    case ErrorCode::kMissingPrediction: return "MissingPrediction";
    case ErrorCode::kUnknownVideo: return "UnknownVideo";
    case ErrorCode::kDegenerateConstantInput: return "DegenerateConstantInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kStageDisabled: return "StageDisabled";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kOutOfRangeSpec: return "OutOfRangeSpec";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTooFewItems: return "TooFewItems";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kNoTasksRemaining: return "NoTasksRemaining";
    case ErrorCode::kTaskNotAssigned: return "TaskNotAssigned";
    case ErrorCode::kInvalidChoice: return "InvalidChoice";
    case ErrorCode::kNotFound: return "NotFound";
  }
  return "Unknown";
}

bool is_io_error(ErrorCode code) { return code == ErrorCode::kIoFailure; }

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace aigv
