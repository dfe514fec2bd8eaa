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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aigv {

// Every failure the library reports carries one of these codes. The names
// are stable and appear verbatim in CLI diagnostics and HTTP error bodies.
enum class ErrorCode {
  // subjective
  kFewerThanTwoRatings,
  kNoSurvivingRaters,
  kInvalidScore,
  // pairstudy
  kMissingVariant,
  kGroupTooSmall,
  kSampleLargerThanPool,
  kEmptyJudgments,
  kMissingPrediction,
  kUnknownVideo,
  // metrics
  kDegenerateConstantInput,
  kLengthMismatch,
  // assessor
  kShapeMismatch,
  kTooFewFrames,
  kOutOfRange,
  kStageDisabled,
  kEmptyDataset,
  // synthgen
  kOutOfRangeSpec,
  // store
  kBadMagic,
  kTruncatedPayload,
  kVersionMismatch,
  kTooFewItems,
  kIoFailure,
  kParseError,
  kDuplicateRecord,
  // annotate
  kNoTasksRemaining,
  kTaskNotAssigned,
  kInvalidChoice,
  kNotFound,
};

std::string_view error_code_name(ErrorCode code);

// True for codes that describe a file-system problem rather than bad data.
bool is_io_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace aigv
