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

#include "aigv/dimension.h"

#include <string>

#include "aigv/error.h"

namespace aigv {

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kStatic: return "static";
    case Dimension::kTemporal: return "temporal";
    case Dimension::kDynamic: return "dynamic";
    case Dimension::kTv: return "tv";
  }
  return "?";
}

Dimension parse_dimension(std::string_view token) {
  for (const Dimension d : kAllDimensions) {
    if (to_string(d) == token) return d;
  }
  throw Error(ErrorCode::kParseError, "unknown dimension '" + std::string(token) + "'");
}

std::string_view to_string(QualityLevel level) {
  switch (level) {
    case QualityLevel::kBad: return "bad";
    case QualityLevel::kPoor: return "poor";
    case QualityLevel::kFair: return "fair";
    case QualityLevel::kGood: return "good";
    case QualityLevel::kExcellent: return "excellent";
  }
  return "?";
}

QualityLevel parse_quality_level(std::string_view token) {
  for (int i = 0; i < static_cast<int>(kNumLevels); ++i) {
    const auto level = static_cast<QualityLevel>(i);
    if (to_string(level) == token) return level;
  }
  throw Error(ErrorCode::kParseError, "unknown quality level '" + std::string(token) + "'");
}

}  // namespace aigv
