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

#include <array>
#include <cstddef>
#include <string_view>

namespace aigv {

// The four perceptual dimensions every rating, judgment and prediction is
// expressed in. The enum order is the canonical column order everywhere.
enum class Dimension { kStatic = 0, kTemporal = 1, kDynamic = 2, kTv = 3 };

inline constexpr std::size_t kNumDimensions = 4;
inline constexpr std::array<Dimension, kNumDimensions> kAllDimensions = {
    Dimension::kStatic, Dimension::kTemporal, Dimension::kDynamic, Dimension::kTv};

inline constexpr std::size_t index_of(Dimension d) { return static_cast<std::size_t>(d); }

// Wire tokens: static|temporal|dynamic|tv.
std::string_view to_string(Dimension d);
// Throws Error(kParseError) for anything but the four wire tokens.
Dimension parse_dimension(std::string_view token);

enum class QualityLevel { kBad = 0, kPoor = 1, kFair = 2, kGood = 3, kExcellent = 4 };

inline constexpr std::size_t kNumLevels = 5;

std::string_view to_string(QualityLevel level);
QualityLevel parse_quality_level(std::string_view token);

}  // namespace aigv
