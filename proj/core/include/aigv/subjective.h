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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aigv/dimension.h"

namespace aigv {

// One subject's 1-5 Likert judgment of one video in one dimension.
struct RawRating {
  std::string subject_id;
  std::string video_id;
  Dimension dimension = Dimension::kStatic;
  int score = 0;
};

struct SubjectStats {
  std::string subject_id;
  Dimension dimension = Dimension::kStatic;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, N - 1 divisor
  int count = 0;
};

struct MosRecord {
  std::string video_id;
  Dimension dimension = Dimension::kStatic;
  double mos = 0.0;  // [0, 100]
  int rater_count = 0;
};

// What to do with a subject whose ratings in a dimension are all equal, so
// that the z-score is undefined.
enum class ConstantRaterPolicy {
  kDrop,        // the subject contributes nothing in that dimension
  kMapToFifty,  // every rescaled score of that subject becomes 50
};

// Throws Error(kFewerThanTwoRatings) when the subject has < 2 ratings in the
// dimension.
SubjectStats subject_stats(std::span<const RawRating> ratings, const std::string& subject_id,
                           Dimension dimension);

// Per subject and dimension: z = (r - mean) / stddev, z' = 100 (z + 3) / 6
// clipped to [0, 100]. MOS is the mean z' over contributing subjects.
//
// Records are returned sorted by (video_id, dimension). The result does not
// depend on the order of `ratings`. Dropped constant raters are reported
// through `warnings` when it is non-null.
//
// Errors: kInvalidScore, kDuplicateRecord, kFewerThanTwoRatings,
// kNoSurvivingRaters.
std::vector<MosRecord> compute_mos(std::span<const RawRating> ratings,
                                   ConstantRaterPolicy policy = ConstantRaterPolicy::kDrop,
                                   std::vector<std::string>* warnings = nullptr);

// subjects x dimensions x videos for a complete study.
inline std::size_t rating_count(std::span<const RawRating> ratings) { return ratings.size(); }

}  // namespace aigv
