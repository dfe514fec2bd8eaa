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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aigv/dimension.h"

namespace aigv {

struct ScoreEntry {
  std::string video_id;
  double value = 0.0;
};
using ScoreVector = std::vector<ScoreEntry>;

// 1-based fractional ranks: tied values share the mean of their positions.
std::vector<double> rank(std::span<const double> values);

// All correlation functions require equal lengths (kLengthMismatch), at
// least two items and a non-constant vector on both sides
// (kDegenerateConstantInput).

// Spearman. Without ties this is 1 - 6 sum(d^2) / (N (N^2 - 1)); with ties
// it is the Pearson correlation of the fractional ranks.
double srcc(std::span<const double> gt, std::span<const double> pred);

// Pearson linear correlation.
double plcc(std::span<const double> gt, std::span<const double> pred);

enum class KendallVariant {
  kTauA,  // (C - D) / (N (N - 1) / 2); tied pairs count as neither
  kTauB,  // (C - D) / sqrt((n0 - n1) (n0 - n2))
};

// Kendall rank correlation in O(N log N) (Knight's merge-sort method).
double krcc(std::span<const double> gt, std::span<const double> pred,
            KendallVariant variant = KendallVariant::kTauA);

// Overloads on id-tagged vectors. The id sequences must be identical.
double srcc(const ScoreVector& gt, const ScoreVector& pred);
double plcc(const ScoreVector& gt, const ScoreVector& pred);
double krcc(const ScoreVector& gt, const ScoreVector& pred,
            KendallVariant variant = KendallVariant::kTauA);

struct MetricRow {
  double srcc = 0.0;
  double plcc = 0.0;
  double krcc = 0.0;
  std::optional<double> pair_acc;
};

using MetricReport = std::map<Dimension, MetricRow>;

// Computes the three correlations for every dimension present in `gt`.
// Each dimension must be present in `pred` with the same id sequence.
MetricReport evaluate_scores(const std::map<Dimension, ScoreVector>& pred,
                             const std::map<Dimension, ScoreVector>& gt,
                             KendallVariant variant = KendallVariant::kTauA);

// Reorders `pred` to follow the id order of `gt`. Both must hold the same
// id set. Errors: kLengthMismatch, kMissingPrediction.
ScoreVector align_to(const ScoreVector& gt, const ScoreVector& pred);

}  // namespace aigv
