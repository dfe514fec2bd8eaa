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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aigv/dimension.h"
#include "aigv/taxonomy.h"

namespace aigv {

struct VideoMeta {
  std::string video_id;
  std::string model_id;
  std::string prompt_id;
  int variant = 1;
  bool open_source = true;
  int frames = 1;
  double fps = 8.0;
  int width = 0;
  int height = 0;
};

// A video pair in canonical orientation: video_a < video_b.
struct PairSpec {
  std::string pair_id;
  std::string prompt_id;
  std::string video_a;
  std::string video_b;

  bool operator==(const PairSpec&) const = default;
};

enum class Choice { kA, kB };
std::string_view to_string(Choice c);
Choice parse_choice(std::string_view token);  // "A" or "B", else kInvalidChoice
inline Choice flipped(Choice c) { return c == Choice::kA ? Choice::kB : Choice::kA; }

// One annotator's preference in one dimension. `choice` is always stored in
// canonical orientation; `displayed_swap` records whether the interface
// showed video_b on the left.
struct PairJudgment {
  std::string pair_id;
  std::string annotator_id;
  Dimension dimension = Dimension::kStatic;
  Choice choice = Choice::kA;
  bool displayed_swap = false;
  std::string timestamp;
};

enum class Winner { kA, kB, kTie };
std::string_view to_string(Winner w);
Winner parse_winner(std::string_view token);

struct PairVerdict {
  std::string pair_id;
  Dimension dimension = Dimension::kStatic;
  Winner winner = Winner::kTie;
  int votes_a = 0;
  int votes_b = 0;

  bool operator==(const PairVerdict&) const = default;
};

struct WinRateRow {
  std::string model_id;
  Dimension dimension = Dimension::kStatic;
  std::string category;  // "all", a subcategory name, "null", or a complexity label
  double wins = 0.0;
  double losses = 0.0;
  int ties = 0;
  double win_rate = 0.0;  // (wins + 0.5 ties) / (wins + losses + ties)
};

using WinRateTable = std::vector<WinRateRow>;

struct VideoGroup {
  std::string prompt_id;
  std::vector<VideoMeta> videos;  // sorted by video_id
};

// Groups videos by prompt. Every model seen in `meta` must contribute exactly
// `open_variants` (open-source) or `closed_variants` (closed-source) videos
// to every prompt. Errors: kMissingVariant, kDuplicateRecord.
std::map<std::string, VideoGroup> build_groups(std::span<const VideoMeta> meta, int open_variants,
                                               int closed_variants);

// Stable identifier for a canonical pair: "p" + 16 hex digits of
// FNV-1a(video_a + '\x1f' + video_b).
std::string make_pair_id(std::string_view video_a, std::string_view video_b);

// All n(n-1)/2 canonical pairs, listed lexicographically by (video_a,
// video_b). Errors: kGroupTooSmall, kDuplicateRecord.
std::vector<PairSpec> enumerate_pairs(const VideoGroup& group);

// Uniform sample without replacement by partial Fisher-Yates driven by
// xoshiro256** seeded with `seed`; returned in draw order.
// Errors: kSampleLargerThanPool.
std::vector<PairSpec> sample_pairs(std::span<const PairSpec> pool, std::size_t n,
                                   std::uint64_t seed);

// Judgments must all refer to the same pair and dimension. Strict majority
// wins; an even split is a tie. Errors: kEmptyJudgments, kParseError.
PairVerdict majority_vote(std::span<const PairJudgment> judgments);

// Groups by (pair_id, dimension) and votes; sorted by pair_id then dimension.
std::vector<PairVerdict> aggregate_verdicts(std::span<const PairJudgment> judgments);

// Mean credit over the verdicts in `dimension`: 1 for a correct prediction,
// 0 for a wrong one, 0.5 for any tie verdict.
// Errors: kMissingPrediction, kEmptyJudgments (no verdicts in dimension).
double pair_accuracy(const std::unordered_map<std::string, Choice>& predicted,
                     std::span<const PairVerdict> verdicts, Dimension dimension);

enum class GroupBy { kAll, kSpatial, kTemporal, kAttribute, kComplexity };
std::string_view to_string(GroupBy g);
GroupBy parse_group_by(std::string_view token);

// Per-model win/loss/tie tallies. With a category grouping, a verdict counts
// once for every subcategory of its prompt ("null" when the prompt has none).
// `dimension` restricts to one dimension; nullopt tallies each separately.
// Rows are sorted by (dimension, category, model_id).
// Errors: kUnknownVideo, kNotFound (prompt without categories).
WinRateTable win_rates(std::span<const PairVerdict> verdicts, std::span<const PairSpec> pairs,
                       std::span<const VideoMeta> meta,
                       const std::map<std::string, PromptCategories>* categories,
                       GroupBy group_by, std::optional<Dimension> dimension);

}  // namespace aigv
