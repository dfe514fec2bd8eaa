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

// Text interchange formats: CSV tables and JSONL record streams. Readers
// throw Error(kParseError) with a 1-based line number; writers produce
// '\n'-terminated lines and are byte-stable for identical input.

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aigv/metrics.h"
#include "aigv/pairstudy.h"
#include "aigv/subjective.h"
#include "aigv/taxonomy.h"

namespace aigv {

// subject_id,video_id,dimension,score
std::vector<RawRating> ratings_from_csv(std::string_view text);
std::string ratings_to_csv(std::span<const RawRating> ratings);

// video_id,dimension,mos,rater_count with mos at 6 decimals. Prediction files
// share the layout; rater_count may be absent there.
std::vector<MosRecord> mos_from_csv(std::string_view text);
std::string mos_to_csv(std::span<const MosRecord> records);

// Splits a MOS or prediction table into one score vector per dimension, each
// ordered by video_id. Errors: kDuplicateRecord.
std::map<Dimension, ScoreVector> score_vectors(std::span<const MosRecord> records);

std::vector<PromptRecord> prompts_from_jsonl(std::string_view text);
std::string prompts_to_jsonl(std::span<const PromptRecord> prompts);

// {"prompt_id", "spatial", "temporal", "attribute", "complexity",
//  "non_stop_count"}; an empty aspect is written as the string "null".
std::string categories_to_jsonl(const std::map<std::string, PromptCategories>& categories);
std::map<std::string, PromptCategories> categories_from_jsonl(std::string_view text);

std::vector<VideoMeta> meta_from_jsonl(std::string_view text);
std::string meta_to_jsonl(std::span<const VideoMeta> meta);

std::vector<PairSpec> pairs_from_jsonl(std::string_view text);
std::string pairs_to_jsonl(std::span<const PairSpec> pairs);

std::vector<PairJudgment> judgments_from_jsonl(std::string_view text);
std::string judgment_to_json_line(const PairJudgment& judgment);
std::string judgments_to_jsonl(std::span<const PairJudgment> judgments);

std::vector<PairVerdict> verdicts_from_jsonl(std::string_view text);
std::string verdicts_to_jsonl(std::span<const PairVerdict> verdicts);

// model_id,dimension,category,wins,losses,ties,win_rate
std::string win_rates_to_csv(const WinRateTable& table);

// {"static": {"srcc": ..., "plcc": ..., "krcc": ..., "pair_acc": ...}, ...}
// with every value at 6 decimals; pair_acc only when present.
std::string metric_report_to_json(const MetricReport& report);

std::string rating_to_csv_line(const RawRating& rating);

}  // namespace aigv
