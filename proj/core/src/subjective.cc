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

#include "aigv/subjective.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "aigv/error.h"

namespace aigv {

namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Scores must already be in a canonical order for bitwise reproducibility.
Moments moments(const std::vector<int>& scores) {
  double sum = 0.0;
  for (const int s : scores) sum += s;
  const double mean = sum / static_cast<double>(scores.size());
  double ss = 0.0;
  for (const int s : scores) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / static_cast<double>(scores.size() - 1))};
}

void check_score(const RawRating& r) {
  if (r.score < 1 || r.score > 5) {
    throw Error(ErrorCode::kInvalidScore, "score " + std::to_string(r.score) + " by " +
                                              r.subject_id + " for " + r.video_id +
                                              " is outside 1..5");
  }
}

}  // namespace

SubjectStats subject_stats(std::span<const RawRating> ratings, const std::string& subject_id,
                           Dimension dimension) {
  std::vector<std::pair<std::string, int>> mine;
  for (const auto& r : ratings) {
    if (r.subject_id == subject_id && r.dimension == dimension) {
      check_score(r);
      mine.emplace_back(r.video_id, r.score);
    }
  }
  if (mine.size() < 2) {
    throw Error(ErrorCode::kFewerThanTwoRatings,
                subject_id + " has " + std::to_string(mine.size()) + " rating(s) in " +
                    std::string(to_string(dimension)));
  }
  std::sort(mine.begin(), mine.end());
  std::vector<int> scores;
  scores.reserve(mine.size());
  for (const auto& [video, score] : mine) scores.push_back(score);
  const Moments m = moments(scores);
  return {subject_id, dimension, m.mean, m.stddev, static_cast<int>(scores.size())};
}

std::vector<MosRecord> compute_mos(std::span<const RawRating> ratings,
                                   ConstantRaterPolicy policy,
                                   std::vector<std::string>* warnings) {
  // (subject, dimension) -> video -> score, ordered for determinism.
  std::map<std::pair<std::string, Dimension>, std::map<std::string, int>> by_subject;
  std::set<std::pair<std::string, Dimension>> items;
  for (const auto& r : ratings) {
    check_score(r);
    auto& videos = by_subject[{r.subject_id, r.dimension}];
    if (!videos.emplace(r.video_id, r.score).second) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate rating by " + r.subject_id + " for " +
                                                   r.video_id + "/" +
                                                   std::string(to_string(r.dimension)));
    }
    items.emplace(r.video_id, r.dimension);
  }

  struct Accumulator {
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::pair<std::string, Dimension>, Accumulator> acc;

  for (const auto& [key, videos] : by_subject) {
    const auto& [subject, dimension] = key;
    if (videos.size() < 2) {
      throw Error(ErrorCode::kFewerThanTwoRatings,
                  subject + " has " + std::to_string(videos.size()) + " rating(s) in " +
                      std::string(to_string(dimension)));
    }
    std::vector<int> scores;
    scores.reserve(videos.size());
    for (const auto& [video, score] : videos) scores.push_back(score);
    const Moments m = moments(scores);

    if (m.stddev == 0.0) {
      if (policy == ConstantRaterPolicy::kDrop) {
        if (warnings) {
          warnings->push_back("subject " + subject + " gave constant ratings in " +
                              std::string(to_string(dimension)) + "; dropped");
        }
        continue;
      }
      for (const auto& [video, score] : videos) {
        auto& a = acc[{video, dimension}];
        a.sum += 50.0;
        ++a.count;
      }
      continue;
    }

    for (const auto& [video, score] : videos) {
      const double z = (score - m.mean) / m.stddev;
      const double rescaled = std::clamp(100.0 * (z + 3.0) / 6.0, 0.0, 100.0);
      auto& a = acc[{video, dimension}];
      a.sum += rescaled;
      ++a.count;
    }
  }

  std::vector<MosRecord> out;
  out.reserve(items.size());
  for (const auto& [video, dimension] : items) {
    const auto it = acc.find({video, dimension});
    if (it == acc.end() || it->second.count == 0) {
      throw Error(ErrorCode::kNoSurvivingRaters,
                  video + "/" + std::string(to_string(dimension)) +
                      " has no raters left after dropping constant raters");
    }
    out.push_back({video, dimension, it->second.sum / it->second.count, it->second.count});
  }
  return out;
}

}  // namespace aigv
