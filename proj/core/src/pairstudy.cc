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

#include "aigv/pairstudy.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/text.h"

namespace aigv {

std::string_view to_string(Choice c) { return c == Choice::kA ? "A" : "B"; }

Choice parse_choice(std::string_view token) {
  if (token == "A") return Choice::kA;
  if (token == "B") return Choice::kB;
  throw Error(ErrorCode::kInvalidChoice, "choice must be A or B, got '" + std::string(token) + "'");
}

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::kA: return "A";
    case Winner::kB: return "B";
    case Winner::kTie: return "Tie";
  }
  return "?";
}

Winner parse_winner(std::string_view token) {
  if (token == "A") return Winner::kA;
  if (token == "B") return Winner::kB;
  if (token == "Tie") return Winner::kTie;
  throw Error(ErrorCode::kParseError, "winner must be A, B or Tie, got '" + std::string(token) + "'");
}

std::string_view to_string(GroupBy g) {
  switch (g) {
    case GroupBy::kAll: return "all";
    case GroupBy::kSpatial: return "spatial";
    case GroupBy::kTemporal: return "temporal";
    case GroupBy::kAttribute: return "attribute";
    case GroupBy::kComplexity: return "complexity";
  }
  return "?";
}

GroupBy parse_group_by(std::string_view token) {
  for (const GroupBy g : {GroupBy::kAll, GroupBy::kSpatial, GroupBy::kTemporal,
                          GroupBy::kAttribute, GroupBy::kComplexity}) {
    if (to_string(g) == token) return g;
  }
  throw Error(ErrorCode::kParseError, "unknown grouping '" + std::string(token) + "'");
}

std::map<std::string, VideoGroup> build_groups(std::span<const VideoMeta> meta, int open_variants,
                                               int closed_variants) {
  std::map<std::string, bool> model_is_open;
  std::set<std::string> prompts;
  std::set<std::tuple<std::string, std::string, int>> seen;
  std::map<std::pair<std::string, std::string>, int> counts;
  std::map<std::string, VideoGroup> groups;

  for (const auto& v : meta) {
    if (!seen.emplace(v.model_id, v.prompt_id, v.variant).second) {
      throw Error(ErrorCode::kDuplicateRecord, "model " + v.model_id + " prompt " + v.prompt_id +
                                                   " variant " + std::to_string(v.variant) +
                                                   " appears twice");
    }
    model_is_open.emplace(v.model_id, v.open_source);
    prompts.insert(v.prompt_id);
    ++counts[{v.model_id, v.prompt_id}];
    auto& group = groups[v.prompt_id];
    group.prompt_id = v.prompt_id;
    group.videos.push_back(v);
  }

  for (const auto& prompt : prompts) {
    for (const auto& [model, is_open] : model_is_open) {
      const int expected = is_open ? open_variants : closed_variants;
      const auto it = counts.find({model, prompt});
      const int have = it == counts.end() ? 0 : it->second;
      if (have != expected) {
        throw Error(ErrorCode::kMissingVariant,
                    "model " + model + " has " + std::to_string(have) + " video(s) for prompt " +
                        prompt + ", expected " + std::to_string(expected));
      }
    }
  }

  for (auto& [prompt, group] : groups) {
    std::sort(group.videos.begin(), group.videos.end(),
              [](const VideoMeta& a, const VideoMeta& b) { return a.video_id < b.video_id; });
  }
  return groups;
}

std::string make_pair_id(std::string_view video_a, std::string_view video_b) {
  std::string key;
  key.reserve(video_a.size() + video_b.size() + 1);
  key.append(video_a);
  key.push_back('\x1f');
  key.append(video_b);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "p%016llx",
                static_cast<unsigned long long>(fnv1a64(key)));
  return buf;
}

std::vector<PairSpec> enumerate_pairs(const VideoGroup& group) {
  std::vector<std::string> ids;
  ids.reserve(group.videos.size());
  for (const auto& v : group.videos) ids.push_back(v.video_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::kDuplicateRecord, "duplicate video id in group " + group.prompt_id);
  }
  if (ids.size() < 2) {
    throw Error(ErrorCode::kGroupTooSmall,
                "group " + group.prompt_id + " has " + std::to_string(ids.size()) + " video(s)");
  }
  std::vector<PairSpec> pairs;
  pairs.reserve(ids.size() * (ids.size() - 1) / 2);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      pairs.push_back({make_pair_id(ids[i], ids[j]), group.prompt_id, ids[i], ids[j]});
    }
  }
  return pairs;
}

std::vector<PairSpec> sample_pairs(std::span<const PairSpec> pool, std::size_t n,
                                   std::uint64_t seed) {
  if (n > pool.size()) {
    throw Error(ErrorCode::kSampleLargerThanPool, "requested " + std::to_string(n) +
                                                      " pairs from a pool of " +
                                                      std::to_string(pool.size()));
  }
  // Shuffle indices rather than the specs themselves.
  std::vector<std::uint32_t> index(pool.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<std::uint32_t>(i);
  Rng rng(seed);
  partial_shuffle(std::span<std::uint32_t>(index), n, rng);
  std::vector<PairSpec> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[index[i]]);
  return out;
}

PairVerdict majority_vote(std::span<const PairJudgment> judgments) {
  if (judgments.empty()) throw Error(ErrorCode::kEmptyJudgments, "no judgments to aggregate");
  PairVerdict v;
  v.pair_id = judgments.front().pair_id;
  v.dimension = judgments.front().dimension;
  for (const auto& j : judgments) {
    if (j.pair_id != v.pair_id || j.dimension != v.dimension) {
      throw Error(ErrorCode::kParseError, "majority_vote expects judgments of one pair and dimension");
    }
    (j.choice == Choice::kA ? v.votes_a : v.votes_b) += 1;
  }
  v.winner = v.votes_a > v.votes_b   ? Winner::kA
             : v.votes_b > v.votes_a ? Winner::kB
                                     : Winner::kTie;
  return v;
}

std::vector<PairVerdict> aggregate_verdicts(std::span<const PairJudgment> judgments) {
  std::map<std::pair<std::string, Dimension>, std::vector<PairJudgment>> grouped;
  for (const auto& j : judgments) grouped[{j.pair_id, j.dimension}].push_back(j);
  std::vector<PairVerdict> out;
  out.reserve(grouped.size());
  for (const auto& [key, group] : grouped) out.push_back(majority_vote(group));
  return out;
}

double pair_accuracy(const std::unordered_map<std::string, Choice>& predicted,
                     std::span<const PairVerdict> verdicts, Dimension dimension) {
  double credit = 0.0;
  std::size_t total = 0;
  for (const auto& v : verdicts) {
    if (v.dimension != dimension) continue;
    const auto it = predicted.find(v.pair_id);
    if (it == predicted.end()) {
      throw Error(ErrorCode::kMissingPrediction, "no prediction for pair " + v.pair_id);
    }
    ++total;
    if (v.winner == Winner::kTie) {
      credit += 0.5;
    } else if ((v.winner == Winner::kA) == (it->second == Choice::kA)) {
      credit += 1.0;
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyJudgments,
                "no verdicts in dimension " + std::string(to_string(dimension)));
  }
  return credit / static_cast<double>(total);
}

WinRateTable win_rates(std::span<const PairVerdict> verdicts, std::span<const PairSpec> pairs,
                       std::span<const VideoMeta> meta,
                       const std::map<std::string, PromptCategories>* categories,
                       GroupBy group_by, std::optional<Dimension> dimension) {
  std::unordered_map<std::string, const VideoMeta*> video_by_id;
  for (const auto& v : meta) video_by_id.emplace(v.video_id, &v);
  std::unordered_map<std::string, const PairSpec*> pair_by_id;
  for (const auto& p : pairs) pair_by_id.emplace(p.pair_id, &p);

  auto model_of = [&](const std::string& video) -> const VideoMeta& {
    const auto it = video_by_id.find(video);
    if (it == video_by_id.end()) throw Error(ErrorCode::kUnknownVideo, "unknown video " + video);
    return *it->second;
  };

  auto categories_of = [&](const PairSpec& pair) -> std::vector<std::string> {
    if (group_by == GroupBy::kAll) return {"all"};
    if (categories == nullptr) {
      throw Error(ErrorCode::kNotFound, "grouping by category needs prompt categories");
    }
    const auto it = categories->find(pair.prompt_id);
    if (it == categories->end()) {
      throw Error(ErrorCode::kNotFound, "no categories for prompt " + pair.prompt_id);
    }
    const PromptCategories& c = it->second;
    if (group_by == GroupBy::kComplexity) return {std::string(to_string(c.complexity))};
    const auto& set = group_by == GroupBy::kSpatial    ? c.spatial
                      : group_by == GroupBy::kTemporal ? c.temporal
                                                       : c.attribute;
    if (set.empty()) return {"null"};
    return {set.begin(), set.end()};
  };

  struct Tally {
    double wins = 0.0;
    double losses = 0.0;
    int ties = 0;
  };
  std::map<std::tuple<Dimension, std::string, std::string>, Tally> tallies;

  for (const auto& v : verdicts) {
    if (dimension && v.dimension != *dimension) continue;
    const auto pit = pair_by_id.find(v.pair_id);
    if (pit == pair_by_id.end()) {
      throw Error(ErrorCode::kUnknownVideo, "verdict for unknown pair " + v.pair_id);
    }
    const PairSpec& pair = *pit->second;
    const std::string& model_a = model_of(pair.video_a).model_id;
    const std::string& model_b = model_of(pair.video_b).model_id;
    for (const auto& category : categories_of(pair)) {
      auto& ta = tallies[{v.dimension, category, model_a}];
      auto& tb = tallies[{v.dimension, category, model_b}];
      switch (v.winner) {
        case Winner::kA:
          ta.wins += 1.0;
          tb.losses += 1.0;
          break;
        case Winner::kB:
          tb.wins += 1.0;
          ta.losses += 1.0;
          break;
        case Winner::kTie:
          ta.ties += 1;
          tb.ties += 1;
          break;
      }
    }
  }

  WinRateTable table;
  table.reserve(tallies.size());
  for (const auto& [key, t] : tallies) {
    const auto& [dim, category, model] = key;
    const double total = t.wins + t.losses + t.ties;
    table.push_back({model, dim, category, t.wins, t.losses, t.ties,
                     total > 0 ? (t.wins + 0.5 * t.ties) / total : 0.0});
  }
  return table;
}

}  // namespace aigv
