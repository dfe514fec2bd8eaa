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
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aigv/assessor.h"
#include "aigv/metrics.h"
#include "aigv/store.h"
#include "aigv/synthgen.h"

namespace aigv {

struct TrainLogEntry {
  int stage = 0;
  int epoch = 0;  // 1-based
  double loss = 0.0;
};

struct TrainResult {
  AssessorParams params;
  std::vector<TrainLogEntry> log;
};

// Preference labels from ground-truth scores: label 1 when `first` scores
// higher; differences below `dead_zone` are masked out.
PairSample label_pair(std::size_t first, std::size_t second,
                      std::span<const TrainSample> samples, double dead_zone);

// Every pair inside each group (samples sharing a group key), as in a
// per-prompt study design. Pairs with no valid dimension are dropped.
std::vector<PairSample> group_pairs(std::span<const TrainSample> samples,
                                    std::span<const std::string> group_keys, double dead_zone);

// `count` pairs drawn uniformly without replacement from all index pairs.
std::vector<PairSample> sample_index_pairs(std::span<const TrainSample> samples,
                                           std::size_t count, std::uint64_t seed,
                                           double dead_zone);

// Momentum SGD over the requested stages in ascending order, starting from
// initialize_params(config). Stage 3 requires `pairs`.
// Errors: kEmptyDataset, kStageDisabled, kOutOfRange.
TrainResult train(const AssessorConfig& config, std::span<const TrainSample> samples,
                  std::span<const PairSample> pairs, std::span<const int> stages,
                  const std::function<void(const TrainLogEntry&)>& on_epoch = {});

// Continues training from given parameters.
TrainResult train_from(AssessorParams params, const AssessorConfig& config,
                       std::span<const TrainSample> samples, std::span<const PairSample> pairs,
                       std::span<const int> stages,
                       const std::function<void(const TrainLogEntry&)>& on_epoch = {});

// Correlations of predicted scores against sample ground truth, plus judge
// accuracy over `pairs` (valid entries only) when pairs are given.
MetricReport evaluate_model(const AssessorParams& params, const AssessorConfig& config,
                            std::span<const TrainSample> samples,
                            std::span<const PairSample> pairs);

// Training samples for synthetic clips: features from the rendered clip,
// concept prompt code, manifest scores and levels.
TrainSample make_sample(const ManifestEntry& entry, const VideoTensor& video,
                        const AssessorConfig& config);

struct ProtocolOptions {
  int splits = 10;               // split seeds 0 .. splits-1
  std::size_t test_pairs = 500;  // capped by the number of available pairs
  double dead_zone = 2.0;
  std::vector<int> stages = {1, 2, 3};
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one split
};

struct ProtocolResult {
  std::vector<std::uint64_t> split_seeds;
  std::vector<MetricReport> per_split;
  std::map<Dimension, std::map<std::string, MetricSummary>> summary;  // metric name -> stats
};

struct SplitRun {
  SplitSpec split;
  TrainResult trained;
  MetricReport report;  // on the test part
};

// One 4:1 split: train from scratch on the training part (stage-3 pairs
// formed within `group_keys`) and score the test part, with judge accuracy
// on up to options.test_pairs sampled test pairs.
SplitRun run_split(const AssessorConfig& config, std::span<const TrainSample> samples,
                   std::span<const std::string> group_keys, std::uint64_t split_seed,
                   const ProtocolOptions& options,
                   const std::function<void(const TrainLogEntry&)>& on_epoch = {});

// Repeated 4:1 splits. For each split the model is trained from scratch on
// the training part (stage-3 pairs formed within `group_keys`) and scored on
// the test part. Errors: propagated from split_dataset and train.
ProtocolResult run_protocol(const AssessorConfig& config, std::span<const TrainSample> samples,
                            std::span<const std::string> group_keys,
                            const ProtocolOptions& options,
                            const std::function<void(int, const MetricReport&)>& on_split = {});

// A generated dataset read back from disk: manifest.jsonl plus the clips it
// names. Clips are grouped by the concept their prompt names.
struct SynthDataset {
  SynthManifest manifest;
  std::vector<TrainSample> samples;
  std::vector<std::string> group_keys;
};

// Errors: kIoFailure, kParseError, kEmptyDataset and AVF decode errors.
SynthDataset load_synth_dataset(const std::filesystem::path& dir, const AssessorConfig& config);

}  // namespace aigv
