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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aigv/dimension.h"
#include "aigv/matrix.h"
#include "aigv/video.h"

namespace aigv {

// Desk-scale quality assessor.
//
//   frames --> patch statistics (T x 384) --> spatial tokens (T x 32)
//          \-> frame-difference statistics, fast (T-1 x 6) and slow
//              (floor((T-1)/2) x 6) --> temporal tokens (x 32)
//   prompt --> hashed bucket mixture (64) --> prompt embedding (32)
//
//   fused  = [mean spatial, (mean fast + mean slow) / 2, prompt, max spatial]
//   hidden = gelu(fused W1 + b1)                               (64)
//   level logits = hidden W_L + b_L  (4 dimensions x 5 levels)
//   scores       = hidden W_R + b_R  (4)
//   judge(a, b)  = sigmoid(tanh((h_a - h_b) U1) U2)   bias-free, hence odd
//
// Training runs in three stages: level classification (projections, fusion,
// level head), L1 score regression (score head, optionally the backbone), and
// pairwise preference (judge only, backbone frozen).
struct AssessorConfig {
  int frames = 8;
  int height = 64;
  int width = 64;
  int patch_grid = 8;
  int token_dim = 32;
  int hidden_dim = 64;
  int prompt_buckets = 64;

  bool use_temporal = true;
  bool use_level_stage = true;
  bool finetune_encoders_stage2 = true;

  std::array<double, 3> learning_rate = {1e-2, 1e-3, 1e-3};
  std::array<int, 3> epochs = {40, 120, 60};
  double momentum = 0.9;
  int batch_size = 16;
  std::uint64_t seed = 0;

  int spatial_descriptor_dim() const { return patch_grid * patch_grid * 6; }
  int fused_dim() const { return 4 * token_dim; }
  int fast_steps() const { return frames - 1; }
  int slow_steps() const { return (frames - 1) / 2; }

  // Throws Error(kShapeMismatch) for non-positive sizes or a frame size that
  // the patch grid does not divide.
  void validate() const;
};

// Every learnable tensor. Gradients use the same type.
struct AssessorParams {
  Matrix spatial_proj;        // 384 x 32
  Matrix temporal_fast_proj;  // 6 x 32
  Matrix temporal_slow_proj;  // 6 x 32
  Matrix prompt_embed;        // 64 x 32
  Matrix fusion_w;            // 128 x 64
  Matrix fusion_b;            // 1 x 64
  Matrix level_w;             // 64 x 20
  Matrix level_b;             // 1 x 20
  Matrix score_w;             // 64 x 4
  Matrix score_b;             // 1 x 4
  Matrix judge_w1;            // 64 x 32
  Matrix judge_w2;            // 32 x 4

  // Visits tensors in a fixed order with their checkpoint names.
  template <typename Fn>
  void for_each(Fn&& fn) {
    fn("spatial_proj", spatial_proj);
    fn("temporal_fast_proj", temporal_fast_proj);
    fn("temporal_slow_proj", temporal_slow_proj);
    fn("prompt_embed", prompt_embed);
    fn("fusion_w", fusion_w);
    fn("fusion_b", fusion_b);
    fn("level_w", level_w);
    fn("level_b", level_b);
    fn("score_w", score_w);
    fn("score_b", score_b);
    fn("judge_w1", judge_w1);
    fn("judge_w2", judge_w2);
  }
  template <typename Fn>
  void for_each(Fn&& fn) const {
    const_cast<AssessorParams*>(this)->for_each(
        [&](std::string_view name, Matrix& m) { fn(name, static_cast<const Matrix&>(m)); });
  }

  Matrix* find(std::string_view name);
  const Matrix* find(std::string_view name) const;

  bool operator==(const AssessorParams&) const = default;
};

// All tensors with configured shapes, filled with zeros.
AssessorParams zero_params(const AssessorConfig& config);

// Weights uniform in +-sqrt(6 / (fan_in + fan_out)) from the config seed,
// biases zero except the score bias, which starts at the middle of the MOS
// range (50). Values are rounded to float precision.
AssessorParams initialize_params(const AssessorConfig& config);

// Rounds every entry to the nearest float so checkpoints are exact.
void round_to_float(AssessorParams& params);

// Parameter-free clip statistics; everything the network reads from pixels.
struct ClipFeatures {
  Matrix spatial;  // T x 384: per patch, per channel (mean, population std)
  Matrix fast;     // (T-1) x 6: per channel (mean |d|, population std of d)
  Matrix slow;     // floor((T-1)/2) x 6, frame 2k+2 minus frame 2k
};

// Errors: kShapeMismatch, kTooFewFrames (T < 3).
ClipFeatures extract_features(const VideoTensor& video, const AssessorConfig& config);

// Token views of the same statistics (descriptor x projection).
Matrix extract_spatial_tokens(const AssessorParams& params, const AssessorConfig& config,
                              const VideoTensor& video);
std::pair<Matrix, Matrix> extract_temporal_tokens(const AssessorParams& params,
                                                  const AssessorConfig& config,
                                                  const VideoTensor& video);

// Sparse mixture over prompt buckets; weights sum to one (or the code is
// empty for an empty prompt).
struct PromptCode {
  std::vector<std::pair<int, double>> buckets;
};

// Tokens hashed with FNV-1a into `buckets` slots, one-hots averaged.
PromptCode encode_prompt(std::string_view text, int buckets);
// Synthetic concept k bypasses hashing and maps to bucket k.
PromptCode concept_code(int concept_id, int buckets);
std::vector<double> embed_prompt(const AssessorParams& params, const PromptCode& code);

struct AssessorOutput {
  std::array<std::array<double, kNumLevels>, kNumDimensions> level_logits{};
  std::array<double, kNumDimensions> scores{};
  std::vector<double> hidden;
};

AssessorOutput forward(const AssessorParams& params, const AssessorConfig& config,
                       const ClipFeatures& features, std::span<const double> prompt_vec);
AssessorOutput forward(const AssessorParams& params, const AssessorConfig& config,
                       const VideoTensor& video, std::span<const double> prompt_vec);

// P(first video better) per dimension.
std::array<double, kNumDimensions> judge_pair(const AssessorParams& params,
                                              std::span<const double> hidden_a,
                                              std::span<const double> hidden_b);

// Equal-width left-closed bins on [0, 100]. Errors: kOutOfRange.
QualityLevel mos_to_level(double mos);

// Mean over dimensions of softmax cross-entropy against the target level.
double loss_language(const std::array<std::array<double, kNumLevels>, kNumDimensions>& logits,
                     const std::array<QualityLevel, kNumDimensions>& levels);
// Mean absolute error.
double loss_mos(std::span<const double> pred, std::span<const double> gt);
// Mean binary cross-entropy; label 1 means the first video is better.
double loss_pairs(std::span<const double> probs, std::span<const double> labels);

struct TrainSample {
  std::string id;
  ClipFeatures features;
  PromptCode prompt;
  std::array<double, kNumDimensions> gt_scores{};
  std::array<QualityLevel, kNumDimensions> gt_levels{};
};

// Indices into the sample list. label[d] = 1 when `first` is better in
// dimension d; entries with valid[d] == false (near ties) are ignored.
struct PairSample {
  std::size_t first = 0;
  std::size_t second = 0;
  std::array<double, kNumDimensions> label{};
  std::array<bool, kNumDimensions> valid{true, true, true, true};
};

struct Batch {
  std::span<const TrainSample> samples;
  std::span<const PairSample> pairs;  // stage 3 only; indexes `samples`
};

// Names of the tensors a stage updates under `config`.
std::vector<std::string> trained_parameters(const AssessorConfig& config, int stage);

// Loss of one stage on a batch (forward only).
// Errors: kStageDisabled, kShapeMismatch, kEmptyDataset.
double stage_loss(const AssessorParams& params, const AssessorConfig& config, const Batch& batch,
                  int stage);

struct StageGradient {
  double loss = 0.0;
  AssessorParams grad;  // zero for tensors the stage does not train
};

// Exact analytic gradient of stage_loss with respect to the trained tensors.
StageGradient gradients(const AssessorParams& params, const AssessorConfig& config,
                        const Batch& batch, int stage);

struct Prediction {
  std::array<double, kNumDimensions> scores{};
  std::array<QualityLevel, kNumDimensions> levels{};
  std::vector<double> hidden;
};

Prediction predict(const AssessorParams& params, const AssessorConfig& config,
                   const ClipFeatures& features, const PromptCode& prompt);
Prediction predict(const AssessorParams& params, const AssessorConfig& config,
                   const VideoTensor& video, const PromptCode& prompt);

}  // namespace aigv
