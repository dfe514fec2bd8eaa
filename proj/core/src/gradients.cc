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

#include <algorithm>
#include <cmath>

#include "aigv/assessor.h"
#include "aigv/error.h"
#include "assessor_internal.h"

namespace aigv {

namespace {

bool trains(const std::vector<std::string>& names, std::string_view name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

void check_stage(const AssessorConfig& config, int stage) {
  if (stage < 1 || stage > 3) {
    throw Error(ErrorCode::kOutOfRange, "stage " + std::to_string(stage) + " is not 1, 2 or 3");
  }
  if (stage == 1 && !config.use_level_stage) {
    throw Error(ErrorCode::kStageDisabled, "level classification is disabled");
  }
}

// Backpropagates d(loss)/d(hidden) of one sample into the backbone.
void backprop_backbone(const AssessorParams& params, const AssessorConfig& config,
                       const TrainSample& sample, const internal::ForwardCache& cache,
                       std::span<const double> d_hidden, const std::vector<std::string>& names,
                       AssessorParams& grad) {
  const std::size_t tok = static_cast<std::size_t>(config.token_dim);
  const std::size_t hid = static_cast<std::size_t>(config.hidden_dim);
  const bool fusion = trains(names, "fusion_w");
  if (!fusion) return;

  std::vector<double> d_pre(hid);
  for (std::size_t j = 0; j < hid; ++j) d_pre[j] = d_hidden[j] * internal::gelu_derivative(cache.pre[j]);
  for (std::size_t i = 0; i < cache.fused.size(); ++i) {
    const double f = cache.fused[i];
    if (f == 0.0) continue;
    double* g = grad.fusion_w.row(i);
    for (std::size_t j = 0; j < hid; ++j) g[j] += f * d_pre[j];
  }
  for (std::size_t j = 0; j < hid; ++j) grad.fusion_b.data[j] += d_pre[j];

  std::vector<double> d_fused(4 * tok, 0.0);
  for (std::size_t i = 0; i < d_fused.size(); ++i) {
    const double* w = params.fusion_w.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < hid; ++j) acc += w[j] * d_pre[j];
    d_fused[i] = acc;
  }
  const double* d_spatial = d_fused.data();
  const double* d_temporal = d_fused.data() + tok;
  const double* d_prompt = d_fused.data() + 2 * tok;
  const double* d_pool = d_fused.data() + 3 * tok;

  if (trains(names, "spatial_proj")) {
    const Matrix& s = sample.features.spatial;
    const double inv_t = 1.0 / static_cast<double>(s.rows);
    for (std::size_t i = 0; i < s.cols; ++i) {
      double mean = 0.0;
      for (std::size_t t = 0; t < s.rows; ++t) mean += s(t, i);
      mean *= inv_t;
      double* g = grad.spatial_proj.row(i);
      for (std::size_t c = 0; c < tok; ++c) {
        g[c] += mean * d_spatial[c] +
                s(static_cast<std::size_t>(cache.pool_argmax[c]), i) * d_pool[c];
      }
    }
  }
  if (config.use_temporal && trains(names, "temporal_fast_proj")) {
    for (std::size_t i = 0; i < cache.mean_fast.size(); ++i) {
      double* gf = grad.temporal_fast_proj.row(i);
      double* gs = grad.temporal_slow_proj.row(i);
      for (std::size_t c = 0; c < tok; ++c) {
        gf[c] += 0.5 * cache.mean_fast[i] * d_temporal[c];
        gs[c] += 0.5 * cache.mean_slow[i] * d_temporal[c];
      }
    }
  }
  if (trains(names, "prompt_embed")) {
    for (const auto& [bucket, weight] : sample.prompt.buckets) {
      double* g = grad.prompt_embed.row(static_cast<std::size_t>(bucket));
      for (std::size_t c = 0; c < tok; ++c) g[c] += weight * d_prompt[c];
    }
  }
}

double run_stage(const AssessorParams& params, const AssessorConfig& config, const Batch& batch,
                 int stage, AssessorParams* grad) {
  check_stage(config, stage);
  if (batch.samples.empty()) throw Error(ErrorCode::kEmptyDataset, "empty batch");
  const auto names = trained_parameters(config, stage);
  const std::size_t hid = static_cast<std::size_t>(config.hidden_dim);

  if (stage == 1 || stage == 2) {
    const double scale = 1.0 / (kNumDimensions * static_cast<double>(batch.samples.size()));
    double loss = 0.0;
    internal::ForwardCache cache;
    std::vector<double> d_hidden(hid);
    for (const auto& sample : batch.samples) {
      const auto prompt = embed_prompt(params, sample.prompt);
      internal::forward_cached(params, config, sample.features, prompt, cache);
      std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
      for (std::size_t d = 0; d < kNumDimensions; ++d) {
        if (stage == 1) {
          const double* z = cache.logits.data() + d * kNumLevels;
          const double peak = *std::max_element(z, z + kNumLevels);
          double sum = 0.0;
          for (std::size_t l = 0; l < kNumLevels; ++l) sum += std::exp(z[l] - peak);
          const auto target = static_cast<std::size_t>(sample.gt_levels[d]);
          loss += (peak + std::log(sum) - z[target]) * scale;
          if (!grad) continue;
          for (std::size_t l = 0; l < kNumLevels; ++l) {
            const double g = (std::exp(z[l] - peak) / sum - (l == target ? 1.0 : 0.0)) * scale;
            const std::size_t col = d * kNumLevels + l;
            grad->level_b.data[col] += g;
            for (std::size_t j = 0; j < hid; ++j) {
              grad->level_w(j, col) += cache.hidden[j] * g;
              d_hidden[j] += params.level_w(j, col) * g;
            }
          }
        } else {
          const double diff = cache.scores[d] - sample.gt_scores[d];
          loss += std::abs(diff) * scale;
          if (!grad) continue;
          const double g = (diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0) * scale;
          grad->score_b.data[d] += g;
          for (std::size_t j = 0; j < hid; ++j) {
            grad->score_w(j, d) += cache.hidden[j] * g;
            d_hidden[j] += params.score_w(j, d) * g;
          }
        }
      }
      if (grad) backprop_backbone(params, config, sample, cache, d_hidden, names, *grad);
    }
    return loss;
  }

  // Stage 3: the backbone is frozen, so each hidden state is computed once.
  std::vector<std::vector<double>> hidden(batch.samples.size());
  for (const auto& pair : batch.pairs) {
    for (const std::size_t i : {pair.first, pair.second}) {
      if (i >= batch.samples.size()) {
        throw Error(ErrorCode::kOutOfRange, "pair refers to a sample outside the batch");
      }
      if (hidden[i].empty()) {
        const auto prompt = embed_prompt(params, batch.samples[i].prompt);
        hidden[i] = forward(params, config, batch.samples[i].features, prompt).hidden;
      }
    }
  }
  return internal::pair_stage(params, hidden, batch.pairs, grad);
}

}  // namespace

namespace internal {

double pair_stage(const AssessorParams& params, std::span<const std::vector<double>> hidden,
                  std::span<const PairSample> pairs, AssessorParams* grad) {
  std::size_t count = 0;
  for (const auto& pair : pairs) {
    if (pair.first >= hidden.size() || pair.second >= hidden.size()) {
      throw Error(ErrorCode::kOutOfRange, "pair refers to a sample outside the batch");
    }
    for (std::size_t d = 0; d < kNumDimensions; ++d) count += pair.valid[d] ? 1 : 0;
  }
  if (count == 0) throw Error(ErrorCode::kEmptyDataset, "no valid pair labels in batch");

  const double scale = 1.0 / static_cast<double>(count);
  const std::size_t tok = params.judge_w1.cols;
  const std::size_t hid = params.judge_w1.rows;
  double loss = 0.0;
  JudgeCache cache;
  std::vector<double> d_act(tok);
  for (const auto& pair : pairs) {
    judge_cached(params, hidden[pair.first], hidden[pair.second], cache);
    std::fill(d_act.begin(), d_act.end(), 0.0);
    bool any = false;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      if (!pair.valid[d]) continue;
      const double z = cache.logits[d];
      const double y = pair.label[d];
      loss += (softplus(z) - y * z) * scale;
      if (!grad) continue;
      const double g = (cache.probs[d] - y) * scale;
      any = true;
      for (std::size_t k = 0; k < tok; ++k) {
        grad->judge_w2(k, d) += cache.act[k] * g;
        d_act[k] += params.judge_w2(k, d) * g;
      }
    }
    if (!any) continue;
    for (std::size_t k = 0; k < tok; ++k) d_act[k] *= 1.0 - cache.act[k] * cache.act[k];
    for (std::size_t i = 0; i < hid; ++i) {
      const double delta = cache.delta[i];
      if (delta == 0.0) continue;
      double* g = grad->judge_w1.row(i);
      for (std::size_t k = 0; k < tok; ++k) g[k] += delta * d_act[k];
    }
  }
  return loss;
}

}  // namespace internal

std::vector<std::string> trained_parameters(const AssessorConfig& config, int stage) {
  check_stage(config, stage);
  std::vector<std::string> backbone = {"spatial_proj"};
  if (config.use_temporal) {
    backbone.emplace_back("temporal_fast_proj");
    backbone.emplace_back("temporal_slow_proj");
  }
  backbone.emplace_back("prompt_embed");
  backbone.emplace_back("fusion_w");
  backbone.emplace_back("fusion_b");
  switch (stage) {
    case 1:
      backbone.emplace_back("level_w");
      backbone.emplace_back("level_b");
      return backbone;
    case 2:
      if (!config.finetune_encoders_stage2) return {"score_w", "score_b"};
      backbone.emplace_back("score_w");
      backbone.emplace_back("score_b");
      return backbone;
    default:
      return {"judge_w1", "judge_w2"};
  }
}

double stage_loss(const AssessorParams& params, const AssessorConfig& config, const Batch& batch,
                  int stage) {
  return run_stage(params, config, batch, stage, nullptr);
}

StageGradient gradients(const AssessorParams& params, const AssessorConfig& config,
                        const Batch& batch, int stage) {
  StageGradient out;
  out.grad = zero_params(config);
  out.loss = run_stage(params, config, batch, stage, &out.grad);
  return out;
}

}  // namespace aigv
