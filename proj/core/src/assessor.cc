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

#include "aigv/assessor.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/text.h"
#include "assessor_internal.h"

namespace aigv {

namespace {

constexpr int kTemporalDescriptorDim = 6;

std::string shape_string(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols, std::string_view name) {
  if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
    throw Error(ErrorCode::kShapeMismatch, std::string(name) + " is " +
                                               shape_string(m.rows, m.cols) + ", expected " +
                                               shape_string(rows, cols));
  }
}

void check_params(const AssessorParams& p, const AssessorConfig& c) {
  const auto tok = static_cast<std::size_t>(c.token_dim);
  const auto hid = static_cast<std::size_t>(c.hidden_dim);
  check_matrix(p.spatial_proj, static_cast<std::size_t>(c.spatial_descriptor_dim()), tok,
               "spatial_proj");
  check_matrix(p.temporal_fast_proj, kTemporalDescriptorDim, tok, "temporal_fast_proj");
  check_matrix(p.temporal_slow_proj, kTemporalDescriptorDim, tok, "temporal_slow_proj");
  check_matrix(p.prompt_embed, static_cast<std::size_t>(c.prompt_buckets), tok, "prompt_embed");
  check_matrix(p.fusion_w, static_cast<std::size_t>(c.fused_dim()), hid, "fusion_w");
  check_matrix(p.fusion_b, 1, hid, "fusion_b");
  check_matrix(p.level_w, hid, kNumDimensions * kNumLevels, "level_w");
  check_matrix(p.level_b, 1, kNumDimensions * kNumLevels, "level_b");
  check_matrix(p.score_w, hid, kNumDimensions, "score_w");
  check_matrix(p.score_b, 1, kNumDimensions, "score_b");
  check_matrix(p.judge_w1, hid, tok, "judge_w1");
  check_matrix(p.judge_w2, tok, kNumDimensions, "judge_w2");
}

// out[j] = sum_i v[i] * m(i, j)
void vec_mat(std::span<const double> v, const Matrix& m, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) out[j] += vi * row[j];
  }
}

// Per-channel (mean |d|, population std of d) of frame[a] - frame[b].
void diff_statistics(const VideoTensor& video, int a, int b, double* out) {
  const std::size_t pixels = static_cast<std::size_t>(video.height) * video.width;
  const float* fa = video.data.data() + a * video.frame_size();
  const float* fb = video.data.data() + b * video.frame_size();
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0, sum_abs = 0.0;
    for (std::size_t p = 0; p < pixels; ++p) {
      const double d = static_cast<double>(fa[p * 3 + c]) - static_cast<double>(fb[p * 3 + c]);
      sum += d;
      sum_abs += std::abs(d);
    }
    const double mean = sum / static_cast<double>(pixels);
    double ss = 0.0;
    for (std::size_t p = 0; p < pixels; ++p) {
      const double d =
          static_cast<double>(fa[p * 3 + c]) - static_cast<double>(fb[p * 3 + c]) - mean;
      ss += d * d;
    }
    out[c * 2] = sum_abs / static_cast<double>(pixels);
    out[c * 2 + 1] = std::sqrt(ss / static_cast<double>(pixels));
  }
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> out(m.cols, 0.0);
  if (m.rows == 0) return out;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out[c] += m(r, c);
  }
  for (auto& v : out) v /= static_cast<double>(m.rows);
  return out;
}

Matrix tokens_of(const Matrix& descriptors, const Matrix& proj) {
  Matrix out(descriptors.rows, proj.cols);
  for (std::size_t r = 0; r < descriptors.rows; ++r) {
    vec_mat({descriptors.row(r), descriptors.cols}, proj, {out.row(r), out.cols});
  }
  return out;
}

}  // namespace

void AssessorConfig::validate() const {
  if (frames <= 0 || height <= 0 || width <= 0 || patch_grid <= 0 || token_dim <= 0 ||
      hidden_dim <= 0 || prompt_buckets <= 0 || batch_size <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "assessor dimensions must be positive");
  }
  if (height % patch_grid != 0 || width % patch_grid != 0) {
    throw Error(ErrorCode::kShapeMismatch, "frame size " + std::to_string(height) + "x" +
                                               std::to_string(width) +
                                               " is not divisible by the patch grid");
  }
}

Matrix* AssessorParams::find(std::string_view name) {
  Matrix* found = nullptr;
  for_each([&](std::string_view n, Matrix& m) {
    if (n == name) found = &m;
  });
  return found;
}

const Matrix* AssessorParams::find(std::string_view name) const {
  return const_cast<AssessorParams*>(this)->find(name);
}

AssessorParams zero_params(const AssessorConfig& c) {
  c.validate();
  const auto tok = static_cast<std::size_t>(c.token_dim);
  const auto hid = static_cast<std::size_t>(c.hidden_dim);
  AssessorParams p;
  p.spatial_proj = Matrix(static_cast<std::size_t>(c.spatial_descriptor_dim()), tok);
  p.temporal_fast_proj = Matrix(kTemporalDescriptorDim, tok);
  p.temporal_slow_proj = Matrix(kTemporalDescriptorDim, tok);
  p.prompt_embed = Matrix(static_cast<std::size_t>(c.prompt_buckets), tok);
  p.fusion_w = Matrix(static_cast<std::size_t>(c.fused_dim()), hid);
  p.fusion_b = Matrix(1, hid);
  p.level_w = Matrix(hid, kNumDimensions * kNumLevels);
  p.level_b = Matrix(1, kNumDimensions * kNumLevels);
  p.score_w = Matrix(hid, kNumDimensions);
  p.score_b = Matrix(1, kNumDimensions);
  p.judge_w1 = Matrix(hid, tok);
  p.judge_w2 = Matrix(tok, kNumDimensions);
  return p;
}

AssessorParams initialize_params(const AssessorConfig& config) {
  AssessorParams p = zero_params(config);
  Rng rng(Rng::mix(config.seed, 0x1a17));
  p.for_each([&](std::string_view name, Matrix& m) {
    if (name.ends_with("_b")) return;
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
    for (auto& v : m.data) v = rng.uniform(-limit, limit);
  });
  p.score_b.fill(50.0);
  round_to_float(p);
  return p;
}

void round_to_float(AssessorParams& params) {
  params.for_each([](std::string_view, Matrix& m) {
    for (auto& v : m.data) v = static_cast<double>(static_cast<float>(v));
  });
}

ClipFeatures extract_features(const VideoTensor& video, const AssessorConfig& config) {
  config.validate();
  if (video.height != config.height || video.width != config.width ||
      video.frames != config.frames ||
      video.data.size() != static_cast<std::size_t>(video.frames) * video.frame_size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "video is " + std::to_string(video.frames) + "x" + std::to_string(video.height) +
                    "x" + std::to_string(video.width) + ", model expects " +
                    std::to_string(config.frames) + "x" + std::to_string(config.height) + "x" +
                    std::to_string(config.width));
  }
  if (video.frames < 3) {
    throw Error(ErrorCode::kTooFewFrames, "temporal features need at least 3 frames");
  }

  const int grid = config.patch_grid;
  const int ph = config.height / grid;
  const int pw = config.width / grid;
  const double n = static_cast<double>(ph) * pw;

  ClipFeatures f;
  f.spatial = Matrix(static_cast<std::size_t>(video.frames),
                     static_cast<std::size_t>(config.spatial_descriptor_dim()));
  for (int t = 0; t < video.frames; ++t) {
    double* row = f.spatial.row(static_cast<std::size_t>(t));
    for (int gy = 0; gy < grid; ++gy) {
      for (int gx = 0; gx < grid; ++gx) {
        for (int c = 0; c < 3; ++c) {
          double sum = 0.0;
          for (int y = gy * ph; y < (gy + 1) * ph; ++y) {
            for (int x = gx * pw; x < (gx + 1) * pw; ++x) sum += video.at(t, y, x, c);
          }
          const double mean = sum / n;
          double ss = 0.0;
          for (int y = gy * ph; y < (gy + 1) * ph; ++y) {
            for (int x = gx * pw; x < (gx + 1) * pw; ++x) {
              const double d = video.at(t, y, x, c) - mean;
              ss += d * d;
            }
          }
          const std::size_t base = (static_cast<std::size_t>(gy * grid + gx) * 3 + c) * 2;
          row[base] = mean;
          row[base + 1] = std::sqrt(ss / n);
        }
      }
    }
  }

  f.fast = Matrix(static_cast<std::size_t>(config.fast_steps()), kTemporalDescriptorDim);
  for (int t = 0; t + 1 < video.frames; ++t) {
    diff_statistics(video, t + 1, t, f.fast.row(static_cast<std::size_t>(t)));
  }
  f.slow = Matrix(static_cast<std::size_t>(config.slow_steps()), kTemporalDescriptorDim);
  for (int k = 0; k < config.slow_steps(); ++k) {
    diff_statistics(video, 2 * k + 2, 2 * k, f.slow.row(static_cast<std::size_t>(k)));
  }
  return f;
}

Matrix extract_spatial_tokens(const AssessorParams& params, const AssessorConfig& config,
                              const VideoTensor& video) {
  check_params(params, config);
  return tokens_of(extract_features(video, config).spatial, params.spatial_proj);
}

std::pair<Matrix, Matrix> extract_temporal_tokens(const AssessorParams& params,
                                                  const AssessorConfig& config,
                                                  const VideoTensor& video) {
  check_params(params, config);
  const ClipFeatures f = extract_features(video, config);
  return {tokens_of(f.fast, params.temporal_fast_proj),
          tokens_of(f.slow, params.temporal_slow_proj)};
}

PromptCode encode_prompt(std::string_view text, int buckets) {
  const auto tokens = tokenize(text);
  PromptCode code;
  if (tokens.empty()) return code;
  std::map<int, int> counts;
  for (const auto& token : tokens) {
    ++counts[static_cast<int>(fnv1a64(token) % static_cast<std::uint64_t>(buckets))];
  }
  const double total = static_cast<double>(tokens.size());
  for (const auto& [bucket, count] : counts) code.buckets.emplace_back(bucket, count / total);
  return code;
}

PromptCode concept_code(int concept_id, int buckets) {
  if (concept_id < 0 || concept_id >= buckets) {
    throw Error(ErrorCode::kOutOfRange, "concept " + std::to_string(concept_id) +
                                            " outside [0, " + std::to_string(buckets) + ")");
  }
  return PromptCode{{{concept_id, 1.0}}};
}

std::vector<double> embed_prompt(const AssessorParams& params, const PromptCode& code) {
  std::vector<double> out(params.prompt_embed.cols, 0.0);
  for (const auto& [bucket, weight] : code.buckets) {
    if (bucket < 0 || static_cast<std::size_t>(bucket) >= params.prompt_embed.rows) {
      throw Error(ErrorCode::kShapeMismatch, "prompt bucket out of range");
    }
    const double* row = params.prompt_embed.row(static_cast<std::size_t>(bucket));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weight * row[j];
  }
  return out;
}

namespace internal {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_features(const AssessorConfig& config, const ClipFeatures& f) {
  if (f.spatial.rows != static_cast<std::size_t>(config.frames) ||
      f.spatial.cols != static_cast<std::size_t>(config.spatial_descriptor_dim()) ||
      f.fast.rows != static_cast<std::size_t>(config.fast_steps()) ||
      f.fast.cols != kTemporalDescriptorDim ||
      f.slow.rows != static_cast<std::size_t>(config.slow_steps()) ||
      f.slow.cols != kTemporalDescriptorDim) {
    throw Error(ErrorCode::kShapeMismatch, "clip features do not match the assessor config");
  }
}

void forward_cached(const AssessorParams& params, const AssessorConfig& config,
                    const ClipFeatures& features, std::span<const double> prompt_vec,
                    ForwardCache& cache) {
  check_params(params, config);
  check_features(config, features);
  const auto tok = static_cast<std::size_t>(config.token_dim);
  const auto hid = static_cast<std::size_t>(config.hidden_dim);
  if (prompt_vec.size() != tok) {
    throw Error(ErrorCode::kShapeMismatch, "prompt vector has " +
                                               std::to_string(prompt_vec.size()) +
                                               " entries, expected " + std::to_string(tok));
  }

  cache.tokens = tokens_of(features.spatial, params.spatial_proj);
  cache.u_spatial = column_means(cache.tokens);
  cache.u_pool.assign(tok, 0.0);
  cache.pool_argmax.assign(tok, 0);
  for (std::size_t c = 0; c < tok; ++c) {
    double best = cache.tokens(0, c);
    int arg = 0;
    for (std::size_t t = 1; t < cache.tokens.rows; ++t) {
      if (cache.tokens(t, c) > best) {
        best = cache.tokens(t, c);
        arg = static_cast<int>(t);
      }
    }
    cache.u_pool[c] = best;
    cache.pool_argmax[c] = arg;
  }

  cache.mean_fast = column_means(features.fast);
  cache.mean_slow = column_means(features.slow);
  std::vector<double> u_temporal(tok, 0.0);
  if (config.use_temporal) {
    std::vector<double> u_fast(tok), u_slow(tok);
    vec_mat(cache.mean_fast, params.temporal_fast_proj, u_fast);
    vec_mat(cache.mean_slow, params.temporal_slow_proj, u_slow);
    for (std::size_t j = 0; j < tok; ++j) u_temporal[j] = 0.5 * (u_fast[j] + u_slow[j]);
  }

  cache.prompt.assign(prompt_vec.begin(), prompt_vec.end());
  cache.fused.resize(4 * tok);
  std::copy(cache.u_spatial.begin(), cache.u_spatial.end(), cache.fused.begin());
  std::copy(u_temporal.begin(), u_temporal.end(), cache.fused.begin() + tok);
  std::copy(cache.prompt.begin(), cache.prompt.end(), cache.fused.begin() + 2 * tok);
  std::copy(cache.u_pool.begin(), cache.u_pool.end(), cache.fused.begin() + 3 * tok);

  cache.pre.assign(hid, 0.0);
  vec_mat(cache.fused, params.fusion_w, cache.pre);
  cache.hidden.resize(hid);
  for (std::size_t j = 0; j < hid; ++j) {
    cache.pre[j] += params.fusion_b.data[j];
    cache.hidden[j] = gelu(cache.pre[j]);
  }

  cache.logits.assign(kNumDimensions * kNumLevels, 0.0);
  vec_mat(cache.hidden, params.level_w, cache.logits);
  for (std::size_t j = 0; j < cache.logits.size(); ++j) cache.logits[j] += params.level_b.data[j];
  cache.scores.assign(kNumDimensions, 0.0);
  vec_mat(cache.hidden, params.score_w, cache.scores);
  for (std::size_t j = 0; j < kNumDimensions; ++j) cache.scores[j] += params.score_b.data[j];
}

void judge_cached(const AssessorParams& params, std::span<const double> hidden_a,
                  std::span<const double> hidden_b, JudgeCache& cache) {
  const std::size_t hid = params.judge_w1.rows;
  if (hidden_a.size() != hid || hidden_b.size() != hid || params.judge_w2.rows != params.judge_w1.cols ||
      params.judge_w2.cols != kNumDimensions) {
    throw Error(ErrorCode::kShapeMismatch, "judge inputs do not match the judge weights");
  }
  cache.delta.resize(hid);
  for (std::size_t i = 0; i < hid; ++i) cache.delta[i] = hidden_a[i] - hidden_b[i];
  cache.act.assign(params.judge_w1.cols, 0.0);
  vec_mat(cache.delta, params.judge_w1, cache.act);
  for (auto& v : cache.act) v = std::tanh(v);
  cache.logits.assign(kNumDimensions, 0.0);
  vec_mat(cache.act, params.judge_w2, cache.logits);
  cache.probs.resize(kNumDimensions);
  for (std::size_t d = 0; d < kNumDimensions; ++d) cache.probs[d] = sigmoid(cache.logits[d]);
}

}  // namespace internal

AssessorOutput forward(const AssessorParams& params, const AssessorConfig& config,
                       const ClipFeatures& features, std::span<const double> prompt_vec) {
  internal::ForwardCache cache;
  internal::forward_cached(params, config, features, prompt_vec, cache);
  AssessorOutput out;
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    for (std::size_t l = 0; l < kNumLevels; ++l) out.level_logits[d][l] = cache.logits[d * kNumLevels + l];
    out.scores[d] = cache.scores[d];
  }
  out.hidden = std::move(cache.hidden);
  return out;
}

AssessorOutput forward(const AssessorParams& params, const AssessorConfig& config,
                       const VideoTensor& video, std::span<const double> prompt_vec) {
  return forward(params, config, extract_features(video, config), prompt_vec);
}

std::array<double, kNumDimensions> judge_pair(const AssessorParams& params,
                                              std::span<const double> hidden_a,
                                              std::span<const double> hidden_b) {
  internal::JudgeCache cache;
  internal::judge_cached(params, hidden_a, hidden_b, cache);
  std::array<double, kNumDimensions> out{};
  std::copy(cache.probs.begin(), cache.probs.end(), out.begin());
  return out;
}

QualityLevel mos_to_level(double mos) {
  if (!(mos >= 0.0 && mos <= 100.0)) {
    throw Error(ErrorCode::kOutOfRange, "MOS " + format_fixed(mos, 6) + " outside [0, 100]");
  }
  const int bin = std::min(4, static_cast<int>(std::floor(mos / 20.0)));
  return static_cast<QualityLevel>(bin);
}

double loss_language(const std::array<std::array<double, kNumLevels>, kNumDimensions>& logits,
                     const std::array<QualityLevel, kNumDimensions>& levels) {
  double total = 0.0;
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    const auto& row = logits[d];
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (const double v : row) sum += std::exp(v - peak);
    const double log_z = peak + std::log(sum);
    total += log_z - row[static_cast<std::size_t>(levels[d])];
  }
  return total / static_cast<double>(kNumDimensions);
}

double loss_mos(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kShapeMismatch, "prediction and label counts differ");
  }
  if (pred.empty()) throw Error(ErrorCode::kEmptyDataset, "loss of an empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += std::abs(pred[i] - gt[i]);
  return total / static_cast<double>(pred.size());
}

double loss_pairs(std::span<const double> probs, std::span<const double> labels) {
  if (probs.size() != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "probability and label counts differ");
  }
  if (probs.empty()) throw Error(ErrorCode::kEmptyDataset, "loss of an empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    const double y = labels[i];
    if (y > 0.0) total -= y * std::log(p);
    if (y < 1.0) total -= (1.0 - y) * std::log1p(-p);
  }
  return total / static_cast<double>(probs.size());
}

Prediction predict(const AssessorParams& params, const AssessorConfig& config,
                   const ClipFeatures& features, const PromptCode& prompt) {
  const auto prompt_vec = embed_prompt(params, prompt);
  AssessorOutput out = forward(params, config, features, prompt_vec);
  Prediction p;
  p.scores = out.scores;
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    const auto& row = out.level_logits[d];
    p.levels[d] = static_cast<QualityLevel>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  p.hidden = std::move(out.hidden);
  return p;
}

Prediction predict(const AssessorParams& params, const AssessorConfig& config,
                   const VideoTensor& video, const PromptCode& prompt) {
  return predict(params, config, extract_features(video, config), prompt);
}

}  // namespace aigv
