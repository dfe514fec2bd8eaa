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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/assessor_fixture.h"
#include "aigv/assessor.h"
#include "aigv/error.h"
#include "aigv/training.h"

namespace aigv {
namespace {

using testing::random_sample;
using testing::random_video;
using testing::small_config;

TEST(Features, ZeroAndConstantVideos) {
  const AssessorConfig c = small_config();
  VideoTensor zero(c.frames, c.height, c.width, 8.0);
  AssessorParams p = initialize_params(c);
  const Matrix tokens = extract_spatial_tokens(p, c, zero);
  for (double x : tokens.data) EXPECT_EQ(x, 0.0);
  const auto [fast, slow] = extract_temporal_tokens(p, c, zero);
  for (double x : fast.data) EXPECT_EQ(x, 0.0);
  for (double x : slow.data) EXPECT_EQ(x, 0.0);

  VideoTensor half = zero;
  std::fill(half.data.begin(), half.data.end(), 0.5f);
  const ClipFeatures f = extract_features(half, c);
  for (std::size_t i = 0; i < f.spatial.cols; ++i) EXPECT_EQ(f.spatial(0, i), i % 2 == 0 ? 0.5 : 0.0);
}

TEST(Features, RampVideo) {
  const AssessorConfig c = small_config();
  VideoTensor v(c.frames, c.height, c.width, 8.0);
  const float step = 0.125f;
  for (int t = 0; t < c.frames; ++t)
    for (int y = 0; y < c.height; ++y)
      for (int x = 0; x < c.width; ++x)
        for (int ch = 0; ch < 3; ++ch) v.at(t, y, x, ch) = step * static_cast<float>(t);
  const ClipFeatures f = extract_features(v, c);
  for (std::size_t t = 0; t < f.fast.rows; ++t) {
    for (int ch = 0; ch < 3; ++ch) {
      EXPECT_DOUBLE_EQ(f.fast(t, ch * 2), step);
      EXPECT_DOUBLE_EQ(f.fast(t, ch * 2 + 1), 0.0);
    }
  }
  for (std::size_t k = 0; k < f.slow.rows; ++k) EXPECT_DOUBLE_EQ(f.slow(k, 0), 2 * step);
}

TEST(Features, MatchBruteForceStatistics) {
  const AssessorConfig c = small_config();
  Rng rng(8);
  const VideoTensor v = random_video(rng, c);
  const ClipFeatures f = extract_features(v, c);
  const int ph = c.height / c.patch_grid, pw = c.width / c.patch_grid;
  for (int t = 0; t < c.frames; ++t) {
    int col = 0;
    for (int gy = 0; gy < c.patch_grid; ++gy) {
      for (int gx = 0; gx < c.patch_grid; ++gx) {
        for (int ch = 0; ch < 3; ++ch) {
          // Raw moments, a different route to the same statistics.
          double s1 = 0, s2 = 0;
          for (int y = gy * ph; y < (gy + 1) * ph; ++y) {
            for (int x = gx * pw; x < (gx + 1) * pw; ++x) {
              const double val = v.at(t, y, x, ch);
              s1 += val;
              s2 += val * val;
            }
          }
          const double n = ph * pw;
          EXPECT_NEAR(f.spatial(t, col++), s1 / n, 1e-9);
          EXPECT_NEAR(f.spatial(t, col++), std::sqrt(std::max(0.0, s2 / n - (s1 / n) * (s1 / n))), 1e-9);
        }
      }
    }
  }
  auto diff_stats = [&](int a, int b, int ch) {
    double sa = 0, s1 = 0, s2 = 0;
    const double n = c.height * c.width;
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        const double d = static_cast<double>(v.at(a, y, x, ch)) - v.at(b, y, x, ch);
        sa += std::abs(d);
        s1 += d;
        s2 += d * d;
      }
    }
    return std::pair{sa / n, std::sqrt(s2 / n - (s1 / n) * (s1 / n))};
  };
  for (int t = 0; t + 1 < c.frames; ++t) {
    for (int ch = 0; ch < 3; ++ch) {
      const auto [m, s] = diff_stats(t + 1, t, ch);
      EXPECT_NEAR(f.fast(t, ch * 2), m, 1e-9);
      EXPECT_NEAR(f.fast(t, ch * 2 + 1), s, 1e-9);
    }
  }
  for (int k = 0; k < c.slow_steps(); ++k) {
    const auto [m, s] = diff_stats(2 * k + 2, 2 * k, 1);
    EXPECT_NEAR(f.slow(k, 2), m, 1e-9);
    EXPECT_NEAR(f.slow(k, 3), s, 1e-9);
  }
}

TEST(Features, ShapeErrors) {
  AssessorConfig c = small_config();
  VideoTensor v(c.frames, c.height + 1, c.width, 8.0);
  EXPECT_THROW(extract_features(v, c), Error);
  c.frames = 2;
  VideoTensor short_clip(2, c.height, c.width, 8.0);
  try {
    extract_features(short_clip, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewFrames);
  }
}

TEST(Prompt, Embedding) {
  const AssessorConfig c = small_config();
  const AssessorParams p = initialize_params(c);
  for (double x : embed_prompt(p, encode_prompt("", c.prompt_buckets))) EXPECT_EQ(x, 0.0);
  const auto row3 = embed_prompt(p, concept_code(3, c.prompt_buckets));
  for (int j = 0; j < c.token_dim; ++j) EXPECT_EQ(row3[j], p.prompt_embed(3, j));
  EXPECT_EQ(embed_prompt(p, encode_prompt("a a a", c.prompt_buckets)),
            embed_prompt(p, encode_prompt("a", c.prompt_buckets)));
  const PromptCode code = encode_prompt("A red car, then a blue one", 64);
  double total = 0;
  for (const auto& [bucket, w] : code.buckets) {
    EXPECT_GE(bucket, 0);
    EXPECT_LT(bucket, 64);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Forward, ZeroParams) {
  const AssessorConfig c = small_config();
  AssessorParams p = zero_params(c);
  for (std::size_t i = 0; i < p.score_b.size(); ++i) p.score_b.data[i] = 10.0 + static_cast<double>(i);
  for (std::size_t i = 0; i < p.level_b.size(); ++i) p.level_b.data[i] = 0.25 * static_cast<double>(i);
  Rng rng(1);
  const std::vector<double> prompt(static_cast<std::size_t>(c.token_dim), 0.3);
  const auto out = forward(p, c, random_video(rng, c), prompt);
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    EXPECT_EQ(out.scores[d], 10.0 + static_cast<double>(d));
    for (std::size_t l = 0; l < kNumLevels; ++l) EXPECT_EQ(out.level_logits[d][l], 0.25 * static_cast<double>(d * kNumLevels + l));
  }
}

TEST(Forward, Deterministic) {
  const AssessorConfig c = small_config();
  const AssessorParams p = initialize_params(c);
  EXPECT_EQ(p, initialize_params(c));
  Rng rng(2);
  const VideoTensor v = random_video(rng, c);
  const auto prompt = embed_prompt(p, concept_code(1, c.prompt_buckets));
  const auto a = forward(p, c, v, prompt);
  const auto b = forward(p, c, v, prompt);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.hidden, b.hidden);
  const auto pa = predict(p, c, v, concept_code(1, c.prompt_buckets));
  EXPECT_EQ(pa.scores, a.scores);
}

TEST(Forward, NoTemporalEqualsZeroedProjections) {
  AssessorConfig on = small_config();
  AssessorConfig off = on;
  off.use_temporal = false;
  Rng rng(6);
  AssessorParams p = initialize_params(on);
  AssessorParams zeroed = p;
  zeroed.temporal_fast_proj.fill(0.0);
  zeroed.temporal_slow_proj.fill(0.0);
  for (int trial = 0; trial < 5; ++trial) {
    const VideoTensor v = random_video(rng, on);
    const auto prompt = embed_prompt(p, concept_code(trial, on.prompt_buckets));
    const auto a = forward(p, off, v, prompt);
    const auto b = forward(zeroed, on, v, prompt);
    EXPECT_EQ(a.scores, b.scores);
    EXPECT_EQ(a.level_logits, b.level_logits);
    EXPECT_EQ(a.hidden, b.hidden);
  }
}

// sigmoid(tanh(delta U1) U2), written out with plain loops.
std::array<double, kNumDimensions> judge_oracle(const AssessorParams& p, const std::vector<double>& a,
                                                const std::vector<double>& b) {
  std::vector<double> h(p.judge_w1.cols);
  for (std::size_t j = 0; j < h.size(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * p.judge_w1(i, j);
    h[j] = std::tanh(s);
  }
  std::array<double, kNumDimensions> out{};
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    double s = 0;
    for (std::size_t j = 0; j < h.size(); ++j) s += h[j] * p.judge_w2(j, d);
    out[d] = 1.0 / (1.0 + std::exp(-s));
  }
  return out;
}

TEST(Judge, AntisymmetryAndOracle) {
  const AssessorConfig c = small_config();
  AssessorParams p = initialize_params(c);
  for (auto& x : p.judge_w1.data) x *= 4.0;
  for (auto& x : p.judge_w2.data) x *= 4.0;
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(c.hidden_dim), b(c.hidden_dim);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const auto ab = judge_pair(p, a, b);
    const auto ba = judge_pair(p, b, a);
    const auto expected = judge_oracle(p, a, b);
    const auto same = judge_pair(p, a, a);
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      EXPECT_NEAR(ab[d] + ba[d], 1.0, 1e-12);
      EXPECT_EQ(ab[d] > 0.5, ba[d] < 0.5);
      EXPECT_NEAR(ab[d], expected[d], 1e-12);
      EXPECT_EQ(same[d], 0.5);
    }
  }
}

TEST(Levels, Bins) {
  EXPECT_EQ(mos_to_level(0), QualityLevel::kBad);
  EXPECT_EQ(mos_to_level(19.999), QualityLevel::kBad);
  EXPECT_EQ(mos_to_level(20), QualityLevel::kPoor);
  EXPECT_EQ(mos_to_level(40), QualityLevel::kFair);
  EXPECT_EQ(mos_to_level(60), QualityLevel::kGood);
  EXPECT_EQ(mos_to_level(80), QualityLevel::kExcellent);
  EXPECT_EQ(mos_to_level(100), QualityLevel::kExcellent);
  EXPECT_THROW(mos_to_level(-0.1), Error);
  EXPECT_THROW(mos_to_level(100.1), Error);
}

TEST(Losses, Examples) {
  std::array<std::array<double, kNumLevels>, kNumDimensions> logits{};
  std::array<QualityLevel, kNumDimensions> levels{};
  levels.fill(QualityLevel::kBad);
  EXPECT_NEAR(loss_language(logits, levels), std::log(5.0), 1e-12);
  for (auto& row : logits) row = {10, 0, 0, 0, 0};
  EXPECT_NEAR(loss_language(logits, levels), std::log(1 + 4 * std::exp(-10.0)), 1e-12);
  EXPECT_NEAR(loss_language(logits, levels), 1.8158e-4, 1e-8);
  for (auto& row : logits) row = {1, 0, 0, 0, 0};
  EXPECT_NEAR(loss_language(logits, levels), std::log(1 + 4 * std::exp(-1.0)), 1e-12);
  EXPECT_NEAR(loss_language(logits, levels), 0.904832, 1e-6);

  EXPECT_EQ(loss_mos(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_EQ(loss_mos(std::vector<double>{50, 60}, std::vector<double>{40, 80}), 15.0);
  EXPECT_EQ(loss_mos(std::vector<double>{7}, std::vector<double>{3}), 4.0);

  EXPECT_NEAR(loss_pairs(std::vector<double>{0.5}, std::vector<double>{1}), std::numbers::ln2, 1e-12);
  EXPECT_NEAR(loss_pairs(std::vector<double>{0.5}, std::vector<double>{0}), std::numbers::ln2, 1e-12);
  EXPECT_NEAR(loss_pairs(std::vector<double>{1 - 1e-12}, std::vector<double>{1}), 1e-12, 1e-15);
  EXPECT_NEAR(loss_pairs(std::vector<double>{0.8}, std::vector<double>{0}), -std::log(0.2), 1e-12);
  EXPECT_GE(loss_pairs(std::vector<double>{0.3, 0.9}, std::vector<double>{1, 0}), 0.0);
}

class GradientCheck : public ::testing::TestWithParam<std::tuple<int, bool, bool>> {};

TEST_P(GradientCheck, MatchesFiniteDifferences) {
  const auto [stage, temporal, finetune] = GetParam();
  AssessorConfig c = small_config();
  c.use_temporal = temporal;
  c.finetune_encoders_stage2 = finetune;
  Rng rng(40 + stage);
  const std::vector<TrainSample> samples = {random_sample(rng, c, "a"), random_sample(rng, c, "b")};
  PairSample pair{0, 1, {1, 0, 1, 0}, {true, true, true, true}};
  const Batch batch{samples, std::span(&pair, 1)};
  const AssessorParams p = testing::perturbed_params(c, 5);
  for (const auto& [name, err] : testing::gradient_relative_errors(p, c, batch, stage)) {
    EXPECT_LE(err, 1e-4) << "stage " << stage << " tensor " << name;
  }
}

INSTANTIATE_TEST_SUITE_P(AllStages, GradientCheck,
                         ::testing::Values(std::tuple{1, true, true}, std::tuple{2, true, true},
                                           std::tuple{2, true, false}, std::tuple{2, false, true},
                                           std::tuple{3, true, true}));

TEST(Gradients, StageContracts) {
  AssessorConfig c = small_config();
  Rng rng(1);
  const std::vector<TrainSample> samples = {random_sample(rng, c, "a")};
  const Batch batch{samples, {}};
  c.use_level_stage = false;
  try {
    gradients(initialize_params(c), c, batch, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStageDisabled);
  }
  c.use_level_stage = true;
  const auto names = trained_parameters(c, 3);
  EXPECT_EQ(names, (std::vector<std::string>{"judge_w1", "judge_w2"}));
  c.finetune_encoders_stage2 = false;
  const auto frozen = trained_parameters(c, 2);
  EXPECT_EQ(std::count(frozen.begin(), frozen.end(), "spatial_proj"), 0);
}

TEST(Gradients, ZeroAtPerfectRegression) {
  const AssessorConfig c = small_config();
  Rng rng(3);
  std::vector<TrainSample> samples = {random_sample(rng, c, "a")};
  AssessorParams p = zero_params(c);
  for (std::size_t d = 0; d < kNumDimensions; ++d) p.score_b.data[d] = samples[0].gt_scores[d];
  const auto g = gradients(p, c, Batch{samples, {}}, 2);
  EXPECT_EQ(g.loss, 0.0);
  g.grad.for_each([](std::string_view, const Matrix& m) {
    for (double x : m.data) EXPECT_EQ(x, 0.0);
  });
}

TEST(Train, ZeroEpochsKeepsInitialization) {
  AssessorConfig c = small_config();
  c.epochs = {0, 0, 0};
  Rng rng(4);
  std::vector<TrainSample> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(random_sample(rng, c, "s" + std::to_string(i)));
  const std::vector<PairSample> pairs = {{0, 1, {1, 1, 1, 1}, {true, true, true, true}}};
  const std::vector<int> stages = {1, 2, 3};
  EXPECT_EQ(train(c, samples, pairs, stages).params, initialize_params(c));
}

TEST(Train, DeterministicAndLearns) {
  AssessorConfig c = small_config();
  c.epochs = {5, 30, 5};
  c.learning_rate = {0.02, 0.002, 0.01};
  Rng rng(9);
  std::vector<TrainSample> samples;
  for (int i = 0; i < 24; ++i) samples.push_back(random_sample(rng, c, "s" + std::to_string(i)));
  const std::vector<std::string> groups(samples.size(), "g");
  const auto pairs = group_pairs(samples, groups, 2.0);
  const std::vector<int> stages = {1, 2, 3};
  std::vector<TrainLogEntry> log;
  const auto a = train(c, samples, pairs, stages, [&](const TrainLogEntry& e) { log.push_back(e); });
  const auto b = train(c, samples, pairs, stages);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(log.size(), 40u);
  double first2 = 0, last2 = 0;
  for (const auto& e : log) {
    if (e.stage == 2 && e.epoch == 1) first2 = e.loss;
    if (e.stage == 2 && e.epoch == 30) last2 = e.loss;
  }
  EXPECT_LT(last2, first2);
  // Stage 3 leaves the backbone alone.
  AssessorConfig only3 = c;
  const std::vector<int> s3 = {3};
  const auto judged = train_from(a.params, only3, samples, pairs, s3);
  AssessorParams masked = judged.params;
  masked.judge_w1 = a.params.judge_w1;
  masked.judge_w2 = a.params.judge_w2;
  EXPECT_EQ(masked, a.params);
}

TEST(Train, RequiresPairsForStageThree) {
  const AssessorConfig c = small_config();
  Rng rng(1);
  const std::vector<TrainSample> samples = {random_sample(rng, c, "a")};
  const std::vector<int> stages = {3};
  EXPECT_THROW(train(c, samples, {}, stages), Error);
  EXPECT_THROW(train(c, {}, {}, std::vector<int>{2}), Error);
}

}  // namespace
}  // namespace aigv
