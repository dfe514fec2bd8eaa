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

#include <filesystem>

#include "aigv/assessor.h"
#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/store.h"
#include "aigv/synthgen.h"

namespace aigv {
namespace {

ClipSpec clean_spec() {
  ClipSpec s;
  s.seed = 1;
  s.concept_id = 5;
  s.velocity = kMaxVelocity;
  s.marker_contrast = 1.0;
  return s;
}

TEST(GroundTruth, Extremes) {
  for (double v : ground_truth(clean_spec())) EXPECT_DOUBLE_EQ(v, 100.0);
  ClipSpec s = clean_spec();
  s.noise_sigma = kMaxNoise;
  s.blur_radius = kMaxBlur;
  EXPECT_DOUBLE_EQ(ground_truth(s)[index_of(Dimension::kStatic)], 0.0);
}

TEST(GroundTruth, Monotone) {
  Rng rng(21);
  const auto at = [](const ClipSpec& s, Dimension d) { return ground_truth(s)[index_of(d)]; };
  for (int trial = 0; trial < 200; ++trial) {
    ClipSpec s;
    s.noise_sigma = rng.uniform(0, kMaxNoise);
    s.blur_radius = static_cast<int>(rng.below(kMaxBlur + 1));
    s.flicker_amp = rng.uniform(0, kMaxFlicker);
    s.jitter_rate = rng.uniform(0, kMaxJitter);
    s.velocity = rng.uniform(0, kMaxVelocity);
    s.marker_contrast = rng.uniform();
    for (double g : ground_truth(s)) {
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, 100.0);
    }
    ClipSpec t = s;
    t.noise_sigma = std::min(kMaxNoise, s.noise_sigma + 0.05);
    EXPECT_LE(at(t, Dimension::kStatic), at(s, Dimension::kStatic));
    t = s;
    t.velocity = std::min(kMaxVelocity, s.velocity + 0.5);
    EXPECT_GE(at(t, Dimension::kDynamic), at(s, Dimension::kDynamic));
    t = s;
    t.flicker_amp = std::min(kMaxFlicker, s.flicker_amp + 0.05);
    EXPECT_LE(at(t, Dimension::kTemporal), at(s, Dimension::kTemporal));
    t = s;
    t.jitter_rate = std::min(kMaxJitter, s.jitter_rate + 0.05);
    EXPECT_LE(at(t, Dimension::kTemporal), at(s, Dimension::kTemporal));
    t = s;
    t.prompt_matches_marker = false;
    EXPECT_LE(at(t, Dimension::kTv), at(s, Dimension::kTv));
  }
}

TEST(GenClip, DeterministicAndQuantized) {
  ClipSpec s = clean_spec();
  s.noise_sigma = 0.1;
  s.flicker_amp = 0.2;
  s.jitter_rate = 0.3;
  s.blur_radius = 1;
  const auto [a, truth] = gen_clip(s, SynthConfig{});
  const auto [b, truth2] = gen_clip(s, SynthConfig{});
  EXPECT_EQ(a, b);
  EXPECT_EQ(truth, truth2);
  EXPECT_EQ(a.frames, 8);
  EXPECT_EQ(a.height, 64);
  VideoTensor q = a;
  quantize_video(q);
  EXPECT_EQ(q, a);
  s.seed = 2;
  EXPECT_NE(gen_clip(s, SynthConfig{}).first, a);
}

TEST(GenClip, RejectsOutOfRangeSpecs) {
  ClipSpec s = clean_spec();
  s.noise_sigma = 0.31;
  try {
    gen_clip(s, SynthConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRangeSpec);
  }
  s = clean_spec();
  s.concept_id = kNumConcepts;
  EXPECT_THROW(validate(s), Error);
  s = clean_spec();
  s.blur_radius = -1;
  EXPECT_THROW(validate(s), Error);
}

TEST(Concepts, MismatchedPrompt) {
  ClipSpec s = clean_spec();
  EXPECT_EQ(prompt_concept(s), s.concept_id);
  s.prompt_matches_marker = false;
  EXPECT_EQ(prompt_concept(s), s.concept_id ^ kMismatchBit);
  EXPECT_NE(concept_band(s.concept_id), concept_band(prompt_concept(s)));
  EXPECT_NE(concept_color(s.concept_id), concept_color(prompt_concept(s)));
}

TEST(GenDataset, ManifestAndFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "aigv_synth_test";
  std::filesystem::remove_all(dir);
  const auto m = gen_dataset(6, 11, SynthConfig{}, dir);
  ASSERT_EQ(m.entries.size(), 6u);
  const auto again = manifest_from_jsonl(read_file_text(dir / "manifest.jsonl"));
  ASSERT_EQ(again.entries.size(), 6u);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    EXPECT_EQ(e.spec, again.entries[i].spec);
    EXPECT_EQ(e.truth, again.entries[i].truth);
    EXPECT_EQ(e.spec.prompt_matches_marker, i % 2 == 0);
    for (std::size_t d = 0; d < kNumDimensions; ++d) EXPECT_EQ(e.levels[d], mos_to_level(e.truth[d]));
    EXPECT_EQ(read_avf(dir / e.path), gen_clip(e.spec, SynthConfig{}).first);
  }
  EXPECT_EQ(manifest_to_jsonl(gen_dataset(6, 11, SynthConfig{}, {})), read_file_text(dir / "manifest.jsonl"));
  std::filesystem::remove_all(dir);
  const auto one = gen_dataset(1, 3, SynthConfig{}, {});
  EXPECT_EQ(one.entries.size(), 1u);
}

TEST(GenDataset, ScoresSpanTheRange) {
  const auto specs = draw_specs(500, 7);
  for (Dimension d : kAllDimensions) {
    double lo = 100, hi = 0;
    for (const auto& s : specs) {
      const double g = ground_truth(s)[index_of(d)];
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    EXPECT_GE(hi - lo, 80.0) << to_string(d);
  }
  EXPECT_EQ(draw_specs(50, 7), draw_specs(50, 7));
}

}  // namespace
}  // namespace aigv
