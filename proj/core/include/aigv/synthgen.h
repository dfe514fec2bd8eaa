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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aigv/dimension.h"
#include "aigv/video.h"

namespace aigv {

inline constexpr int kNumConcepts = 64;
inline constexpr double kMaxVelocity = 6.0;
inline constexpr double kMaxNoise = 0.3;
inline constexpr int kMaxBlur = 3;
inline constexpr double kMaxFlicker = 0.5;
inline constexpr double kMaxJitter = 0.5;

// Recipe for one synthetic clip. Ranges: concept [0, 63], noise [0, 0.3],
// blur {0..3}, flicker [0, 0.5], jitter [0, 0.5], velocity [0, 6] px/frame,
// marker contrast [0, 1].
struct ClipSpec {
  std::uint64_t seed = 0;
  int concept_id = 0;
  double noise_sigma = 0.0;
  int blur_radius = 0;
  double flicker_amp = 0.0;
  double jitter_rate = 0.0;
  double velocity = 0.0;
  double marker_contrast = 0.0;
  bool prompt_matches_marker = true;

  bool operator==(const ClipSpec&) const = default;
};

struct SynthConfig {
  int frames = 8;
  int height = 64;
  int width = 64;
  double fps = 8.0;
};

// Closed-form scores on [0, 100], indexed by Dimension.
using GroundTruth = std::array<double, kNumDimensions>;

// Errors: kOutOfRangeSpec.
void validate(const ClipSpec& spec);
GroundTruth ground_truth(const ClipSpec& spec);

// Concept k draws stripes alternating between palette colour concept_color(k)
// and its complement. Bits 0-2 pick the level of each channel (bit 2 also
// places the marker in the upper or lower band), bits 3-4 the orientation in
// multiples of 45 degrees and bit 5 the stripe phase.
std::array<float, 3> concept_color(int concept_id);
int concept_orientation(int concept_id);
int concept_band(int concept_id);
bool concept_phase(int concept_id);

// A mismatched prompt names the concept that differs only in bit 2, so the
// described marker differs from the rendered one in colour and placement.
inline constexpr int kMismatchBit = 4;

// The concept named by the clip's prompt.
int prompt_concept(const ClipSpec& spec);

// Renders background, two wrapping discs and the concept marker, then applies
// blur, noise, flicker and frame jitter in that order. The result lies on the
// 8-bit grid so it survives an AVF round trip unchanged.
// Errors: kOutOfRangeSpec.
std::pair<VideoTensor, GroundTruth> gen_clip(const ClipSpec& spec, const SynthConfig& config);

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest directory
  ClipSpec spec;
  int prompt_concept = 0;
  GroundTruth truth{};
  std::array<QualityLevel, kNumDimensions> levels{};
};

struct SynthManifest {
  std::vector<ManifestEntry> entries;
};

// Draws n specs from the seed (even indices match their prompt, odd ones do
// not), renders them and, when out_dir is non-empty, writes
// clips/<id>.avf plus manifest.jsonl under it. Errors: kOutOfRange, kIoFailure.
SynthManifest gen_dataset(int n, std::uint64_t seed, const SynthConfig& config,
                          const std::filesystem::path& out_dir);

// Spec draws only, without rendering.
std::vector<ClipSpec> draw_specs(int n, std::uint64_t seed);

std::string manifest_to_jsonl(const SynthManifest& manifest);
// Errors: kParseError.
SynthManifest manifest_from_jsonl(std::string_view text);

}  // namespace aigv
