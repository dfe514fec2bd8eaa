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

#include "aigv/synthgen.h"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <numeric>

#include "aigv/assessor.h"
#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/store.h"

namespace aigv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDiscRadius = 18.0;
constexpr double kDiscGratingPeriod = 24.0;
constexpr double kDriftPeriod = 32.0;
constexpr double kDriftSpeed = 5.0;  // px/frame, every clip
constexpr double kDriftAmplitude = 0.35;
constexpr int kCheckerCell = 4;
constexpr int kStripeWidth = 8;

// Triangle wave with unit period, range [-1, 1].
double triangle(double phase) {
  const double f = phase - std::floor(phase);
  return f < 0.5 ? 4.0 * f - 1.0 : 3.0 - 4.0 * f;
}

void check_range(double value, double lo, double hi, const char* name) {
  if (!(value >= lo && value <= hi)) {
    throw Error(ErrorCode::kOutOfRangeSpec, std::string(name) + " = " + std::to_string(value) +
                                                " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
  }
}

// Base layer: a mild two-axis gradient shared by every clip.
// Flat along y so the two marker bands start from the same level.
std::array<float, 3> background(int x, int w) {
  const float fx = static_cast<float>(x) / static_cast<float>(std::max(1, w - 1));
  return {0.40f + 0.10f * fx, 0.45f, 0.45f};
}

void box_blur(VideoTensor& video, int radius) {
  if (radius == 0) return;
  const int h = video.height, w = video.width;
  std::vector<float> tmp(video.frame_size());
  for (int t = 0; t < video.frames; ++t) {
    float* frame = video.data.data() + t * video.frame_size();
    // horizontal then vertical, edges clamped
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          float sum = 0.0f;
          for (int k = -radius; k <= radius; ++k) {
            const int xx = std::clamp(x + k, 0, w - 1);
            sum += frame[(y * w + xx) * 3 + c];
          }
          tmp[(y * w + x) * 3 + c] = sum / static_cast<float>(2 * radius + 1);
        }
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          float sum = 0.0f;
          for (int k = -radius; k <= radius; ++k) {
            const int yy = std::clamp(y + k, 0, h - 1);
            sum += tmp[(yy * w + x) * 3 + c];
          }
          frame[(y * w + x) * 3 + c] = sum / static_cast<float>(2 * radius + 1);
        }
      }
    }
  }
}

json spec_json(const ClipSpec& s) {
  return {{"seed", s.seed},
          {"concept_id", s.concept_id},
          {"noise_sigma", s.noise_sigma},
          {"blur_radius", s.blur_radius},
          {"flicker_amp", s.flicker_amp},
          {"jitter_rate", s.jitter_rate},
          {"velocity", s.velocity},
          {"marker_contrast", s.marker_contrast},
          {"prompt_matches_marker", s.prompt_matches_marker}};
}

}  // namespace

void validate(const ClipSpec& spec) {
  check_range(spec.concept_id, 0, kNumConcepts - 1, "concept_id");
  check_range(spec.noise_sigma, 0.0, kMaxNoise, "noise_sigma");
  check_range(spec.blur_radius, 0, kMaxBlur, "blur_radius");
  check_range(spec.flicker_amp, 0.0, kMaxFlicker, "flicker_amp");
  check_range(spec.jitter_rate, 0.0, kMaxJitter, "jitter_rate");
  check_range(spec.velocity, 0.0, kMaxVelocity, "velocity");
  check_range(spec.marker_contrast, 0.0, 1.0, "marker_contrast");
}

GroundTruth ground_truth(const ClipSpec& spec) {
  validate(spec);
  GroundTruth gt{};
  gt[index_of(Dimension::kStatic)] =
      100.0 * (1.0 - (spec.noise_sigma / kMaxNoise + spec.blur_radius / double{kMaxBlur}) / 2.0);
  gt[index_of(Dimension::kTemporal)] =
      100.0 * (1.0 - (spec.flicker_amp / kMaxFlicker + spec.jitter_rate / kMaxJitter) / 2.0);
  gt[index_of(Dimension::kDynamic)] = 100.0 * spec.velocity / kMaxVelocity;
  gt[index_of(Dimension::kTv)] =
      spec.prompt_matches_marker ? 100.0 * spec.marker_contrast : 100.0 * spec.marker_contrast * 0.1;
  return gt;
}

int prompt_concept(const ClipSpec& spec) {
  if (spec.prompt_matches_marker) return spec.concept_id;
  return spec.concept_id ^ kMismatchBit;
}

std::array<float, 3> concept_color(int k) {
  return {(k & 1) ? 0.8f : 0.2f, (k & 2) ? 0.8f : 0.2f, (k & 4) ? 0.8f : 0.2f};
}

int concept_orientation(int k) { return (k >> 3) & 3; }

int concept_band(int k) { return (k >> 2) & 1; }

bool concept_phase(int k) { return (k >> 5) & 1; }

std::pair<VideoTensor, GroundTruth> gen_clip(const ClipSpec& spec, const SynthConfig& config) {
  validate(spec);
  if (config.frames < 2 || config.height < 4 || config.width < 4) {
    throw Error(ErrorCode::kOutOfRangeSpec, "clip must have at least 2 frames of 4x4 pixels");
  }
  const int t_count = config.frames, h = config.height, w = config.width;
  VideoTensor video(t_count, h, w, config.fps);

  Rng layout(Rng::mix(spec.seed, 2));
  std::array<std::array<double, 4>, 2> discs{};  // y0, x0, dy, dx
  for (auto& d : discs) {
    const double angle = layout.uniform(0.0, 2.0 * std::numbers::pi);
    d = {layout.uniform(0.0, h), layout.uniform(0.0, w), spec.velocity * std::sin(angle),
         spec.velocity * std::cos(angle)};
  }

  const auto color = concept_color(spec.concept_id);
  const int orientation = concept_orientation(spec.concept_id);
  const bool phase = concept_phase(spec.concept_id);
  const float alpha = static_cast<float>(spec.marker_contrast);
  // The marker sits in the upper or lower band, centred horizontally.
  const int y_lo = concept_band(spec.concept_id) == 0 ? h / 8 : 5 * h / 8;
  const int y_hi = y_lo + h / 4, x_lo = w / 4, x_hi = 3 * w / 4;
  const double two_pi = 2.0 * std::numbers::pi;

  for (int t = 0; t < t_count; ++t) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::array<float, 3> px = background(x, w);
        // Red: the two discs, each carrying a grating that moves with it.
        for (const auto& d : discs) {
          const double cy = d[0] + t * d[2], cx = d[1] + t * d[3];
          const double dy = std::remainder(y + 0.5 - cy, static_cast<double>(h));
          const double dx = std::remainder(x + 0.5 - cx, static_cast<double>(w));
          const double cover = std::clamp(kDiscRadius + 0.5 - std::hypot(dy, dx), 0.0, 1.0);
          if (cover > 0.0) {
            px[0] += static_cast<float>(cover * (0.25 + 0.2 * std::sin(two_pi * dx / kDiscGratingPeriod)));
          }
        }
        // Green: a triangle grating drifting at constant speed in every clip.
        px[1] += static_cast<float>(kDriftAmplitude * triangle((x - kDriftSpeed * t) / kDriftPeriod));
        // Blue: a static fine checker.
        px[2] += ((x / kCheckerCell + y / kCheckerCell) % 2 == 0) ? 0.12f : -0.12f;
        if (alpha > 0.0f && y >= y_lo && y < y_hi && x >= x_lo && x < x_hi) {
          // Dark stripes alternating between the concept colour and its
          // complement, offset by half a stripe so every patch holds both.
          // The mean is the same for every concept.
          const int u = y - y_lo, v = x - x_lo;
          int coord = 0;
          switch (orientation) {
            case 0: coord = u; break;
            case 1: coord = u + v; break;
            case 2: coord = v; break;
            default: coord = u - v + (x_hi - x_lo); break;
          }
          const bool on = ((coord + kStripeWidth / 2) / kStripeWidth) % 2 == (phase ? 1 : 0);
          for (int c = 0; c < 3; ++c) {
            const float marker = 0.5f * (on ? color[c] : 1.0f - color[c]);
            px[c] += alpha * (marker - px[c]);
          }
        }
        for (int c = 0; c < 3; ++c) video.at(t, y, x, c) = std::clamp(px[c], 0.0f, 1.0f);
      }
    }
  }

  box_blur(video, spec.blur_radius);

  // Fixed-pattern sensor noise: one field shared by all frames, so frame
  // differences see motion and not grain.
  if (spec.noise_sigma > 0.0) {
    Rng noise(Rng::mix(spec.seed, 1));
    std::vector<float> field(video.frame_size());
    for (auto& v : field) v = static_cast<float>(spec.noise_sigma * noise.normal());
    for (int t = 0; t < t_count; ++t) {
      float* frame = video.data.data() + t * video.frame_size();
      for (std::size_t i = 0; i < field.size(); ++i) {
        frame[i] = std::clamp(frame[i] + field[i], 0.0f, 1.0f);
      }
    }
  }

  if (spec.flicker_amp > 0.0) {
    for (int t = 0; t < t_count; ++t) {
      const auto shift = static_cast<float>((t % 2 == 0 ? 0.5 : -0.5) * spec.flicker_amp);
      float* frame = video.data.data() + t * video.frame_size();
      for (std::size_t i = 0; i < video.frame_size(); ++i) {
        frame[i] = std::clamp(frame[i] + shift, 0.0f, 1.0f);
      }
    }
  }

  const auto swaps = static_cast<std::size_t>(std::lround(spec.jitter_rate * (t_count - 1)));
  if (swaps > 0) {
    std::vector<int> slots(static_cast<std::size_t>(t_count - 1));
    std::iota(slots.begin(), slots.end(), 0);
    Rng jitter(Rng::mix(spec.seed, 4));
    partial_shuffle(std::span<int>(slots), swaps, jitter);
    for (std::size_t i = 0; i < swaps && i < slots.size(); ++i) {
      auto a = video.data.begin() + slots[i] * static_cast<std::ptrdiff_t>(video.frame_size());
      std::swap_ranges(a, a + static_cast<std::ptrdiff_t>(video.frame_size()),
                       a + static_cast<std::ptrdiff_t>(video.frame_size()));
    }
  }

  quantize_video(video);
  return {std::move(video), ground_truth(spec)};
}

std::vector<ClipSpec> draw_specs(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kOutOfRange, "dataset size must be at least 1");
  std::vector<ClipSpec> specs;
  specs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i)));
    ClipSpec s;
    s.seed = rng.next_u64();
    s.concept_id = static_cast<int>(rng.below(kNumConcepts));
    s.noise_sigma = rng.uniform(0.0, kMaxNoise);
    s.blur_radius = static_cast<int>(rng.below(kMaxBlur + 1));
    s.flicker_amp = rng.uniform(0.0, kMaxFlicker);
    s.jitter_rate = rng.uniform(0.0, kMaxJitter);
    s.velocity = rng.uniform(0.0, kMaxVelocity);
    s.marker_contrast = rng.uniform(0.0, 1.0);
    s.prompt_matches_marker = i % 2 == 0;
    specs.push_back(s);
  }
  return specs;
}

SynthManifest gen_dataset(int n, std::uint64_t seed, const SynthConfig& config,
                          const fs::path& out_dir) {
  const auto specs = draw_specs(n, seed);
  SynthManifest manifest;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir / "clips", ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + (out_dir / "clips").string());
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "clip_%04zu", i);
    ManifestEntry e;
    e.id = id;
    e.path = "clips/" + e.id + ".avf";
    e.spec = specs[i];
    e.prompt_concept = prompt_concept(e.spec);
    e.truth = ground_truth(e.spec);
    for (std::size_t d = 0; d < kNumDimensions; ++d) e.levels[d] = mos_to_level(e.truth[d]);
    if (!out_dir.empty()) write_avf(gen_clip(e.spec, config).first, out_dir / e.path);
    manifest.entries.push_back(std::move(e));
  }
  if (!out_dir.empty()) write_file_atomic(out_dir / "manifest.jsonl", manifest_to_jsonl(manifest));
  return manifest;
}

std::string manifest_to_jsonl(const SynthManifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    json truth = json::object(), levels = json::object();
    for (const Dimension d : kAllDimensions) {
      truth[std::string(to_string(d))] = e.truth[index_of(d)];
      levels[std::string(to_string(d))] = std::string(to_string(e.levels[index_of(d)]));
    }
    json line = {{"id", e.id},
                 {"path", e.path},
                 {"spec", spec_json(e.spec)},
                 {"prompt_concept", e.prompt_concept},
                 {"truth", truth},
                 {"levels", levels}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

SynthManifest manifest_from_jsonl(std::string_view text) {
  SynthManifest manifest;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json j = json::parse(line);
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      const json& s = j.at("spec");
      e.spec.seed = s.at("seed").get<std::uint64_t>();
      e.spec.concept_id = s.at("concept_id").get<int>();
      e.spec.noise_sigma = s.at("noise_sigma").get<double>();
      e.spec.blur_radius = s.at("blur_radius").get<int>();
      e.spec.flicker_amp = s.at("flicker_amp").get<double>();
      e.spec.jitter_rate = s.at("jitter_rate").get<double>();
      e.spec.velocity = s.at("velocity").get<double>();
      e.spec.marker_contrast = s.at("marker_contrast").get<double>();
      e.spec.prompt_matches_marker = s.at("prompt_matches_marker").get<bool>();
      e.prompt_concept = j.at("prompt_concept").get<int>();
      for (const Dimension d : kAllDimensions) {
        const std::string key(to_string(d));
        e.truth[index_of(d)] = j.at("truth").at(key).get<double>();
        e.levels[index_of(d)] = parse_quality_level(j.at("levels").at(key).get<std::string>());
      }
      manifest.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kParseError,
                  "manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return manifest;
}

}  // namespace aigv
