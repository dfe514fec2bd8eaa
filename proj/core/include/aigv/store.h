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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aigv/assessor.h"
#include "aigv/video.h"

namespace aigv {

// AVF container, little-endian throughout:
//   "AVF1" | u16 version (1) | u32 T | u32 H | u32 W | f32 fps | T*H*W*3 bytes
inline constexpr std::size_t kAvfHeaderBytes = 22;
inline constexpr std::uint16_t kAvfVersion = 1;

// Nearest 8-bit level, halves rounded up; input clamped to [0, 1].
std::uint8_t quantize_unit(float value);

// Rounds every sample onto the 8-bit grid that AVF stores.
void quantize_video(VideoTensor& video);

std::vector<std::uint8_t> encode_avf(const VideoTensor& video);
// Errors: kBadMagic, kVersionMismatch, kTruncatedPayload.
VideoTensor decode_avf(std::span<const std::uint8_t> bytes);

// Errors: kIoFailure plus everything decode_avf raises.
void write_avf(const VideoTensor& video, const std::filesystem::path& path);
VideoTensor read_avf(const std::filesystem::path& path);

struct SplitSpec {
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;  // sorted
  std::vector<std::string> test_ids;   // sorted
};

// Seeded shuffle, first round(0.8 n) to train. Errors: kTooFewItems (n < 5).
SplitSpec split_dataset(std::vector<std::string> ids, std::uint64_t seed);

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
  AssessorParams params;
  AssessorConfig config;
};

// Errors: kIoFailure.
void save_checkpoint(const AssessorParams& params, const AssessorConfig& config,
                     const std::filesystem::path& path);
// Errors: kVersionMismatch, kShapeMismatch, kParseError, kIoFailure.
Checkpoint load_checkpoint(const std::filesystem::path& path);

// JSON object text for a config; used by checkpoints and CLI reports.
std::string config_to_json(const AssessorConfig& config);
AssessorConfig config_from_json(std::string_view text);

// Whole-file helpers. write_file_atomic writes a sibling temp file and renames
// it over the target so readers never observe a partial file.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace aigv
