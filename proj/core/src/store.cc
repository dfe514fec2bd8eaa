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

#include "aigv/store.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "aigv/error.h"
#include "aigv/random.h"
#include "aigv/text.h"

namespace aigv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::string matrix_to_base64(const Matrix& m) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(m.size() * 4);
  for (const double v : m.data) put_u32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return base64_encode(bytes);
}

AssessorConfig config_from(const json& j) {
  AssessorConfig c;
  try {
    c.frames = j.at("frames").get<int>();
    c.height = j.at("height").get<int>();
    c.width = j.at("width").get<int>();
    c.patch_grid = j.at("patch_grid").get<int>();
    c.token_dim = j.at("token_dim").get<int>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.prompt_buckets = j.at("prompt_buckets").get<int>();
    c.use_temporal = j.at("use_temporal").get<bool>();
    c.use_level_stage = j.at("use_level_stage").get<bool>();
    c.finetune_encoders_stage2 = j.at("finetune_encoders_stage2").get<bool>();
    c.learning_rate = j.at("learning_rate").get<std::array<double, 3>>();
    c.epochs = j.at("epochs").get<std::array<int, 3>>();
    c.momentum = j.at("momentum").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("assessor config: ") + e.what());
  }
  c.validate();
  return c;
}

json config_json(const AssessorConfig& c) {
  return json{{"frames", c.frames},
              {"height", c.height},
              {"width", c.width},
              {"patch_grid", c.patch_grid},
              {"token_dim", c.token_dim},
              {"hidden_dim", c.hidden_dim},
              {"prompt_buckets", c.prompt_buckets},
              {"use_temporal", c.use_temporal},
              {"use_level_stage", c.use_level_stage},
              {"finetune_encoders_stage2", c.finetune_encoders_stage2},
              {"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"momentum", c.momentum},
              {"batch_size", c.batch_size},
              {"seed", c.seed}};
}

}  // namespace

std::uint8_t quantize_unit(float value) {
  const double v = std::clamp(static_cast<double>(value), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

void quantize_video(VideoTensor& video) {
  for (auto& v : video.data) v = static_cast<float>(quantize_unit(v)) / 255.0f;
}

std::vector<std::uint8_t> encode_avf(const VideoTensor& video) {
  if (video.frames <= 0 || video.height <= 0 || video.width <= 0 ||
      video.data.size() != static_cast<std::size_t>(video.frames) * video.frame_size()) {
    throw Error(ErrorCode::kShapeMismatch, "video tensor shape does not match its data");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kAvfHeaderBytes + video.data.size());
  out.insert(out.end(), {'A', 'V', 'F', '1'});
  put_u16(out, kAvfVersion);
  put_u32(out, static_cast<std::uint32_t>(video.frames));
  put_u32(out, static_cast<std::uint32_t>(video.height));
  put_u32(out, static_cast<std::uint32_t>(video.width));
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(video.fps)));
  for (const float v : video.data) out.push_back(quantize_unit(v));
  return out;
}

VideoTensor decode_avf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "AVF1", 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an AVF file");
  }
  if (bytes.size() < kAvfHeaderBytes) {
    throw Error(ErrorCode::kTruncatedPayload, "AVF header is cut short");
  }
  const auto version = static_cast<std::uint16_t>(bytes[4] | bytes[5] << 8);
  if (version != kAvfVersion) {
    throw Error(ErrorCode::kVersionMismatch, "AVF version " + std::to_string(version));
  }
  const std::uint32_t t = get_u32(&bytes[6]);
  const std::uint32_t h = get_u32(&bytes[10]);
  const std::uint32_t w = get_u32(&bytes[14]);
  const float fps = std::bit_cast<float>(get_u32(&bytes[18]));
  if (t == 0 || h == 0 || w == 0 || t > 1u << 16 || h > 1u << 14 || w > 1u << 14) {
    throw Error(ErrorCode::kShapeMismatch, "AVF header declares an unusable frame shape");
  }
  const std::uint64_t payload = static_cast<std::uint64_t>(t) * h * w * 3;
  if (bytes.size() - kAvfHeaderBytes != payload) {
    throw Error(ErrorCode::kTruncatedPayload,
                "payload is " + std::to_string(bytes.size() - kAvfHeaderBytes) + " bytes, header implies " +
                    std::to_string(payload));
  }
  VideoTensor video(static_cast<int>(t), static_cast<int>(h), static_cast<int>(w), fps);
  for (std::size_t i = 0; i < payload; ++i) {
    video.data[i] = static_cast<float>(bytes[kAvfHeaderBytes + i]) / 255.0f;
  }
  return video;
}

void write_avf(const VideoTensor& video, const fs::path& path) {
  write_file_atomic(path, encode_avf(video));
}

VideoTensor read_avf(const fs::path& path) { return decode_avf(read_file_bytes(path)); }

SplitSpec split_dataset(std::vector<std::string> ids, std::uint64_t seed) {
  if (ids.size() < 5) {
    throw Error(ErrorCode::kTooFewItems,
                "a 4:1 split needs at least 5 items, got " + std::to_string(ids.size()));
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::kDuplicateRecord, "split ids are not unique");
  }
  Rng rng(seed);
  shuffle(std::span<std::string>(ids), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(ids.size())));
  SplitSpec split;
  split.seed = seed;
  split.train_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

std::string config_to_json(const AssessorConfig& config) { return config_json(config).dump(); }

AssessorConfig config_from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParseError, "assessor config is not valid JSON");
  return config_from(j);
}

void save_checkpoint(const AssessorParams& params, const AssessorConfig& config,
                     const fs::path& path) {
  json tensors = json::object();
  params.for_each([&](std::string_view name, const Matrix& m) {
    tensors[std::string(name)] = {{"shape", {m.rows, m.cols}}, {"data", matrix_to_base64(m)}};
  });
  json doc = {{"format_version", kCheckpointFormatVersion},
              {"config", config_json(config)},
              {"params", tensors}};
  write_file_atomic(path, doc.dump(1) + "\n");
}

Checkpoint load_checkpoint(const fs::path& path) {
  json doc = json::parse(read_file_text(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kParseError, path.string() + " is not a JSON checkpoint");
  }
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw Error(ErrorCode::kParseError, "checkpoint lacks format_version");
  }
  if (doc["format_version"].get<long long>() != kCheckpointFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "checkpoint format_version " + doc["format_version"].dump() + ", expected " +
                    std::to_string(kCheckpointFormatVersion));
  }
  if (!doc.contains("config") || !doc.contains("params") || !doc["params"].is_object()) {
    throw Error(ErrorCode::kParseError, "checkpoint lacks config or params");
  }
  Checkpoint ck;
  ck.config = config_from(doc["config"]);
  ck.params = zero_params(ck.config);
  const json& tensors = doc["params"];
  ck.params.for_each([&](std::string_view name, Matrix& m) {
    const std::string key(name);
    if (!tensors.contains(key)) throw Error(ErrorCode::kShapeMismatch, "missing tensor " + key);
    const json& t = tensors[key];
    std::vector<std::size_t> shape;
    try {
      shape = t.at("shape").get<std::vector<std::size_t>>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kParseError, "tensor " + key + " has no usable shape");
    }
    if (shape.size() != 2 || shape[0] != m.rows || shape[1] != m.cols) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor " + key + " has shape " + t["shape"].dump() + ", expected [" +
                      std::to_string(m.rows) + "," + std::to_string(m.cols) + "]");
    }
    if (!t.contains("data") || !t["data"].is_string()) {
      throw Error(ErrorCode::kParseError, "tensor " + key + " has no data");
    }
    const auto bytes = base64_decode(t["data"].get<std::string>());
    if (bytes.size() != m.size() * 4) {
      throw Error(ErrorCode::kShapeMismatch, "tensor " + key + " data length disagrees with shape");
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const float v = std::bit_cast<float>(get_u32(&bytes[i * 4]));
      if (!std::isfinite(v)) throw Error(ErrorCode::kParseError, "tensor " + key + " is not finite");
      m.data[i] = v;
    }
  });
  return ck;
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "cannot read " + path.string());
  return bytes;
}

std::string read_file_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot replace " + path.string());
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace aigv
