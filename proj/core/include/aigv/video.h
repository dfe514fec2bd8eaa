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

#include <cstddef>
#include <vector>

namespace aigv {

// Frame tensor T x H x W x 3, frame-major, row-major, interleaved RGB, with
// values in [0, 1].
struct VideoTensor {
  int frames = 0;
  int height = 0;
  int width = 0;
  double fps = 8.0;
  std::vector<float> data;

  VideoTensor() = default;
  VideoTensor(int t, int h, int w, double frame_rate)
      : frames(t), height(h), width(w), fps(frame_rate),
        data(static_cast<std::size_t>(t) * h * w * 3, 0.0f) {}

  std::size_t index(int t, int y, int x, int c) const {
    return ((static_cast<std::size_t>(t) * height + y) * width + x) * 3 + c;
  }
  float& at(int t, int y, int x, int c) { return data[index(t, y, x, c)]; }
  float at(int t, int y, int x, int c) const { return data[index(t, y, x, c)]; }

  std::size_t frame_size() const { return static_cast<std::size_t>(height) * width * 3; }

  bool operator==(const VideoTensor&) const = default;
};

}  // namespace aigv
