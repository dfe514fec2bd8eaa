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

#include <cstdio>
#include <string>
#include <vector>

#include "aigv/pairstudy.h"

namespace aigv::testing {

// Metadata for `prompts` prompts, `open_models` open-source models with
// `open_variants` videos each and `closed_models` closed-source models with
// one video each.
inline std::vector<VideoMeta> synthetic_meta(int prompts, int open_models = 8,
                                             int open_variants = 4, int closed_models = 4) {
  std::vector<VideoMeta> out;
  char buf[64];
  for (int p = 0; p < prompts; ++p) {
    std::snprintf(buf, sizeof(buf), "q%04d", p);
    const std::string prompt = buf;
    for (int m = 0; m < open_models + closed_models; ++m) {
      const bool open = m < open_models;
      const int variants = open ? open_variants : 1;
      for (int v = 1; v <= variants; ++v) {
        std::snprintf(buf, sizeof(buf), "%s-m%02d-%d", prompt.c_str(), m, v);
        out.push_back({buf, "model" + std::to_string(m), prompt, v, open, 8, 8.0, 64, 64});
      }
    }
  }
  return out;
}

}  // namespace aigv::testing
