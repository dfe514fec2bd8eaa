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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigv {

// Lowercases and splits on every non-alphanumeric byte. Empty tokens are
// dropped. This is the single tokenizer shared by prompt categorization,
// stop-word counting and prompt hashing.
std::vector<std::string> tokenize(std::string_view text);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws Error(kParseError) on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Fixed-point formatting with the given number of decimals ("%.*f").
std::string format_fixed(double value, int decimals);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace aigv
