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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace aigv {

struct PromptRecord {
  std::string prompt_id;
  std::string text;
  std::string source;
};

enum class Aspect { kSpatial = 0, kTemporal = 1, kAttribute = 2 };
inline constexpr std::array<Aspect, 3> kAllAspects = {Aspect::kSpatial, Aspect::kTemporal,
                                                      Aspect::kAttribute};
std::string_view to_string(Aspect aspect);

// aspect -> subcategory -> keywords. A keyword may span several words
// ("out of"); each word must match consecutive prompt tokens.
class KeywordTable {
 public:
  using Subcategories = std::map<std::string, std::vector<std::string>>;

  // Validates: exactly the three aspects, >= 1 keyword per subcategory,
  // keywords non-empty and lowercase. Throws Error(kParseError).
  static KeywordTable from_json(std::string_view json_text);
  static KeywordTable from_file(const std::string& path);
  // The table shipped in data/keywords.json, compiled in.
  static const KeywordTable& builtin();

  const Subcategories& subcategories(Aspect aspect) const {
    return aspects_[static_cast<std::size_t>(aspect)];
  }

 private:
  std::array<Subcategories, 3> aspects_;
};

enum class Complexity { kSimple, kMedium, kComplex };
std::string_view to_string(Complexity c);

struct PromptCategories {
  std::set<std::string> spatial;
  std::set<std::string> temporal;
  std::set<std::string> attribute;
  Complexity complexity = Complexity::kSimple;
  int non_stop_count = 0;

  const std::set<std::string>& of(Aspect aspect) const;

  bool operator==(const PromptCategories&) const = default;
};

// The fixed 52-word English stop list used for complexity counting.
// Attribute keywords such as "then", "before" and "after" are deliberately
// absent.
const std::set<std::string>& default_stop_words();

int count_non_stop_words(std::string_view text, const std::set<std::string>& stop_words);

// <= 8 simple, 9..11 medium, >= 12 complex.
Complexity complexity_for(int non_stop_count);

// Whole-token match with a trailing plural "s" or "es" stripped from the
// prompt token, so "backwards" matches "backward" but "category" never
// matches "cat".
bool token_matches_keyword(std::string_view token, std::string_view keyword);

PromptCategories categorize(const PromptRecord& prompt, const KeywordTable& table,
                            const std::set<std::string>& stop_words = default_stop_words());

}  // namespace aigv
