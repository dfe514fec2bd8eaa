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

#include "aigv/taxonomy.h"

#include <fstream>
#include <sstream>

#include "aigv/error.h"
#include "aigv/text.h"
#include "json.hpp"

namespace aigv {

namespace detail {
extern const std::string_view kDefaultKeywordsJson;
}  // namespace detail

std::string_view to_string(Aspect aspect) {
  switch (aspect) {
    case Aspect::kSpatial: return "spatial";
    case Aspect::kTemporal: return "temporal";
    case Aspect::kAttribute: return "attribute";
  }
  return "?";
}

std::string_view to_string(Complexity c) {
  switch (c) {
    case Complexity::kSimple: return "simple";
    case Complexity::kMedium: return "medium";
    case Complexity::kComplex: return "complex";
  }
  return "?";
}

KeywordTable KeywordTable::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("keyword table: ") + e.what());
  }
  if (!doc.is_object() || doc.size() != 3) {
    throw Error(ErrorCode::kParseError,
                "keyword table must have exactly the aspects spatial, temporal, attribute");
  }
  KeywordTable table;
  for (const Aspect aspect : kAllAspects) {
    const std::string name(to_string(aspect));
    if (!doc.contains(name) || !doc[name].is_object()) {
      throw Error(ErrorCode::kParseError, "keyword table: missing aspect '" + name + "'");
    }
    auto& subs = table.aspects_[static_cast<std::size_t>(aspect)];
    for (const auto& [sub, words] : doc[name].items()) {
      if (!words.is_array() || words.empty()) {
        throw Error(ErrorCode::kParseError,
                    "keyword table: subcategory '" + sub + "' needs at least one keyword");
      }
      auto& list = subs[sub];
      for (const auto& w : words) {
        if (!w.is_string()) throw Error(ErrorCode::kParseError, "keyword must be a string");
        const auto word = w.get<std::string>();
        if (word.empty()) throw Error(ErrorCode::kParseError, "empty keyword in '" + sub + "'");
        for (const char c : word) {
          if (c >= 'A' && c <= 'Z') {
            throw Error(ErrorCode::kParseError, "keyword '" + word + "' is not lowercase");
          }
        }
        list.push_back(word);
      }
    }
  }
  return table;
}

KeywordTable KeywordTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open keyword table " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const KeywordTable& KeywordTable::builtin() {
  static const KeywordTable table = from_json(detail::kDefaultKeywordsJson);
  return table;
}

const std::set<std::string>& PromptCategories::of(Aspect aspect) const {
  switch (aspect) {
    case Aspect::kSpatial: return spatial;
    case Aspect::kTemporal: return temporal;
    case Aspect::kAttribute: return attribute;
  }
  return spatial;
}

const std::set<std::string>& default_stop_words() {
  static const std::set<std::string> words = {
      // articles
      "a", "an", "the",
      // auxiliaries
      "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "do",
      "does", "did",
      // pronouns and determiners
      "i", "me", "my", "you", "your", "he", "him", "his", "she", "her", "it", "its", "we",
      "our", "they", "them", "their", "this", "that", "these", "those",
      // prepositions
      "of", "in", "on", "at", "to", "for", "with", "by", "as", "up",
      // conjunctions
      "and", "or", "but", "so"};
  return words;
}

int count_non_stop_words(std::string_view text, const std::set<std::string>& stop_words) {
  int count = 0;
  for (const auto& token : tokenize(text)) {
    if (!stop_words.contains(token)) ++count;
  }
  return count;
}

Complexity complexity_for(int non_stop_count) {
  if (non_stop_count <= 8) return Complexity::kSimple;
  if (non_stop_count <= 11) return Complexity::kMedium;
  return Complexity::kComplex;
}

bool token_matches_keyword(std::string_view token, std::string_view keyword) {
  if (token == keyword) return true;
  if (!token.starts_with(keyword)) return false;
  const std::string_view suffix = token.substr(keyword.size());
  return suffix == "s" || suffix == "es";
}

namespace {

bool keyword_occurs(const std::vector<std::string>& tokens, const std::vector<std::string>& words) {
  if (words.empty() || words.size() > tokens.size()) return false;
  for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < words.size() && all; ++k) {
      all = token_matches_keyword(tokens[start + k], words[k]);
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

PromptCategories categorize(const PromptRecord& prompt, const KeywordTable& table,
                            const std::set<std::string>& stop_words) {
  const auto tokens = tokenize(prompt.text);
  PromptCategories out;
  for (const Aspect aspect : kAllAspects) {
    auto& target = aspect == Aspect::kSpatial    ? out.spatial
                   : aspect == Aspect::kTemporal ? out.temporal
                                                 : out.attribute;
    for (const auto& [sub, keywords] : table.subcategories(aspect)) {
      for (const auto& keyword : keywords) {
        if (keyword_occurs(tokens, tokenize(keyword))) {
          target.insert(sub);
          break;
        }
      }
    }
  }
  out.non_stop_count = count_non_stop_words(prompt.text, stop_words);
  out.complexity = complexity_for(out.non_stop_count);
  return out;
}

}  // namespace aigv
