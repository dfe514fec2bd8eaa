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

#include "aigv/records_io.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <set>

#include "aigv/error.h"
#include "aigv/text.h"

namespace aigv {

using nlohmann::json;

namespace {

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

// Calls `fn(line_no, fields)` for every non-empty data line after checking
// the header. Trailing '\r' is tolerated.
void for_each_csv_row(std::string_view text, std::span<const std::string_view> header,
                      std::size_t min_fields,
                      const std::function<void(std::size_t, const std::vector<std::string>&)>& fn) {
  std::size_t line_no = 0;
  bool seen_header = false;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (!seen_header) {
      if (fields.size() < min_fields || fields.size() > header.size()) {
        throw Error(ErrorCode::kParseError, at_line(line_no, "unexpected header '" + line + "'"));
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] != header[i]) {
          throw Error(ErrorCode::kParseError,
                      at_line(line_no, "expected column '" + std::string(header[i]) + "'"));
        }
      }
      seen_header = true;
      continue;
    }
    if (fields.size() < min_fields || fields.size() > header.size()) {
      throw Error(ErrorCode::kParseError,
                  at_line(line_no, "expected " + std::to_string(header.size()) + " fields"));
    }
    fn(line_no, fields);
  }
  if (!seen_header) throw Error(ErrorCode::kParseError, "missing CSV header");
}

long long parse_int(const std::string& s, std::size_t line_no) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kParseError, at_line(line_no, "bad integer '" + s + "'"));
  }
  return v;
}

double parse_real(const std::string& s, std::size_t line_no) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::kParseError, at_line(line_no, "bad number '" + s + "'"));
  }
  return v;
}

void check_csv_field(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw Error(ErrorCode::kParseError, "field '" + s + "' cannot be written to CSV");
  }
}

// Wraps per-line JSON parsing so every failure, including type errors from
// nlohmann, surfaces as kParseError with the line number.
template <typename T>
std::vector<T> parse_jsonl(std::string_view text, const std::function<T(const json&)>& fn) {
  std::vector<T> out;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(fn(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError, at_line(line_no, e.what()));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseError && e.code() != ErrorCode::kInvalidChoice) throw;
      throw Error(ErrorCode::kParseError, at_line(line_no, e.what()));
    }
  }
  return out;
}

std::string lines(std::span<const json> objects) {
  std::string out;
  for (const auto& j : objects) {
    out += j.dump();
    out += '\n';
  }
  return out;
}

json aspect_to_json(const std::set<std::string>& names) {
  if (names.empty()) return "null";
  return json(std::vector<std::string>(names.begin(), names.end()));
}

std::set<std::string> aspect_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "null") return {};
  if (j.is_null()) return {};
  return j.get<std::set<std::string>>();
}

Complexity parse_complexity(std::string_view token) {
  for (auto c : {Complexity::kSimple, Complexity::kMedium, Complexity::kComplex}) {
    if (to_string(c) == token) return c;
  }
  throw Error(ErrorCode::kParseError, "unknown complexity '" + std::string(token) + "'");
}

}  // namespace

std::vector<RawRating> ratings_from_csv(std::string_view text) {
  static constexpr std::string_view kHeader[] = {"subject_id", "video_id", "dimension", "score"};
  std::vector<RawRating> out;
  for_each_csv_row(text, kHeader, 4, [&](std::size_t line_no, const auto& f) {
    RawRating r;
    r.subject_id = f[0];
    r.video_id = f[1];
    try {
      r.dimension = parse_dimension(f[2]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, at_line(line_no, e.what()));
    }
    r.score = static_cast<int>(parse_int(f[3], line_no));
    out.push_back(std::move(r));
  });
  return out;
}

std::string rating_to_csv_line(const RawRating& r) {
  check_csv_field(r.subject_id);
  check_csv_field(r.video_id);
  return r.subject_id + "," + r.video_id + "," + std::string(to_string(r.dimension)) + "," +
         std::to_string(r.score) + "\n";
}

std::string ratings_to_csv(std::span<const RawRating> ratings) {
  std::string out = "subject_id,video_id,dimension,score\n";
  for (const auto& r : ratings) out += rating_to_csv_line(r);
  return out;
}

std::vector<MosRecord> mos_from_csv(std::string_view text) {
  static constexpr std::string_view kHeader[] = {"video_id", "dimension", "mos", "rater_count"};
  std::vector<MosRecord> out;
  for_each_csv_row(text, kHeader, 3, [&](std::size_t line_no, const auto& f) {
    MosRecord m;
    m.video_id = f[0];
    try {
      m.dimension = parse_dimension(f[1]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, at_line(line_no, e.what()));
    }
    m.mos = parse_real(f[2], line_no);
    m.rater_count = f.size() > 3 ? static_cast<int>(parse_int(f[3], line_no)) : 0;
    out.push_back(std::move(m));
  });
  return out;
}

std::string mos_to_csv(std::span<const MosRecord> records) {
  std::string out = "video_id,dimension,mos,rater_count\n";
  for (const auto& m : records) {
    check_csv_field(m.video_id);
    out += m.video_id + "," + std::string(to_string(m.dimension)) + "," + format_fixed(m.mos, 6) +
           "," + std::to_string(m.rater_count) + "\n";
  }
  return out;
}

std::map<Dimension, ScoreVector> score_vectors(std::span<const MosRecord> records) {
  std::map<Dimension, std::map<std::string, double>> by_dim;
  for (const auto& m : records) {
    if (!by_dim[m.dimension].emplace(m.video_id, m.mos).second) {
      throw Error(ErrorCode::kDuplicateRecord, "video " + m.video_id + " appears twice in " +
                                                   std::string(to_string(m.dimension)));
    }
  }
  std::map<Dimension, ScoreVector> out;
  for (const auto& [d, values] : by_dim) {
    auto& v = out[d];
    for (const auto& [id, value] : values) v.push_back({id, value});
  }
  return out;
}

std::vector<PromptRecord> prompts_from_jsonl(std::string_view text) {
  std::set<std::string> seen;
  return parse_jsonl<PromptRecord>(text, [&](const json& j) {
    PromptRecord p;
    p.prompt_id = j.at("prompt_id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    p.source = j.value("source", "");
    if (p.text.empty()) throw Error(ErrorCode::kParseError, "prompt " + p.prompt_id + " is empty");
    if (!seen.insert(p.prompt_id).second) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate prompt_id " + p.prompt_id);
    }
    return p;
  });
}

std::string prompts_to_jsonl(std::span<const PromptRecord> prompts) {
  std::vector<json> rows;
  for (const auto& p : prompts) {
    rows.push_back({{"prompt_id", p.prompt_id}, {"text", p.text}, {"source", p.source}});
  }
  return lines(rows);
}

std::string categories_to_jsonl(const std::map<std::string, PromptCategories>& categories) {
  std::vector<json> rows;
  for (const auto& [id, c] : categories) {
    json j;
    j["prompt_id"] = id;
    j["spatial"] = aspect_to_json(c.spatial);
    j["temporal"] = aspect_to_json(c.temporal);
    j["attribute"] = aspect_to_json(c.attribute);
    j["complexity"] = std::string(to_string(c.complexity));
    j["non_stop_count"] = c.non_stop_count;
    rows.push_back(std::move(j));
  }
  return lines(rows);
}

std::map<std::string, PromptCategories> categories_from_jsonl(std::string_view text) {
  std::map<std::string, PromptCategories> out;
  auto rows = parse_jsonl<std::pair<std::string, PromptCategories>>(text, [](const json& j) {
    PromptCategories c;
    c.spatial = aspect_from_json(j.at("spatial"));
    c.temporal = aspect_from_json(j.at("temporal"));
    c.attribute = aspect_from_json(j.at("attribute"));
    c.complexity = parse_complexity(j.at("complexity").get<std::string>());
    c.non_stop_count = j.value("non_stop_count", 0);
    return std::pair{j.at("prompt_id").get<std::string>(), c};
  });
  for (auto& [id, c] : rows) out[id] = std::move(c);
  return out;
}

std::vector<VideoMeta> meta_from_jsonl(std::string_view text) {
  return parse_jsonl<VideoMeta>(text, [](const json& j) {
    VideoMeta m;
    m.video_id = j.at("video_id").get<std::string>();
    m.model_id = j.at("model_id").get<std::string>();
    m.prompt_id = j.at("prompt_id").get<std::string>();
    m.variant = j.value("variant", 1);
    m.open_source = j.value("open_source", true);
    m.frames = j.value("frames", 1);
    m.fps = j.value("fps", 8.0);
    m.width = j.value("width", 0);
    m.height = j.value("height", 0);
    if (m.variant < 1 || m.frames < 1) {
      throw Error(ErrorCode::kParseError, "video " + m.video_id + " has invalid variant/frames");
    }
    return m;
  });
}

std::string meta_to_jsonl(std::span<const VideoMeta> meta) {
  std::vector<json> rows;
  for (const auto& m : meta) {
    rows.push_back({{"video_id", m.video_id},
                    {"model_id", m.model_id},
                    {"prompt_id", m.prompt_id},
                    {"variant", m.variant},
                    {"open_source", m.open_source},
                    {"frames", m.frames},
                    {"fps", m.fps},
                    {"width", m.width},
                    {"height", m.height}});
  }
  return lines(rows);
}

std::vector<PairSpec> pairs_from_jsonl(std::string_view text) {
  return parse_jsonl<PairSpec>(text, [](const json& j) {
    PairSpec p;
    p.pair_id = j.at("pair_id").get<std::string>();
    p.prompt_id = j.at("prompt_id").get<std::string>();
    p.video_a = j.at("video_a").get<std::string>();
    p.video_b = j.at("video_b").get<std::string>();
    if (!(p.video_a < p.video_b)) {
      throw Error(ErrorCode::kParseError, "pair " + p.pair_id + " is not in canonical order");
    }
    return p;
  });
}

std::string pairs_to_jsonl(std::span<const PairSpec> pairs) {
  std::vector<json> rows;
  for (const auto& p : pairs) {
    rows.push_back({{"pair_id", p.pair_id},
                    {"prompt_id", p.prompt_id},
                    {"video_a", p.video_a},
                    {"video_b", p.video_b}});
  }
  return lines(rows);
}

std::vector<PairJudgment> judgments_from_jsonl(std::string_view text) {
  return parse_jsonl<PairJudgment>(text, [](const json& j) {
    PairJudgment p;
    p.pair_id = j.at("pair_id").get<std::string>();
    p.annotator_id = j.at("annotator_id").get<std::string>();
    p.dimension = parse_dimension(j.at("dimension").get<std::string>());
    p.choice = parse_choice(j.at("choice").get<std::string>());
    p.displayed_swap = j.value("displayed_swap", false);
    p.timestamp = j.value("timestamp", "");
    return p;
  });
}

std::string judgment_to_json_line(const PairJudgment& p) {
  const json j = {{"pair_id", p.pair_id},
                  {"annotator_id", p.annotator_id},
                  {"dimension", std::string(to_string(p.dimension))},
                  {"choice", std::string(to_string(p.choice))},
                  {"displayed_swap", p.displayed_swap},
                  {"timestamp", p.timestamp}};
  return j.dump() + "\n";
}

std::string judgments_to_jsonl(std::span<const PairJudgment> judgments) {
  std::string out;
  for (const auto& p : judgments) out += judgment_to_json_line(p);
  return out;
}

std::vector<PairVerdict> verdicts_from_jsonl(std::string_view text) {
  return parse_jsonl<PairVerdict>(text, [](const json& j) {
    PairVerdict v;
    v.pair_id = j.at("pair_id").get<std::string>();
    v.dimension = parse_dimension(j.at("dimension").get<std::string>());
    v.winner = parse_winner(j.at("winner").get<std::string>());
    v.votes_a = j.at("votes_a").get<int>();
    v.votes_b = j.at("votes_b").get<int>();
    const Winner expected = v.votes_a > v.votes_b   ? Winner::kA
                            : v.votes_b > v.votes_a ? Winner::kB
                                                    : Winner::kTie;
    if (v.winner != expected) {
      throw Error(ErrorCode::kParseError, "verdict for " + v.pair_id + " disagrees with its votes");
    }
    return v;
  });
}

std::string verdicts_to_jsonl(std::span<const PairVerdict> verdicts) {
  std::vector<json> rows;
  for (const auto& v : verdicts) {
    rows.push_back({{"pair_id", v.pair_id},
                    {"dimension", std::string(to_string(v.dimension))},
                    {"winner", std::string(to_string(v.winner))},
                    {"votes_a", v.votes_a},
                    {"votes_b", v.votes_b}});
  }
  return lines(rows);
}

std::string win_rates_to_csv(const WinRateTable& table) {
  std::string out = "model_id,dimension,category,wins,losses,ties,win_rate\n";
  for (const auto& r : table) {
    check_csv_field(r.model_id);
    check_csv_field(r.category);
    out += r.model_id + "," + std::string(to_string(r.dimension)) + "," + r.category + "," +
           format_fixed(r.wins, 1) + "," + format_fixed(r.losses, 1) + "," +
           std::to_string(r.ties) + "," + format_fixed(r.win_rate, 6) + "\n";
  }
  return out;
}

std::string metric_report_to_json(const MetricReport& report) {
  std::string out = "{";
  bool first = true;
  for (const auto& [d, row] : report) {
    if (!first) out += ",";
    first = false;
    out += "\n  \"" + std::string(to_string(d)) + "\": {\"srcc\": " + format_fixed(row.srcc, 6) +
           ", \"plcc\": " + format_fixed(row.plcc, 6) + ", \"krcc\": " + format_fixed(row.krcc, 6);
    if (row.pair_acc) out += ", \"pair_acc\": " + format_fixed(*row.pair_acc, 6);
    out += "}";
  }
  out += report.empty() ? "}\n" : "\n}\n";
  return out;
}

}  // namespace aigv
