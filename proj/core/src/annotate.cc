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

#include "aigv/annotate.h"

#include <ctime>

#include "aigv/error.h"
#include "aigv/records_io.h"
#include "aigv/store.h"
#include "aigv/text.h"

namespace aigv {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string optional_text(const fs::path& path) {
  return fs::exists(path) ? read_file_text(path) : std::string();
}

std::ofstream open_append(const fs::path& path, std::string_view header) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for append");
  if (fresh && !header.empty()) {
    out << header;
    out.flush();
  }
  return out;
}

std::string task_id_for(TaskMode mode, const std::string& key) {
  return std::string(to_string(mode)) + ":" + key;
}

}  // namespace

std::string_view to_string(TaskMode mode) { return mode == TaskMode::kRating ? "rating" : "pair"; }

TaskMode parse_task_mode(std::string_view token) {
  if (token == "rating") return TaskMode::kRating;
  if (token == "pair") return TaskMode::kPair;
  throw Error(ErrorCode::kParseError, "mode must be rating or pair, got '" + std::string(token) + "'");
}

StudyStore::StudyStore(fs::path dir, StudyOptions options)
    : dir_(std::move(dir)), options_(std::move(options)), rng_(options_.seed) {
  for (auto& m : meta_from_jsonl(read_file_text(dir_ / "videos.jsonl"))) {
    const std::string id = m.video_id;
    if (!videos_.emplace(id, std::move(m)).second) {
      throw Error(ErrorCode::kDuplicateRecord, "video " + id + " listed twice");
    }
  }
  for (auto& p : prompts_from_jsonl(optional_text(dir_ / "prompts.jsonl"))) {
    prompt_text_[p.prompt_id] = std::move(p.text);
  }
  for (auto& p : pairs_from_jsonl(optional_text(dir_ / "pairs.jsonl"))) {
    if (!videos_.contains(p.video_a) || !videos_.contains(p.video_b)) {
      throw Error(ErrorCode::kNotFound, "pair " + p.pair_id + " refers to an unknown video");
    }
    const std::string id = p.pair_id;
    pairs_.emplace(id, std::move(p));
  }

  for (const auto& [id, _] : videos_) tasks_.push_back({TaskMode::kRating, id, {}, std::nullopt});
  for (const auto& [id, _] : pairs_) tasks_.push_back({TaskMode::kPair, id, {}, std::nullopt});
  // Seeded shuffle so consecutive tasks come from different models/prompts.
  shuffle(std::span<TaskState>(tasks_), rng_);
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    task_index_[task_id_for(tasks_[i].mode, tasks_[i].key)] = i;
  }

  replay_logs();
  ratings_log_ = open_append(dir_ / "ratings.csv", "subject_id,video_id,dimension,score\n");
  judgments_log_ = open_append(dir_ / "judgments.jsonl", "");
}

StudyStore::~StudyStore() = default;

void StudyStore::replay_logs() {
  if (const auto text = optional_text(dir_ / "ratings.csv"); !text.empty()) {
    ratings_ = ratings_from_csv(text);
  }
  for (const auto& r : ratings_) {
    auto it = task_index_.find(task_id_for(TaskMode::kRating, r.video_id));
    if (it == task_index_.end()) {
      throw Error(ErrorCode::kNotFound, "ratings log refers to unknown video " + r.video_id);
    }
    tasks_[it->second].done_by.insert(r.subject_id);
  }
  judgments_ = judgments_from_jsonl(optional_text(dir_ / "judgments.jsonl"));
  for (const auto& j : judgments_) {
    auto it = task_index_.find(task_id_for(TaskMode::kPair, j.pair_id));
    if (it == task_index_.end()) {
      throw Error(ErrorCode::kNotFound, "judgments log refers to unknown pair " + j.pair_id);
    }
    tasks_[it->second].done_by.insert(j.annotator_id);
  }
}

std::chrono::steady_clock::time_point StudyStore::now() const {
  return options_.clock ? options_.clock() : std::chrono::steady_clock::now();
}

bool StudyStore::lease_live(const TaskState& state) const {
  return state.lease && now() - state.lease->since < options_.lease;
}

Task StudyStore::describe(const TaskState& state) const {
  Task t;
  t.task_id = task_id_for(state.mode, state.key);
  t.mode = state.mode;
  if (state.lease) {
    t.assigned_to = state.lease->annotator;
    t.displayed_swap = state.lease->displayed_swap;
  }
  std::string prompt_id;
  if (state.mode == TaskMode::kRating) {
    t.video_id = state.key;
    prompt_id = videos_.at(state.key).prompt_id;
  } else {
    const auto& p = pairs_.at(state.key);
    t.pair_id = p.pair_id;
    t.video_a = p.video_a;
    t.video_b = p.video_b;
    prompt_id = p.prompt_id;
  }
  if (auto it = prompt_text_.find(prompt_id); it != prompt_text_.end()) t.prompt_text = it->second;
  return t;
}

Task StudyStore::next_task(const std::string& annotator, TaskMode mode) {
  if (annotator.empty()) throw Error(ErrorCode::kParseError, "annotator id is empty");
  std::lock_guard lock(mu_);
  for (auto& s : tasks_) {
    if (s.mode == mode && s.lease && s.lease->annotator == annotator && lease_live(s)) {
      return describe(s);
    }
  }
  for (auto& s : tasks_) {
    if (s.mode != mode || s.done_by.contains(annotator) || lease_live(s)) continue;
    if (mode == TaskMode::kPair &&
        static_cast<int>(s.done_by.size()) >= options_.annotators_per_pair) {
      continue;
    }
    s.lease = Lease{annotator, now(), mode == TaskMode::kPair && rng_.bernoulli(0.5)};
    return describe(s);
  }
  throw Error(ErrorCode::kNoTasksRemaining,
              "no " + std::string(to_string(mode)) + " tasks left for " + annotator);
}

void StudyStore::submit_rating(const std::string& annotator, const std::string& video_id,
                               const std::array<int, kNumDimensions>& scores) {
  for (const int s : scores) {
    if (s < 1 || s > 5) {
      throw Error(ErrorCode::kInvalidScore, "score " + std::to_string(s) + " is outside 1..5");
    }
  }
  std::lock_guard lock(mu_);
  auto it = task_index_.find(task_id_for(TaskMode::kRating, video_id));
  if (it == task_index_.end() || !tasks_[it->second].lease ||
      tasks_[it->second].lease->annotator != annotator) {
    throw Error(ErrorCode::kTaskNotAssigned,
                "no open rating task for " + video_id + " assigned to " + annotator);
  }
  auto& state = tasks_[it->second];
  std::string block;
  std::vector<RawRating> records;
  for (const Dimension d : kAllDimensions) {
    records.push_back({annotator, video_id, d, scores[index_of(d)]});
    block += rating_to_csv_line(records.back());
  }
  ratings_log_ << block;
  ratings_log_.flush();
  if (!ratings_log_) throw Error(ErrorCode::kIoFailure, "cannot append to ratings log");
  ratings_.insert(ratings_.end(), records.begin(), records.end());
  state.done_by.insert(annotator);
  state.lease.reset();
}

void StudyStore::submit_pair(const std::string& annotator, const std::string& pair_id,
                             const std::array<Choice, kNumDimensions>& displayed) {
  std::lock_guard lock(mu_);
  auto it = task_index_.find(task_id_for(TaskMode::kPair, pair_id));
  if (it == task_index_.end() || !tasks_[it->second].lease ||
      tasks_[it->second].lease->annotator != annotator) {
    throw Error(ErrorCode::kTaskNotAssigned,
                "no open pair task for " + pair_id + " assigned to " + annotator);
  }
  auto& state = tasks_[it->second];
  const bool swap = state.lease->displayed_swap;
  const std::string stamp = utc_timestamp();
  std::string block;
  std::vector<PairJudgment> records;
  for (const Dimension d : kAllDimensions) {
    const Choice shown = displayed[index_of(d)];
    records.push_back({pair_id, annotator, d, swap ? flipped(shown) : shown, swap, stamp});
    block += judgment_to_json_line(records.back());
  }
  judgments_log_ << block;
  judgments_log_.flush();
  if (!judgments_log_) throw Error(ErrorCode::kIoFailure, "cannot append to judgments log");
  judgments_.insert(judgments_.end(), records.begin(), records.end());
  state.done_by.insert(annotator);
  state.lease.reset();
}

ClipFrames StudyStore::video(const std::string& video_id) const {
  if (!videos_.contains(video_id)) throw Error(ErrorCode::kNotFound, "unknown video " + video_id);
  const fs::path path = dir_ / "clips" / (video_id + ".avf");
  if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, "no clip file for " + video_id);
  const auto bytes = read_file_bytes(path);
  const VideoTensor v = decode_avf(bytes);
  ClipFrames out;
  out.frames = v.frames;
  out.height = v.height;
  out.width = v.width;
  out.fps = v.fps;
  const std::size_t frame_bytes = v.frame_size();
  for (int t = 0; t < v.frames; ++t) {
    out.frames_base64.push_back(base64_encode(
        std::span(bytes).subspan(kAvfHeaderBytes + static_cast<std::size_t>(t) * frame_bytes,
                                 frame_bytes)));
  }
  return out;
}

StudyProgress StudyStore::progress() const {
  std::lock_guard lock(mu_);
  StudyProgress p;
  p.ratings = ratings_.size();
  p.judgments = judgments_.size();
  p.rating_tasks = videos_.size();
  p.pair_tasks = pairs_.size();
  for (const auto& r : ratings_) ++p.annotators[r.subject_id].ratings;
  for (const auto& j : judgments_) ++p.annotators[j.annotator_id].judgments;
  return p;
}

std::vector<RawRating> StudyStore::ratings() const {
  std::lock_guard lock(mu_);
  return ratings_;
}

std::vector<PairJudgment> StudyStore::judgments() const {
  std::lock_guard lock(mu_);
  return judgments_;
}

}  // namespace aigv
