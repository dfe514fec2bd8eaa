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

// Annotation study backend: hands out rating and pair tasks, records the
// answers, and keeps them in the same files the subjective and pairstudy
// tools read.
//
// A study directory contains
//   videos.jsonl     VideoMeta records (required)
//   prompts.jsonl    PromptRecord records (optional; supplies prompt text)
//   pairs.jsonl      PairSpec records (optional; enables pair tasks)
//   clips/ID.avf     one clip per video
// and the store appends to
//   ratings.csv      subject_id,video_id,dimension,score
//   judgments.jsonl  PairJudgment records, canonical orientation
// Both logs are append-only and are replayed on startup.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aigv/dimension.h"
#include "aigv/pairstudy.h"
#include "aigv/random.h"
#include "aigv/subjective.h"
#include "aigv/taxonomy.h"

namespace aigv {

enum class TaskMode { kRating, kPair };
std::string_view to_string(TaskMode mode);
// Errors: kParseError.
TaskMode parse_task_mode(std::string_view token);

struct Task {
  std::string task_id;  // "rating:<video_id>" or "pair:<pair_id>"
  TaskMode mode = TaskMode::kRating;
  std::string prompt_text;
  // Rating tasks.
  std::string video_id;
  // Pair tasks. video_a/video_b are canonical; the interface shows
  // video_b on the left when displayed_swap is set.
  std::string pair_id;
  std::string video_a;
  std::string video_b;
  bool displayed_swap = false;
  std::string assigned_to;
  bool done = false;
};

struct StudyOptions {
  std::uint64_t seed = 0;
  // Distinct annotators after which a pair is no longer offered.
  int annotators_per_pair = 3;
  // An assignment not answered within this time may go to someone else.
  std::chrono::seconds lease{600};
  // Injected for tests; defaults to steady_clock.
  std::function<std::chrono::steady_clock::time_point()> clock;
};

struct AnnotatorProgress {
  std::size_t ratings = 0;    // rating records, four per submitted task
  std::size_t judgments = 0;  // judgment records, four per submitted task
};

struct StudyProgress {
  std::size_t ratings = 0;
  std::size_t judgments = 0;
  std::size_t rating_tasks = 0;
  std::size_t pair_tasks = 0;
  std::map<std::string, AnnotatorProgress> annotators;
};

struct ClipFrames {
  int frames = 0;
  int height = 0;
  int width = 0;
  double fps = 0.0;
  std::vector<std::string> frames_base64;  // raw interleaved RGB, one per frame
};

// Thread-safe. Every mutation, including the log append, happens under one
// mutex, so assignment and storage are serialized.
class StudyStore {
 public:
  // Loads the study and replays existing logs. Errors: kIoFailure,
  // kParseError, kNotFound (pair referring to an unknown video).
  StudyStore(std::filesystem::path dir, StudyOptions options);
  ~StudyStore();
  StudyStore(const StudyStore&) = delete;
  StudyStore& operator=(const StudyStore&) = delete;

  // Returns the task already leased to this annotator in this mode if any,
  // else leases a new one. Errors: kNoTasksRemaining, kParseError (empty id).
  Task next_task(const std::string& annotator, TaskMode mode);

  // Errors: kInvalidScore, kTaskNotAssigned.
  void submit_rating(const std::string& annotator, const std::string& video_id,
                     const std::array<int, kNumDimensions>& scores);

  // `displayed` is what the annotator picked on screen, before un-swapping.
  // Errors: kTaskNotAssigned.
  void submit_pair(const std::string& annotator, const std::string& pair_id,
                   const std::array<Choice, kNumDimensions>& displayed);

  // Errors: kNotFound, kIoFailure.
  ClipFrames video(const std::string& video_id) const;

  StudyProgress progress() const;

  // Snapshots of the logs in their interchange formats.
  std::vector<RawRating> ratings() const;
  std::vector<PairJudgment> judgments() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Lease {
    std::string annotator;
    std::chrono::steady_clock::time_point since;
    bool displayed_swap = false;
  };
  struct TaskState {
    TaskMode mode;
    std::string key;  // video_id or pair_id
    std::set<std::string> done_by;
    std::optional<Lease> lease;
  };

  Task describe(const TaskState& state) const;
  bool lease_live(const TaskState& state) const;
  void replay_logs();
  std::chrono::steady_clock::time_point now() const;

  std::filesystem::path dir_;
  StudyOptions options_;
  mutable std::mutex mu_;
  Rng rng_;
  std::map<std::string, VideoMeta> videos_;
  std::map<std::string, std::string> prompt_text_;
  std::map<std::string, PairSpec> pairs_;
  // Tasks in shuffled offer order, and an index by task id.
  std::vector<TaskState> tasks_;
  std::map<std::string, std::size_t> task_index_;
  std::vector<RawRating> ratings_;
  std::vector<PairJudgment> judgments_;
  std::ofstream ratings_log_;
  std::ofstream judgments_log_;
};

}  // namespace aigv
