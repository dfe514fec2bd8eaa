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


#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "../support/study_dir.h"
#include "aigv/annotate.h"
#include "aigv/error.h"
#include "aigv/text.h"

namespace aigv {
namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoFailure;
}

constexpr std::array<int, kNumDimensions> kScores = {5, 4, 3, 2};

TEST(StudyStore, EmptyProgress) {
  const auto dir = testing::make_study_dir("empty", 3);
  StudyStore store(dir, {});
  const auto p = store.progress();
  EXPECT_EQ(p.ratings, 0u);
  EXPECT_EQ(p.judgments, 0u);
  EXPECT_EQ(p.rating_tasks, 3u);
  EXPECT_EQ(p.pair_tasks, 3u);
  EXPECT_TRUE(p.annotators.empty());
}

TEST(StudyStore, RatingFlow) {
  const auto dir = testing::make_study_dir("rating", 3);
  StudyStore store(dir, {});
  const Task t = store.next_task("alice", TaskMode::kRating);
  EXPECT_EQ(t.assigned_to, "alice");
  EXPECT_EQ(t.task_id, "rating:" + t.video_id);
  EXPECT_EQ(t.prompt_text, "A red ball rolls to the left.");
  // Asking again returns the same open lease.
  EXPECT_EQ(store.next_task("alice", TaskMode::kRating).task_id, t.task_id);
  EXPECT_EQ(code_of([&] { store.submit_rating("alice", t.video_id, {5, 4, 6, 2}); }),
            ErrorCode::kInvalidScore);
  EXPECT_EQ(code_of([&] { store.submit_rating("bob", t.video_id, kScores); }),
            ErrorCode::kTaskNotAssigned);
  store.submit_rating("alice", t.video_id, kScores);
  EXPECT_EQ(store.progress().ratings, 4u);
  EXPECT_EQ(store.progress().annotators.at("alice").ratings, 4u);
  EXPECT_EQ(code_of([&] { store.submit_rating("alice", t.video_id, kScores); }),
            ErrorCode::kTaskNotAssigned);
  EXPECT_NE(store.next_task("alice", TaskMode::kRating).video_id, t.video_id);

  // The log is a valid ratings CSV.
  const auto logged = ratings_from_csv(read_file_text(dir / "ratings.csv"));
  ASSERT_EQ(logged.size(), 4u);
  for (std::size_t d = 0; d < kNumDimensions; ++d) EXPECT_EQ(logged[d].score, kScores[d]);
}

TEST(StudyStore, RatingsRunOut) {
  const auto dir = testing::make_study_dir("runout", 2, false);
  StudyStore store(dir, {});
  for (int i = 0; i < 2; ++i) {
    const Task t = store.next_task("a", TaskMode::kRating);
    store.submit_rating("a", t.video_id, kScores);
  }
  EXPECT_EQ(code_of([&] { store.next_task("a", TaskMode::kRating); }), ErrorCode::kNoTasksRemaining);
  EXPECT_EQ(code_of([&] { store.next_task("a", TaskMode::kPair); }), ErrorCode::kNoTasksRemaining);
  EXPECT_EQ(code_of([&] { store.next_task("", TaskMode::kRating); }), ErrorCode::kParseError);
}

TEST(StudyStore, PairSwapIsUndone) {
  const auto dir = testing::make_study_dir("swap", 6);
  StudyStore store(dir, {.seed = 3});
  int swapped = 0, straight = 0;
  for (int i = 0; i < 15; ++i) {
    const std::string who = "ann" + std::to_string(i);
    const Task t = store.next_task(who, TaskMode::kPair);
    const std::array<Choice, kNumDimensions> shown = {Choice::kA, Choice::kB, Choice::kA, Choice::kA};
    store.submit_pair(who, t.pair_id, shown);
    const auto js = store.judgments();
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      const auto& j = js[js.size() - kNumDimensions + d];
      EXPECT_EQ(j.pair_id, t.pair_id);
      EXPECT_EQ(j.displayed_swap, t.displayed_swap);
      EXPECT_EQ(j.choice, t.displayed_swap ? flipped(shown[d]) : shown[d]);
      // Re-applying the swap reproduces what was clicked.
      EXPECT_EQ(j.displayed_swap ? flipped(j.choice) : j.choice, shown[d]);
    }
    (t.displayed_swap ? swapped : straight)++;
  }
  EXPECT_GT(swapped, 0);
  EXPECT_GT(straight, 0);
}

TEST(StudyStore, PairsCappedAtThreeAnnotators) {
  const auto dir = testing::make_study_dir("cap", 2);  // exactly one pair
  StudyStore store(dir, {});
  const std::array<std::array<Choice, kNumDimensions>, 3> picks = {
      std::array{Choice::kA, Choice::kA, Choice::kA, Choice::kA},
      std::array{Choice::kA, Choice::kB, Choice::kA, Choice::kB},
      std::array{Choice::kB, Choice::kB, Choice::kA, Choice::kB}};
  std::string pair_id;
  for (int i = 0; i < 3; ++i) {
    const std::string who = "a" + std::to_string(i);
    const Task t = store.next_task(who, TaskMode::kPair);
    pair_id = t.pair_id;
    // Submit canonical choices by pre-flipping what is "shown".
    std::array<Choice, kNumDimensions> shown = picks[i];
    if (t.displayed_swap)
      for (auto& c : shown) c = flipped(c);
    store.submit_pair(who, t.pair_id, shown);
  }
  EXPECT_EQ(code_of([&] { store.next_task("a3", TaskMode::kPair); }), ErrorCode::kNoTasksRemaining);
  EXPECT_EQ(store.progress().judgments, 12u);
  const auto verdicts = aggregate_verdicts(store.judgments());
  ASSERT_EQ(verdicts.size(), 4u);
  EXPECT_EQ(verdicts[0].winner, Winner::kA);  // A A B
  EXPECT_EQ(verdicts[1].winner, Winner::kB);  // A B B
  EXPECT_EQ(verdicts[2].winner, Winner::kA);  // A A A
  EXPECT_EQ(verdicts[3].winner, Winner::kB);  // A B B
  // The on-disk log is a valid judgments file with the same content.
  EXPECT_EQ(aggregate_verdicts(judgments_from_jsonl(read_file_text(dir / "judgments.jsonl"))), verdicts);
}

TEST(StudyStore, ToyStudyCounts) {
  const auto dir = testing::make_study_dir("toy", 5, false);
  // Five pairs from a 5-video group: keep the first five.
  std::vector<VideoMeta> meta = meta_from_jsonl(read_file_text(dir / "videos.jsonl"));
  VideoGroup g{"q1", meta};
  auto pairs = enumerate_pairs(g);
  pairs.resize(5);
  write_file_atomic(dir / "pairs.jsonl", pairs_to_jsonl(pairs));
  StudyStore store(dir, {});
  for (const char* who : {"x", "y", "z"}) {
    for (int i = 0; i < 5; ++i) {
      const Task t = store.next_task(who, TaskMode::kPair);
      store.submit_pair(who, t.pair_id, {Choice::kA, Choice::kA, Choice::kB, Choice::kB});
    }
  }
  EXPECT_EQ(store.progress().judgments, 60u);
}

TEST(StudyStore, LogsReplayOnRestart) {
  const auto dir = testing::make_study_dir("replay", 3);
  std::string video, pair;
  {
    StudyStore store(dir, {});
    const Task r = store.next_task("a", TaskMode::kRating);
    store.submit_rating("a", r.video_id, kScores);
    video = r.video_id;
    const Task p = store.next_task("a", TaskMode::kPair);
    store.submit_pair("a", p.pair_id, {Choice::kA, Choice::kA, Choice::kA, Choice::kA});
    pair = p.pair_id;
  }
  const std::string before = read_file_text(dir / "ratings.csv");
  StudyStore again(dir, {});
  EXPECT_EQ(again.progress().ratings, 4u);
  EXPECT_EQ(again.progress().judgments, 4u);
  for (int i = 0; i < 2; ++i) {
    const Task t = again.next_task("a", TaskMode::kRating);
    EXPECT_NE(t.video_id, video);
    again.submit_rating("a", t.video_id, kScores);
  }
  EXPECT_EQ(code_of([&] { again.next_task("a", TaskMode::kRating); }), ErrorCode::kNoTasksRemaining);
  // Append-only: the earlier log is a prefix of the current one.
  const std::string after = read_file_text(dir / "ratings.csv");
  EXPECT_TRUE(after.starts_with(before));
  EXPECT_EQ(std::count(after.begin(), after.end(), '\n'), 1 + 12);
  // Reads do not touch the logs.
  const std::string snapshot = read_file_text(dir / "ratings.csv") + read_file_text(dir / "judgments.jsonl");
  again.progress();
  again.ratings();
  again.judgments();
  again.video(video);
  EXPECT_EQ(read_file_text(dir / "ratings.csv") + read_file_text(dir / "judgments.jsonl"), snapshot);
}

TEST(StudyStore, LeaseExpiry) {
  const auto dir = testing::make_study_dir("lease", 1, false);
  auto now = std::chrono::steady_clock::time_point{};
  StudyOptions opts;
  opts.lease = std::chrono::seconds(60);
  opts.clock = [&] { return now; };
  StudyStore store(dir, opts);
  const Task t = store.next_task("slow", TaskMode::kRating);
  EXPECT_EQ(code_of([&] { store.next_task("other", TaskMode::kRating); }), ErrorCode::kNoTasksRemaining);
  now += std::chrono::seconds(61);
  const Task stolen = store.next_task("other", TaskMode::kRating);
  EXPECT_EQ(stolen.video_id, t.video_id);
  EXPECT_EQ(code_of([&] { store.submit_rating("slow", t.video_id, kScores); }), ErrorCode::kTaskNotAssigned);
  store.submit_rating("other", t.video_id, kScores);
}

TEST(StudyStore, ConcurrentAssignmentsAreExclusive) {
  const auto dir = testing::make_study_dir("concurrent", 12, false);
  StudyStore store(dir, {.seed = 5});
  constexpr int kThreads = 8;
  std::vector<std::vector<std::string>> seen(kThreads);
  std::vector<std::thread> workers;
  std::atomic<int> failures = 0;
  for (int w = 0; w < kThreads; ++w) {
    workers.emplace_back([&, w] {
      const std::string who = "worker" + std::to_string(w);
      try {
        const Task t = store.next_task(who, TaskMode::kRating);
        seen[w].push_back(t.task_id);
      } catch (const Error&) {
        ++failures;
      }
    });
  }
  for (auto& t : workers) t.join();
  std::set<std::string> distinct;
  for (const auto& s : seen) distinct.insert(s.begin(), s.end());
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(distinct.size(), static_cast<std::size_t>(kThreads));

  // Full drain: every annotator rates everything, records never interleave.
  workers.clear();
  for (int w = 0; w < kThreads; ++w) {
    workers.emplace_back([&, w] {
      const std::string who = "worker" + std::to_string(w);
      // A video leased to someone else is unavailable until submitted, so
      // "none left" can be temporary while others still hold leases.
      int done = 0;
      while (done < 12) {
        try {
          const Task t = store.next_task(who, TaskMode::kRating);
          store.submit_rating(who, t.video_id, kScores);
          ++done;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoTasksRemaining) {
            ++failures;
            return;
          }
          std::this_thread::yield();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(failures.load(), 0);
  const auto logged = ratings_from_csv(read_file_text(dir / "ratings.csv"));
  EXPECT_EQ(logged.size(), static_cast<std::size_t>(kThreads * 12 * 4));
  for (std::size_t i = 0; i < logged.size(); i += 4) {
    for (std::size_t d = 1; d < 4; ++d) {
      EXPECT_EQ(logged[i + d].subject_id, logged[i].subject_id);
      EXPECT_EQ(logged[i + d].video_id, logged[i].video_id);
    }
  }
  EXPECT_EQ(compute_mos(logged, ConstantRaterPolicy::kMapToFifty).size(), 12u * 4);
}

TEST(StudyStore, VideoPayload) {
  const auto dir = testing::make_study_dir("video", 2, false);
  StudyStore store(dir, {});
  const ClipFrames clip = store.video("vid0");
  EXPECT_EQ(clip.frames, 8);
  ASSERT_EQ(clip.frames_base64.size(), 8u);
  for (const auto& f : clip.frames_base64) EXPECT_EQ(base64_decode(f).size(), 12288u);
  EXPECT_EQ(code_of([&] { store.video("nope"); }), ErrorCode::kNotFound);
  fs::remove(dir / "clips" / "vid1.avf");
  EXPECT_EQ(code_of([&] { store.video("vid1"); }), ErrorCode::kNotFound);
}

TEST(StudyStore, BadStudyDirectories) {
  const auto missing = fs::temp_directory_path() / "aigv_study_missing";
  fs::remove_all(missing);
  EXPECT_EQ(code_of([&] { StudyStore s(missing, {}); }), ErrorCode::kIoFailure);
  const auto dir = testing::make_study_dir("badpair", 2, false);
  write_file_atomic(dir / "pairs.jsonl", pairs_to_jsonl(std::vector<PairSpec>{{"p", "q1", "vid0", "zzz"}}));
  EXPECT_EQ(code_of([&] { StudyStore s(dir, {}); }), ErrorCode::kNotFound);
}

}  // namespace
}  // namespace aigv
