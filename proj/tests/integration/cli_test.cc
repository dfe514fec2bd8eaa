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


// Drives the `aigv` tool in-process through cli::run.

#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "../support/study_fixture.h"
#include "aigv/records_io.h"
#include "aigv/store.h"
#include "cli.h"

namespace aigv {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "aigv");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("aigv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string golden(const std::string& name) {
    return (fs::path(AIGV_TEST_DATA_DIR) / "golden" / name).string();
  }

  fs::path dir_;
};

TEST_F(CliTest, MosMatchesGoldenFile) {
  const auto r = run({"mos", "--ratings", golden("ratings.csv"), "--out", path("mos.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(read_file_text(path("mos.csv")), read_file_text(golden("mos.csv")));
  // The constant rater is reported.
  EXPECT_NE(r.err.find("s3"), std::string::npos);
}

TEST_F(CliTest, MosToStdoutWhenNoOut) {
  const auto r = run({"mos", "--ratings", golden("ratings.csv")});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, read_file_text(golden("mos.csv")));
}

TEST_F(CliTest, AggregateMatchesGoldenFile) {
  const auto r = run({"pairs", "aggregate", "--judgments", golden("judgments.jsonl"), "--out",
                      path("verdicts.jsonl")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(read_file_text(path("verdicts.jsonl")), read_file_text(golden("verdicts.jsonl")));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(run({"mos", "--ratings", golden("ratings.csv"), "--out", path("a.csv")}).code, 0);
  ASSERT_EQ(run({"mos", "--ratings", golden("ratings.csv"), "--out", path("b.csv")}).code, 0);
  EXPECT_EQ(read_file_bytes(path("a.csv")), read_file_bytes(path("b.csv")));
}

TEST_F(CliTest, EnumerateAndSamplePairs) {
  const auto meta = testing::synthetic_meta(2);
  write_file_atomic(path("videos.jsonl"), meta_to_jsonl(meta));
  auto r = run({"pairs", "enumerate", "--meta", path("videos.jsonl"), "--out", path("pairs.jsonl")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto pairs = pairs_from_jsonl(read_file_text(path("pairs.jsonl")));
  EXPECT_EQ(pairs.size(), 2u * 630);

  r = run({"pairs", "sample", "--pairs", path("pairs.jsonl"), "--n", "100", "--seed", "4", "--out",
           path("s1.jsonl")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  ASSERT_EQ(run({"pairs", "sample", "--pairs", path("pairs.jsonl"), "--n", "100", "--seed", "4", "--out",
                 path("s2.jsonl")})
                .code,
            0);
  EXPECT_EQ(pairs_from_jsonl(read_file_text(path("s1.jsonl"))).size(), 100u);
  EXPECT_EQ(read_file_text(path("s1.jsonl")), read_file_text(path("s2.jsonl")));

  // More than the pool is a data error.
  r = run({"pairs", "sample", "--pairs", path("pairs.jsonl"), "--n", "5000", "--seed", "4"});
  EXPECT_EQ(r.code, cli::kExitData);
}

TEST_F(CliTest, CategorizeEmitsOneLinePerPrompt) {
  write_file_atomic(path("prompts.jsonl"),
                    prompts_to_jsonl(std::vector<PromptRecord>{
                        {"q1", "A plane is flying backwards.", "test"},
                        {"q2", "A red apple on a table.", "test"}}));
  const auto r = run({"categorize", "--prompts", path("prompts.jsonl")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto cats = categories_from_jsonl(r.out);
  ASSERT_EQ(cats.size(), 2u);
  EXPECT_TRUE(cats.contains("q1"));
}

TEST_F(CliTest, MetricsJsonReport) {
  write_file_atomic(path("gt.csv"),
                    std::string("video_id,dimension,mos\n") + "v1,static,10\nv2,static,20\nv3,static,30\n" +
                        "v1,temporal,10\nv2,temporal,20\nv3,temporal,30\n" +
                        "v1,dynamic,10\nv2,dynamic,20\nv3,dynamic,30\n" +
                        "v1,tv,10\nv2,tv,20\nv3,tv,30\n");
  write_file_atomic(path("pred.csv"),
                    std::string("video_id,dimension,mos\n") + "v3,static,3\nv2,static,2\nv1,static,1\n" +
                        "v1,temporal,3\nv2,temporal,2\nv3,temporal,1\n" +
                        "v1,dynamic,1\nv2,dynamic,2\nv3,dynamic,3\n" + "v1,tv,1\nv2,tv,2\nv3,tv,3\n");
  const auto r = run({"--json", "metrics", "--gt", path("gt.csv"), "--pred", path("pred.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["static"]["srcc"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["temporal"]["srcc"].get<double>(), -1.0);
}

TEST_F(CliTest, MissingRequiredFlagIsUsageError) {
  const auto r = run({"mos"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--ratings"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) { EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage); }

TEST_F(CliTest, StochasticCommandsRequireSeed) {
  EXPECT_EQ(run({"synth", "--n", "3", "--out", path("d")}).code, cli::kExitUsage);
}

TEST_F(CliTest, InvalidDataIsExitTwo) {
  write_file_atomic(path("bad.csv"), std::string("subject_id,video_id,dimension,score\ns1,v1,static,9\n"));
  const auto r = run({"mos", "--ratings", path("bad.csv")});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MissingFileIsExitThree) {
  EXPECT_EQ(run({"mos", "--ratings", path("nope.csv")}).code, cli::kExitIo);
}

TEST_F(CliTest, SynthTrainEvalSmoke) {
  auto r = run({"synth", "--n", "12", "--seed", "2", "--out", path("data")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(path("data/manifest.jsonl")));

  r = run({"train", "--data", path("data"), "--out", path("model.json"), "--seed", "2", "--epochs",
           "2,2,2", "--log", path("log.jsonl")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(path("model.json")));
  std::istringstream log(read_file_text(path("log.jsonl")));
  int lines = 0;
  for (std::string line; std::getline(log, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("stage") && j.contains("epoch") && j.contains("loss"));
  }
  EXPECT_EQ(lines, 6);

  r = run({"--json", "eval", "--data", path("data"), "--checkpoint", path("model.json"), "--seed", "2"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("tv"));
}

}  // namespace
}  // namespace aigv
