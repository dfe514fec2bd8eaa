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

// HTTP front end for a StudyStore.
//
//   GET  /api/next-task?annotator=ID&mode=rating|pair
//   GET  /api/video/{id}
//   POST /api/rating   {"annotator", "video_id", "scores": {dim: 1..5}}
//   POST /api/pair     {"annotator", "pair_id", "choices": {dim: "A"|"B"}}
//   GET  /api/progress
//   GET  /...          static files from the UI directory, if configured
//
// Errors are returned as {"error": <code name>, "message": <text>} with
// 400 (bad input), 404 (unknown id, no tasks left), 409 (task not assigned)
// or 500.

#include <filesystem>
#include <memory>
#include <string>

#include "aigv/annotate.h"

namespace aigv {

class AnnotateServer {
 public:
  // `static_dir` may be empty. The store must outlive the server.
  AnnotateServer(StudyStore& store, std::filesystem::path static_dir);
  ~AnnotateServer();
  AnnotateServer(const AnnotateServer&) = delete;
  AnnotateServer& operator=(const AnnotateServer&) = delete;

  // Binds to `port` (0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop() is called. Blocks.
  bool serve();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aigv
