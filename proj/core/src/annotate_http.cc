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

#include "aigv/annotate_http.h"

#include <httplib.h>

#include <json.hpp>

#include "aigv/error.h"

namespace aigv {

using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kNoTasksRemaining: return 404;
    case ErrorCode::kTaskNotAssigned: return 409;
    case ErrorCode::kIoFailure: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code),
            {{"error", std::string(error_code_name(code))}, {"message", message}});
}

// Runs a handler, turning library and JSON errors into error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e.code(), e.what());
  } catch (const json::exception& e) {
    send_error(res, ErrorCode::kParseError, e.what());
  } catch (const std::exception& e) {
    send_error(res, ErrorCode::kIoFailure, e.what());
  }
}

json task_json(const Task& t) {
  json j = {{"task_id", t.task_id},
            {"mode", std::string(to_string(t.mode))},
            {"prompt", t.prompt_text},
            {"assigned_to", t.assigned_to},
            {"state", t.done ? "done" : "open"}};
  if (t.mode == TaskMode::kRating) {
    j["video_id"] = t.video_id;
  } else {
    // Presentation order: the left video is "A" on screen.
    j["pair_id"] = t.pair_id;
    j["video_a"] = t.displayed_swap ? t.video_b : t.video_a;
    j["video_b"] = t.displayed_swap ? t.video_a : t.video_b;
    j["displayed_swap"] = t.displayed_swap;
  }
  return j;
}

std::string required_string(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string() || body[key].get<std::string>().empty()) {
    throw Error(ErrorCode::kParseError, std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

const json& required_object(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_object()) {
    throw Error(ErrorCode::kParseError, std::string("missing object field '") + key + "'");
  }
  const json& obj = body[key];
  for (const auto& [name, _] : obj.items()) parse_dimension(name);
  for (const Dimension d : kAllDimensions) {
    if (!obj.contains(std::string(to_string(d)))) {
      throw Error(ErrorCode::kParseError,
                  std::string("'") + key + "' lacks dimension " + std::string(to_string(d)));
    }
  }
  return obj;
}

}  // namespace

struct AnnotateServer::Impl {
  explicit Impl(StudyStore& s) : store(s) {}
  StudyStore& store;
  httplib::Server server;
};

AnnotateServer::AnnotateServer(StudyStore& store, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(store)) {
  auto& svr = impl_->server;
  StudyStore* st = &store;

  svr.Get("/api/next-task", [st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string annotator = req.get_param_value("annotator");
      const TaskMode mode = parse_task_mode(req.get_param_value("mode"));
      send_json(res, 200, task_json(st->next_task(annotator, mode)));
    });
  });

  svr.Get(R"(/api/video/([^/]+))", [st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const ClipFrames clip = st->video(req.matches[1].str());
      send_json(res, 200,
                {{"t", clip.frames},
                 {"h", clip.height},
                 {"w", clip.width},
                 {"fps", clip.fps},
                 {"frames", clip.frames_base64}});
    });
  });

  svr.Post("/api/rating", [st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = json::parse(req.body);
      const std::string annotator = required_string(body, "annotator");
      const std::string video_id = required_string(body, "video_id");
      const json& scores = required_object(body, "scores");
      std::array<int, kNumDimensions> values{};
      for (const Dimension d : kAllDimensions) {
        const json& v = scores.at(std::string(to_string(d)));
        if (!v.is_number_integer()) {
          throw Error(ErrorCode::kInvalidScore, "scores must be integers in 1..5");
        }
        values[index_of(d)] = v.get<int>();
      }
      st->submit_rating(annotator, video_id, values);
      send_json(res, 200, {{"ok", true}, {"records", kNumDimensions}});
    });
  });

  svr.Post("/api/pair", [st](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = json::parse(req.body);
      const std::string annotator = required_string(body, "annotator");
      const std::string pair_id = required_string(body, "pair_id");
      const json& choices = required_object(body, "choices");
      std::array<Choice, kNumDimensions> values{};
      for (const Dimension d : kAllDimensions) {
        const json& v = choices.at(std::string(to_string(d)));
        if (!v.is_string()) throw Error(ErrorCode::kInvalidChoice, "choices must be \"A\" or \"B\"");
        values[index_of(d)] = parse_choice(v.get<std::string>());
      }
      st->submit_pair(annotator, pair_id, values);
      send_json(res, 200, {{"ok", true}, {"records", kNumDimensions}});
    });
  });

  svr.Get("/api/progress", [st](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const StudyProgress p = st->progress();
      json per = json::object();
      for (const auto& [id, a] : p.annotators) {
        per[id] = {{"ratings", a.ratings}, {"judgments", a.judgments}};
      }
      send_json(res, 200,
                {{"ratings", p.ratings},
                 {"judgments", p.judgments},
                 {"rating_tasks", p.rating_tasks},
                 {"pair_tasks", p.pair_tasks},
                 {"annotators", per}});
    });
  });

  if (!static_dir.empty()) svr.set_mount_point("/", static_dir.string());
}

AnnotateServer::~AnnotateServer() { stop(); }

int AnnotateServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool AnnotateServer::serve() { return impl_->server.listen_after_bind(); }

void AnnotateServer::stop() {
  if (impl_) impl_->server.stop();
}

bool AnnotateServer::running() const { return impl_->server.is_running(); }

void AnnotateServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace aigv
