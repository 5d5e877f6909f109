// Copyright 2026 The wordprobe Authors.
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

#include "wordprobe/http_api.h"

#include <httplib.h>

#include <sys/socket.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace wordprobe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void SendJson(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, std::string_view code,
               std::string_view message) {
  SendJson(res, status, {{"error", code}, {"message", message}});
}

void SendError(httplib::Response& res, const Error& e) {
  SendError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
}

// Runs a handler body, turning exceptions into JSON error responses.
template <typename Fn>
void Guard(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    SendError(res, e);
  } catch (const std::exception& e) {
    SendError(res, 500, "Internal", e.what());
  }
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownLanguage:
    case ErrorCode::kUnknownTask:
    case ErrorCode::kUnknownUpload:
    case ErrorCode::kUnknownJob:
    case ErrorCode::kUnknownToken:
      return 404;
    case ErrorCode::kJobNotFinished:
      return 409;
    case ErrorCode::kStorageFull:
      return 413;
    case ErrorCode::kUnrecognizedFormat:
      return 415;
    case ErrorCode::kShuttingDown:
      return 503;
    case ErrorCode::kIoError:
    case ErrorCode::kInternal:
      return 500;
    default:
      return 400;
  }
}

struct HttpApi::Impl {
  ProbeService& service;
  HttpOptions options;
  httplib::Server server;
  int bound_port = -1;
  std::atomic<bool> serving{false};
  std::atomic<bool> stop_requested{false};
  std::atomic<bool> finished{false};

  Impl(ProbeService& s, HttpOptions o) : service(s), options(std::move(o)) {
    // The library default adds SO_REUSEPORT, which would let a second server
    // share a busy port instead of failing to bind.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    Routes();
  }

  void Routes() {
    server.Post("/api/uploads", [this](const httplib::Request& req,
                                       httplib::Response& res,
                                       const httplib::ContentReader& reader) {
      HandleUpload(req, res, reader);
    });

    server.Get("/api/languages", [this](const httplib::Request&,
                                        httplib::Response& res) {
      ordered_json list = ordered_json::array();
      for (const LanguageEntry& lang : service.registry().languages()) {
        list.push_back({{"code", lang.code},
                        {"name", lang.display_name},
                        {"task_count", lang.tasks.size()}});
      }
      SendJson(res, 200, list);
    });

    server.Get(R"(/api/languages/([^/]+)/tasks)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   ordered_json list = ordered_json::array();
                   for (const ProbingTaskSpec& t :
                        service.registry().ListTasks(req.matches[1].str())) {
                     list.push_back({{"name", t.name},
                                     {"kind", TaskKindName(t.kind)},
                                     {"description", t.description}});
                   }
                   SendJson(res, 200, list);
                 });
               });

    server.Post("/api/jobs", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      try {
        json body;
        try {
          body = json::parse(req.body);
        } catch (const json::parse_error& e) {
          throw Error(ErrorCode::kInvalidRequest, e.what());
        }
        const JobTicket ticket = service.CreateJob(JobRequestFromJson(body));
        SendJson(res, 201,
                 {{"job_id", ticket.job_id}, {"public_token", ticket.public_token}});
      } catch (const Error& e) {
        // Everything short of a server fault is a rejected request here.
        const int status = e.code() == ErrorCode::kShuttingDown ? 503
                           : e.code() == ErrorCode::kInternal ||
                                   e.code() == ErrorCode::kIoError
                               ? 500
                               : 400;
        SendError(res, status, ErrorCodeName(e.code()), e.what());
      } catch (const std::exception& e) {
        SendError(res, 500, "Internal", e.what());
      }
    });

    server.Get(R"(/api/jobs/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   SendJson(res, 200, service.GetProgress(req.matches[1].str()).ToJson());
                 });
               });

    server.Get(R"(/api/results/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   SendJson(res, 200, service.GetResult(req.matches[1].str()));
                 });
               });

    if (options.static_dir) {
      server.set_mount_point("/", options.static_dir->string());
      server.Get(R"(/results/([^/]+))",
                 [this](const httplib::Request&, httplib::Response& res) {
                   std::ifstream in(*options.static_dir / "index.html");
                   if (!in) {
                     SendError(res, 404, "UnknownToken", "no front end installed");
                     return;
                   }
                   std::stringstream html;
                   html << in.rdbuf();
                   res.set_content(html.str(), "text/html");
                 });
    }
  }

  void HandleUpload(const httplib::Request& req, httplib::Response& res,
                    const httplib::ContentReader& reader) {
    std::unique_ptr<ProbeService::UploadSession> session;
    std::optional<Error> failure;
    auto write = [&](const char* data, std::size_t len) {
      if (!session || failure) return !failure;
      try {
        session->Write(data, len);
        return true;
      } catch (const Error& e) {
        failure = e;
        return false;
      }
    };
    try {
      if (req.is_multipart_form_data()) {
        bool seen_file = false;
        reader(
            [&](const httplib::MultipartFormData& part) {
              if (part.name != "file" || seen_file) {
                session.reset();
                return true;
              }
              seen_file = true;
              session = service.BeginUpload(part.filename);
              return true;
            },
            write);
      } else {
        std::string name = req.has_param("name") ? req.get_param_value("name") : "";
        session = service.BeginUpload(name);
        reader(write);
      }
      if (failure) throw *failure;
      if (!session) {
        throw Error(ErrorCode::kInvalidRequest, "multipart body needs a 'file' part");
      }
      const Upload upload = session->Commit();
      SendJson(res, 201, upload.ToJson());
    } catch (const Error& e) {
      SendError(res, e);
    } catch (const std::exception& e) {
      SendError(res, 500, "Internal", e.what());
    }
  }
};

HttpApi::HttpApi(ProbeService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpApi::~HttpApi() { Stop(); }

int HttpApi::Bind() {
  if (impl_->options.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(impl_->options.host);
  } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->bound_port = impl_->options.port;
  }
  if (impl_->bound_port <= 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + impl_->options.host + ":" +
                                         std::to_string(impl_->options.port));
  }
  return impl_->bound_port;
}

void HttpApi::Serve() {
  impl_->serving = true;
  if (!impl_->stop_requested) impl_->server.listen_after_bind();
  impl_->finished = true;
}

void HttpApi::Stop() {
  impl_->stop_requested = true;
  if (!impl_->serving) return;
  while (!impl_->server.is_running() && !impl_->finished) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  impl_->server.stop();
}

}  // namespace wordprobe
