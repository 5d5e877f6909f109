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

#ifndef WORDPROBE_HTTP_API_H_
#define WORDPROBE_HTTP_API_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "wordprobe/error.h"
#include "wordprobe/probe_service.h"

namespace wordprobe {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Optional static front end; /results/<token> falls back to its index.html.
  std::optional<std::filesystem::path> static_dir;
};

// Status code used for an error outside request-validation contexts.
int HttpStatusFor(ErrorCode code);

// JSON API over a ProbeService:
//   POST /api/uploads                  multipart "file" field, or raw body
//   GET  /api/languages
//   GET  /api/languages/{code}/tasks
//   POST /api/jobs                     {language, tasks, layer?, snapshots, seed?}
//   GET  /api/jobs/{id}
//   GET  /api/results/{public_token}
// Errors are {"error": <ErrorCode name>, "message": ...}.
class HttpApi {
 public:
  HttpApi(ProbeService& service, HttpOptions options);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Returns the bound port. Throws Error(kIoError) if binding fails.
  int Bind();
  // Blocks until Stop().
  void Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wordprobe

#endif  // WORDPROBE_HTTP_API_H_
