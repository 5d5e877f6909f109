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

#ifndef WORDPROBE_RESULT_STORE_H_
#define WORDPROBE_RESULT_STORE_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

struct sqlite3;

namespace wordprobe {

struct StoredResult {
  std::string public_token;
  std::string job_id;
  std::string state;  // "done" or "failed"
  std::string document;  // result document JSON when done
  std::string error_code;
  std::string error_message;
  std::string created_at;
};

// Results of finished jobs keyed by public token, in a SQLite file. Survives
// service restarts. Thread-safe.
class ResultStore {
 public:
  explicit ResultStore(const std::filesystem::path& db_path);
  ~ResultStore();

  ResultStore(const ResultStore&) = delete;
  ResultStore& operator=(const ResultStore&) = delete;

  void Put(const StoredResult& result);
  std::optional<StoredResult> Get(std::string_view public_token) const;
  // Deletes results stored more than `age` ago; returns how many.
  std::size_t PurgeOlderThan(std::chrono::seconds age);
  std::size_t Count() const;

 private:
  void Exec(const char* sql);

  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

}  // namespace wordprobe

#endif  // WORDPROBE_RESULT_STORE_H_
