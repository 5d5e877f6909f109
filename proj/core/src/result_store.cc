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

#include "wordprobe/result_store.h"

#include <sqlite3.h>

#include "wordprobe/error.h"

namespace wordprobe {
namespace {

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(ErrorCode::kInternal,
                  std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  void Bind(int i, std::string_view text) {
    sqlite3_bind_text(stmt_, i, text.data(), static_cast<int>(text.size()),
                      SQLITE_TRANSIENT);
  }
  void Bind(int i, sqlite3_int64 v) { sqlite3_bind_int64(stmt_, i, v); }

  bool Step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorCode::kInternal, std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }

  std::string Text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           sqlite3_column_bytes(stmt_, col))
             : std::string();
  }
  sqlite3_int64 Int(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

sqlite3_int64 NowSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ResultStore::ResultStore(const std::filesystem::path& db_path) {
  if (db_path.has_parent_path()) {
    std::filesystem::create_directories(db_path.parent_path());
  }
  if (sqlite3_open(db_path.c_str(), &db_) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw Error(ErrorCode::kIoError, "cannot open result store: " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  Exec("PRAGMA journal_mode=WAL");
  Exec(
      "CREATE TABLE IF NOT EXISTS results ("
      "  public_token TEXT PRIMARY KEY,"
      "  job_id TEXT NOT NULL,"
      "  state TEXT NOT NULL,"
      "  document TEXT,"
      "  error_code TEXT,"
      "  error_message TEXT,"
      "  created_at TEXT,"
      "  stored_at INTEGER NOT NULL)");
}

ResultStore::~ResultStore() { sqlite3_close(db_); }

void ResultStore::Exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw Error(ErrorCode::kInternal, "sqlite: " + msg);
  }
}

void ResultStore::Put(const StoredResult& r) {
  std::lock_guard<std::mutex> lock(mu_);
  Statement st(db_,
               "INSERT OR REPLACE INTO results (public_token, job_id, state, "
               "document, error_code, error_message, created_at, stored_at) "
               "VALUES (?, ?, ?, ?, ?, ?, ?, ?)");
  st.Bind(1, r.public_token);
  st.Bind(2, r.job_id);
  st.Bind(3, r.state);
  st.Bind(4, r.document);
  st.Bind(5, r.error_code);
  st.Bind(6, r.error_message);
  st.Bind(7, r.created_at);
  st.Bind(8, NowSeconds());
  st.Step();
}

std::optional<StoredResult> ResultStore::Get(std::string_view public_token) const {
  std::lock_guard<std::mutex> lock(mu_);
  Statement st(db_,
               "SELECT public_token, job_id, state, document, error_code, "
               "error_message, created_at FROM results WHERE public_token = ?");
  st.Bind(1, public_token);
  if (!st.Step()) return std::nullopt;
  StoredResult r;
  r.public_token = st.Text(0);
  r.job_id = st.Text(1);
  r.state = st.Text(2);
  r.document = st.Text(3);
  r.error_code = st.Text(4);
  r.error_message = st.Text(5);
  r.created_at = st.Text(6);
  return r;
}

std::size_t ResultStore::PurgeOlderThan(std::chrono::seconds age) {
  std::lock_guard<std::mutex> lock(mu_);
  Statement st(db_, "DELETE FROM results WHERE stored_at < ?");
  st.Bind(1, NowSeconds() - static_cast<sqlite3_int64>(age.count()));
  st.Step();
  return static_cast<std::size_t>(sqlite3_changes(db_));
}

std::size_t ResultStore::Count() const {
  std::lock_guard<std::mutex> lock(mu_);
  Statement st(db_, "SELECT COUNT(*) FROM results");
  st.Step();
  return static_cast<std::size_t>(st.Int(0));
}

}  // namespace wordprobe
