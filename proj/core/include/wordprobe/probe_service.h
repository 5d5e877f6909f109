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

#ifndef WORDPROBE_PROBE_SERVICE_H_
#define WORDPROBE_PROBE_SERVICE_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordprobe/probe_runner.h"
#include "wordprobe/result_store.h"
#include "wordprobe/task_registry.h"

namespace wordprobe {

enum class JobState { kQueued, kLoading, kProbing, kDone, kFailed };
std::string_view JobStateName(JobState state);
inline bool IsTerminal(JobState s) {
  return s == JobState::kDone || s == JobState::kFailed;
}

struct JobStatus {
  std::string job_id;
  JobState state = JobState::kQueued;
  double fraction = 0.0;
  std::optional<std::string> current_task;
  int loading_step = 0;
  std::string error_code;
  std::string error_message;

  nlohmann::ordered_json ToJson() const;
};

struct ServiceConfig {
  std::filesystem::path data_root;
  std::filesystem::path db_path = "wordprobe-results.sqlite";
  std::filesystem::path upload_dir = "wordprobe-uploads";
  std::optional<std::filesystem::path> registry_path;
  int worker_count = 2;
  std::uint64_t upload_quota = std::uint64_t{16} << 30;
  std::uint64_t max_upload_bytes = std::uint64_t{8} << 30;
  TrainConfig train_config;
  // Called with the job's lock held on every status change; must not call
  // back into the service.
  std::function<void(const JobStatus&)> observer;
};

struct Upload {
  std::string id;
  SourceKind kind = SourceKind::kPlainTable;
  std::vector<std::string> detected_layers;  // bundles only
  int detected_dim = 0;
  std::uint64_t byte_size = 0;
  std::filesystem::path stored_at;
  std::string display_name;

  nlohmann::ordered_json ToJson() const;
};

struct JobTicket {
  std::string job_id;
  std::string public_token;
};

// URL-safe base64 of `bytes` bytes from the OS CSPRNG.
std::string RandomToken(std::size_t bytes);

// In-process probing service: temp-file uploads under a quota, a FIFO job
// queue served by a bounded worker pool, live progress, and results
// persisted by public token. Upload files are deleted once every job that
// references them has finished.
class ProbeService {
 public:
  explicit ProbeService(ServiceConfig config);
  ~ProbeService();

  ProbeService(const ProbeService&) = delete;
  ProbeService& operator=(const ProbeService&) = delete;

  const TaskRegistry& registry() const { return registry_; }
  const ServiceConfig& config() const { return config_; }

  // Incremental upload into the temp area. Abandoned sessions remove their
  // file.
  class UploadSession {
   public:
    ~UploadSession();
    // Throws Error(kStorageFull) when a size limit would be exceeded.
    void Write(const char* data, std::size_t size);
    // Sniffs the content and registers the upload. Throws
    // Error(kUnrecognizedFormat).
    Upload Commit();

   private:
    friend class ProbeService;
    UploadSession(ProbeService* service, std::string id, std::string name);

    ProbeService* service_;
    std::string id_;
    std::string display_name_;
    std::filesystem::path path_;
    std::ofstream out_;
    std::uint64_t bytes_ = 0;
    bool committed_ = false;
  };

  std::unique_ptr<UploadSession> BeginUpload(std::string display_name);
  Upload CreateUpload(std::istream& data, std::string display_name);
  std::optional<Upload> FindUpload(std::string_view id) const;
  std::uint64_t bytes_in_use() const;

  // Validates and enqueues; never blocks on probing. Throws the PlanJob
  // errors, Error(kUnknownUpload) or Error(kShuttingDown).
  JobTicket CreateJob(const JobRequest& request);

  // Throws Error(kUnknownJob).
  JobStatus GetProgress(std::string_view job_id) const;

  // {"state": "done", ...result document} or {"state": "failed", "error":
  // {...}}. Throws Error(kUnknownToken) or Error(kJobNotFinished).
  nlohmann::ordered_json GetResult(std::string_view public_token) const;

  // Blocks until the job is terminal or the timeout passes.
  JobStatus WaitForJob(std::string_view job_id,
                       std::chrono::milliseconds timeout = std::chrono::minutes(10)) const;

  // Lets running jobs finish, fails queued ones with kShuttingDown, joins the
  // workers. Idempotent.
  void Shutdown();

  std::size_t PurgeResultsOlderThan(std::chrono::seconds age) {
    return store_.PurgeOlderThan(age);
  }

 private:
  struct Job {
    std::string id;
    std::string public_token;
    JobPlan plan;
    std::vector<std::string> upload_ids;
    mutable std::mutex mu;
    mutable std::condition_variable cv;
    JobStatus status;
  };

  void WorkerLoop();
  void Execute(Job& job);
  void Update(Job& job, const std::function<void(JobStatus&)>& change);
  void Finish(Job& job, std::optional<ProbeResult> result,
              const std::string& error_code, const std::string& error_message);
  void ReleaseUploads(const Job& job);
  std::shared_ptr<Job> LookupJob(std::string_view id) const;
  std::shared_ptr<Job> LookupToken(std::string_view token) const;

  ServiceConfig config_;
  TaskRegistry registry_;
  ResultStore store_;

  mutable std::mutex mu_;
  std::condition_variable work_;
  std::map<std::string, Upload, std::less<>> uploads_;
  std::map<std::string, SourceInfo, std::less<>> upload_sources_;
  std::map<std::string, int, std::less<>> upload_refs_;
  std::uint64_t reserved_bytes_ = 0;  // committed uploads + open sessions
  std::map<std::string, std::shared_ptr<Job>, std::less<>> jobs_;
  std::map<std::string, std::shared_ptr<Job>, std::less<>> jobs_by_token_;
  std::deque<std::shared_ptr<Job>> queue_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace wordprobe

#endif  // WORDPROBE_PROBE_SERVICE_H_
