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

#include "wordprobe/probe_service.h"

#include <sys/random.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <set>

#include "wordprobe/error.h"

namespace wordprobe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kUploadPrefix = "upload-";

void FillRandom(unsigned char* out, std::size_t n) {
  while (n > 0) {
    const ssize_t got = getrandom(out, n, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kInternal, "getrandom failed");
    }
    out += got;
    n -= static_cast<std::size_t>(got);
  }
}

}  // namespace

std::string RandomToken(std::size_t bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::vector<unsigned char> raw(bytes);
  FillRandom(raw.data(), raw.size());
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (unsigned char b : raw) {
    acc = (acc << 8) | b;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out.push_back(kAlphabet[(acc >> bits) & 0x3f]);
    }
  }
  if (bits > 0) out.push_back(kAlphabet[(acc << (6 - bits)) & 0x3f]);
  return out;
}

std::string_view JobStateName(JobState state) {
  switch (state) {
    case JobState::kQueued: return "queued";
    case JobState::kLoading: return "loading";
    case JobState::kProbing: return "probing";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "failed";
}

ordered_json JobStatus::ToJson() const {
  ordered_json doc;
  doc["job_id"] = job_id;
  doc["state"] = JobStateName(state);
  doc["fraction"] = fraction;
  doc["current_task"] = current_task ? ordered_json(*current_task) : ordered_json(nullptr);
  doc["loading_step"] = loading_step;
  if (state == JobState::kFailed) {
    doc["error"] = {{"code", error_code}, {"message", error_message}};
  }
  return doc;
}

ordered_json Upload::ToJson() const {
  ordered_json doc;
  doc["id"] = id;
  doc["kind"] = SourceKindName(kind);
  doc["name"] = display_name;
  doc["detected_dim"] = detected_dim;
  doc["byte_size"] = byte_size;
  if (kind == SourceKind::kLayerBundle) {
    doc["detected_layers"] = detected_layers;
  } else {
    doc["detected_layers"] = nullptr;
  }
  return doc;
}

ProbeService::ProbeService(ServiceConfig config)
    : config_(std::move(config)),
      registry_(config_.registry_path ? LoadRegistryFile(*config_.registry_path)
                                      : DefaultRegistry()),
      store_(config_.db_path) {
  std::filesystem::create_directories(config_.upload_dir);
  // Files left by a previous process can no longer be referenced.
  for (const auto& entry : std::filesystem::directory_iterator(config_.upload_dir)) {
    if (entry.path().filename().string().starts_with(kUploadPrefix)) {
      std::error_code ec;
      std::filesystem::remove(entry.path(), ec);
    }
  }
  const int workers = std::max(1, config_.worker_count);
  for (int i = 0; i < workers; ++i) {
    workers_.emplace_back([this] { WorkerLoop(); });
  }
}

ProbeService::~ProbeService() { Shutdown(); }

ProbeService::UploadSession::UploadSession(ProbeService* service, std::string id,
                                           std::string name)
    : service_(service),
      id_(std::move(id)),
      display_name_(std::move(name)),
      path_(service->config_.upload_dir / (std::string(kUploadPrefix) + id_)),
      out_(path_, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kIoError, "cannot create " + path_.string());
}

ProbeService::UploadSession::~UploadSession() {
  if (committed_) return;
  out_.close();
  std::error_code ec;
  std::filesystem::remove(path_, ec);
  std::lock_guard<std::mutex> lock(service_->mu_);
  service_->reserved_bytes_ -= bytes_;
}

void ProbeService::UploadSession::Write(const char* data, std::size_t size) {
  {
    std::lock_guard<std::mutex> lock(service_->mu_);
    if (bytes_ + size > service_->config_.max_upload_bytes) {
      throw Error(ErrorCode::kStorageFull,
                  "upload exceeds the per-file limit of " +
                      std::to_string(service_->config_.max_upload_bytes) + " bytes");
    }
    if (service_->reserved_bytes_ + size > service_->config_.upload_quota) {
      throw Error(ErrorCode::kStorageFull, "upload storage quota exhausted");
    }
    service_->reserved_bytes_ += size;
    bytes_ += size;
  }
  out_.write(data, static_cast<std::streamsize>(size));
  if (!out_) throw Error(ErrorCode::kIoError, "cannot write upload");
}

Upload ProbeService::UploadSession::Commit() {
  out_.close();
  if (!out_) throw Error(ErrorCode::kIoError, "cannot finish upload");
  SourceInfo info = InspectSource(path_);  // throws; destructor cleans up
  info.display_name = display_name_.empty() ? id_ : display_name_;

  Upload upload;
  upload.id = id_;
  upload.kind = info.kind;
  upload.byte_size = bytes_;
  upload.stored_at = path_;
  upload.display_name = info.display_name;
  if (info.kind == SourceKind::kLayerBundle) {
    for (const LayerDescriptor& d : info.layers) upload.detected_layers.push_back(d.name);
    upload.detected_dim = info.layers.empty() ? 0 : info.layers.front().dim;
  } else {
    upload.detected_dim = info.dim;
  }

  std::lock_guard<std::mutex> lock(service_->mu_);
  service_->uploads_[id_] = upload;
  service_->upload_sources_[id_] = std::move(info);
  service_->upload_refs_[id_] = 0;
  committed_ = true;
  return upload;
}

std::unique_ptr<ProbeService::UploadSession> ProbeService::BeginUpload(
    std::string display_name) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) throw Error(ErrorCode::kShuttingDown, "service is shutting down");
  }
  return std::unique_ptr<UploadSession>(
      new UploadSession(this, RandomToken(12), std::move(display_name)));
}

Upload ProbeService::CreateUpload(std::istream& data, std::string display_name) {
  auto session = BeginUpload(std::move(display_name));
  std::array<char, 1 << 16> buf;
  while (data.read(buf.data(), buf.size()) || data.gcount() > 0) {
    session->Write(buf.data(), static_cast<std::size_t>(data.gcount()));
  }
  return session->Commit();
}

std::optional<Upload> ProbeService::FindUpload(std::string_view id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = uploads_.find(id);
  if (it == uploads_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t ProbeService::bytes_in_use() const {
  std::lock_guard<std::mutex> lock(mu_);
  return reserved_bytes_;
}

JobTicket ProbeService::CreateJob(const JobRequest& request) {
  auto job = std::make_shared<Job>();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_) throw Error(ErrorCode::kShuttingDown, "service is shutting down");
    const SourceResolver resolve =
        [this](std::string_view id) -> std::optional<SourceInfo> {
      auto it = upload_sources_.find(id);
      if (it == upload_sources_.end()) return std::nullopt;
      return it->second;
    };
    job->plan = PlanJob(request, registry_, resolve, config_.data_root);
    job->plan.train_config = config_.train_config;
    job->plan.train_config.on_clipped_gradients = nullptr;
    job->id = RandomToken(9);
    job->public_token = RandomToken(16);
    job->status.job_id = job->id;

    std::set<std::string> distinct;
    for (const PlannedSource& src : job->plan.sources) distinct.insert(src.source_id);
    job->upload_ids.assign(distinct.begin(), distinct.end());
    for (const std::string& id : job->upload_ids) ++upload_refs_[id];

    jobs_[job->id] = job;
    jobs_by_token_[job->public_token] = job;
    queue_.push_back(job);
  }
  {
    std::lock_guard<std::mutex> lock(job->mu);
    if (config_.observer) config_.observer(job->status);
  }
  work_.notify_one();
  return {job->id, job->public_token};
}

std::shared_ptr<ProbeService::Job> ProbeService::LookupJob(std::string_view id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second;
}

std::shared_ptr<ProbeService::Job> ProbeService::LookupToken(
    std::string_view token) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_by_token_.find(token);
  return it == jobs_by_token_.end() ? nullptr : it->second;
}

JobStatus ProbeService::GetProgress(std::string_view job_id) const {
  auto job = LookupJob(job_id);
  if (!job) throw Error(ErrorCode::kUnknownJob, "unknown job '" + std::string(job_id) + "'");
  std::lock_guard<std::mutex> lock(job->mu);
  return job->status;
}

JobStatus ProbeService::WaitForJob(std::string_view job_id,
                                   std::chrono::milliseconds timeout) const {
  auto job = LookupJob(job_id);
  if (!job) throw Error(ErrorCode::kUnknownJob, "unknown job '" + std::string(job_id) + "'");
  std::unique_lock<std::mutex> lock(job->mu);
  job->cv.wait_for(lock, timeout, [&] { return IsTerminal(job->status.state); });
  return job->status;
}

ordered_json ProbeService::GetResult(std::string_view public_token) const {
  if (auto job = LookupToken(public_token)) {
    std::lock_guard<std::mutex> lock(job->mu);
    if (!IsTerminal(job->status.state)) {
      throw Error(ErrorCode::kJobNotFinished, "job has not finished yet");
    }
  }
  std::optional<StoredResult> stored = store_.Get(public_token);
  if (!stored) throw Error(ErrorCode::kUnknownToken, "unknown result token");

  ordered_json out;
  out["state"] = stored->state;
  out["public_token"] = stored->public_token;
  if (stored->state == "done") {
    ordered_json document = ordered_json::parse(stored->document);
    for (auto& [key, value] : document.items()) {
      out[key] = std::move(value);
    }
  } else {
    out["error"] = {{"code", stored->error_code}, {"message", stored->error_message}};
  }
  return out;
}

void ProbeService::Update(Job& job, const std::function<void(JobStatus&)>& change) {
  std::lock_guard<std::mutex> lock(job.mu);
  JobStatus next = job.status;
  change(next);
  // Transitions only move forward; the bar never shrinks.
  next.state = std::max(next.state, job.status.state);
  next.fraction = std::max(next.fraction, job.status.fraction);
  job.status = std::move(next);
  if (config_.observer) config_.observer(job.status);
  job.cv.notify_all();
}

void ProbeService::WorkerLoop() {
  while (true) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock<std::mutex> lock(mu_);
      work_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job = queue_.front();
      queue_.pop_front();
    }
    Execute(*job);
  }
}

void ProbeService::Execute(Job& job) {
  Update(job, [](JobStatus& s) { s.state = JobState::kLoading; });
  const ProgressSink sink = [&](const Progress& p) {
    if (p.phase != Phase::kLoading && p.phase != Phase::kProbing) return;
    Update(job, [&](JobStatus& s) {
      s.state = p.phase == Phase::kLoading ? JobState::kLoading : JobState::kProbing;
      s.fraction = p.fraction;
      s.loading_step = p.loading_step;
      s.current_task = p.current_task;
    });
  };
  try {
    ProbeResult result = RunJob(job.plan, sink);
    Finish(job, std::move(result), "", "");
  } catch (const Error& e) {
    Finish(job, std::nullopt, std::string(ErrorCodeName(e.code())), e.what());
  } catch (const std::exception& e) {
    Finish(job, std::nullopt, "Internal", e.what());
  }
}

void ProbeService::Finish(Job& job, std::optional<ProbeResult> result,
                          const std::string& error_code,
                          const std::string& error_message) {
  StoredResult stored;
  stored.public_token = job.public_token;
  stored.job_id = job.id;
  if (result) {
    stored.state = "done";
    stored.document = ResultDocument(*result).dump();
    stored.created_at = result->created_at;
  } else {
    stored.state = "failed";
    stored.error_code = error_code;
    stored.error_message = error_message;
  }
  try {
    store_.Put(stored);
  } catch (const Error&) {
    // The job still ends; its token will not resolve.
  }
  ReleaseUploads(job);
  Update(job, [&](JobStatus& s) {
    if (result) {
      s.state = JobState::kDone;
      s.fraction = 1.0;
    } else {
      s.state = JobState::kFailed;
      s.error_code = error_code;
      s.error_message = error_message;
    }
    s.loading_step = 0;
  });
}

void ProbeService::ReleaseUploads(const Job& job) {
  std::lock_guard<std::mutex> lock(mu_);
  for (const std::string& id : job.upload_ids) {
    auto ref = upload_refs_.find(id);
    if (ref == upload_refs_.end() || --ref->second > 0) continue;
    upload_refs_.erase(ref);
    auto it = uploads_.find(id);
    if (it != uploads_.end()) {
      std::error_code ec;
      std::filesystem::remove(it->second.stored_at, ec);
      reserved_bytes_ -= it->second.byte_size;
      uploads_.erase(it);
    }
    upload_sources_.erase(id);
  }
}

void ProbeService::Shutdown() {
  std::deque<std::shared_ptr<Job>> abandoned;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (stopping_ && workers_.empty()) return;
    stopping_ = true;
    abandoned.swap(queue_);
  }
  work_.notify_all();
  for (auto& job : abandoned) {
    Finish(*job, std::nullopt, "ShuttingDown",
           "service stopped before the job started");
  }
  for (std::thread& t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
}

}  // namespace wordprobe
