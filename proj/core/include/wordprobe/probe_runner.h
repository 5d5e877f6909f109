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

#ifndef WORDPROBE_PROBE_RUNNER_H_
#define WORDPROBE_PROBE_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordprobe/classifier.h"
#include "wordprobe/layer_bundle.h"
#include "wordprobe/task_registry.h"

namespace wordprobe {

inline constexpr std::size_t kMaxSnapshots = 3;
inline constexpr int kLoadingSteps = 30;
// Share of the overall progress bar covered by the loading phase.
inline constexpr double kLoadingShare = 0.3;
inline constexpr std::uint64_t kDefaultSeed = 13;

enum class SourceKind { kPlainTable, kLayerBundle };
std::string_view SourceKindName(SourceKind kind);

// What is known about an embedding source without parsing it fully.
struct SourceInfo {
  std::filesystem::path path;
  std::string display_name;
  SourceKind kind = SourceKind::kPlainTable;
  int dim = 0;  // plain tables only
  std::vector<LayerDescriptor> layers;  // bundles only
  std::string bundle_snapshot_label;
  std::uint64_t byte_size = 0;
};

// Sniffs a file: a zip with manifest.json is a bundle, otherwise it must look
// like embedding text within its first lines. Throws Error(kUnrecognizedFormat).
SourceInfo InspectSource(const std::filesystem::path& path);

struct SnapshotRequest {
  std::string label;
  std::string source_id;
};

struct JobRequest {
  std::string language;
  std::vector<std::string> tasks;
  std::optional<std::string> layer;
  std::vector<SnapshotRequest> snapshots;
  std::uint64_t seed = kDefaultSeed;
};

// {language, tasks: [...], layer?, snapshots: [{label, upload_id}], seed?}.
// Throws Error(kInvalidRequest).
JobRequest JobRequestFromJson(const nlohmann::json& body);

// Maps a source id (upload id, or a path for the CLI) to its description;
// nullopt means the id is unknown.
using SourceResolver =
    std::function<std::optional<SourceInfo>(std::string_view source_id)>;

struct PlannedSource {
  std::string snapshot_label;
  std::string source_id;
  SourceInfo info;
  int dim = 0;
  std::uint64_t payload_bytes = 0;
};

struct JobPlan {
  std::string language;
  std::vector<ProbingTaskSpec> tasks;
  std::vector<PlannedSource> sources;  // 1..3 snapshots
  std::optional<std::string> layer;
  std::filesystem::path data_root;
  std::uint64_t seed = kDefaultSeed;
  TrainConfig train_config;

  std::size_t cell_count() const { return tasks.size() * sources.size(); }
};

// Validates a request. Throws Error with kUnknownLanguage, kUnknownTask,
// kInvalidRequest, kNoSnapshots, kTooManySnapshots, kDuplicateSnapshot,
// kUnknownUpload, kLayerRequiredForBundle, kLayerNotApplicable,
// kUnknownLayer or kMixedDimensions.
JobPlan PlanJob(const JobRequest& request, const TaskRegistry& registry,
                const SourceResolver& resolve,
                const std::filesystem::path& data_root);

enum class Phase { kLoading, kProbing, kDone, kFailed };
std::string_view PhaseName(Phase phase);

struct Progress {
  Phase phase = Phase::kLoading;
  double fraction = 0.0;  // of the whole job, monotone
  std::optional<std::string> current_task;
  int loading_step = 0;   // 1..kLoadingSteps during loading
};

using ProgressSink = std::function<void(const Progress&)>;

struct CellResult {
  std::string task;
  std::string snapshot;
  double test_accuracy = 0.0;
  double test_loss = 0.0;
  double dev_best_accuracy = 0.0;
  int epochs_run = 0;
  double oov_rate = 0.0;
  double majority_baseline = 0.0;
  std::size_t test_size = 0;
};

struct ProbeResult {
  std::string language;
  std::optional<std::string> layer;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> tasks;      // chart axes, selection order
  std::vector<std::string> snapshots;  // chart series
  std::vector<CellResult> cells;       // task-major
  std::string created_at;

  const CellResult* Find(std::string_view task, std::string_view snapshot) const;
};

// Loads datasets, parses every source while reporting exactly kLoadingSteps
// evenly spaced loading updates, then trains and evaluates one classifier per
// (task, snapshot) cell in plan order with seed DeriveSeed(plan.seed, task,
// snapshot). On failure a kFailed progress update is sent and the error is
// rethrown.
ProbeResult RunJob(const JobPlan& plan, const ProgressSink& progress = {});

nlohmann::ordered_json ResultToJson(const ProbeResult& result);
// The chart document: {"axes": [...], "series": [{"label", "values"}],
// "table": {"columns": [...], "rows": [...]}}.
nlohmann::ordered_json ToChart(const ProbeResult& result);
// Chart document with the full result under "result"; what the CLI writes
// and the service serves.
nlohmann::ordered_json ResultDocument(const ProbeResult& result);
// Tab-separated form of the chart table.
std::string ResultTableTsv(const ProbeResult& result);

}  // namespace wordprobe

#endif  // WORDPROBE_PROBE_RUNNER_H_
