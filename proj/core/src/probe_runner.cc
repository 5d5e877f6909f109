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

#include "wordprobe/probe_runner.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "wordprobe/dataset.h"
#include "wordprobe/error.h"
#include "wordprobe/random.h"
#include "wordprobe/zip_archive.h"

namespace wordprobe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Spreads exactly kLoadingSteps updates over `total` bytes of parsing.
class LoadingMeter {
 public:
  LoadingMeter(std::uint64_t total, const ProgressSink& sink)
      : total_(total), sink_(sink) {}

  void Advance(std::uint64_t done) {
    while (step_ < kLoadingSteps &&
           done * kLoadingSteps >= (step_ + 1) * total_) {
      Emit();
    }
  }

  void Complete() {
    while (step_ < kLoadingSteps) Emit();
  }

  double fraction() const {
    return kLoadingShare * static_cast<double>(step_) / kLoadingSteps;
  }

 private:
  void Emit() {
    ++step_;
    if (sink_) {
      Progress p;
      p.phase = Phase::kLoading;
      p.loading_step = static_cast<int>(step_);
      p.fraction = fraction();
      sink_(p);
    }
  }

  std::uint64_t total_;
  const ProgressSink& sink_;
  std::uint64_t step_ = 0;
};

}  // namespace

std::string_view SourceKindName(SourceKind kind) {
  return kind == SourceKind::kLayerBundle ? "layer_bundle" : "plain_table";
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kLoading: return "loading";
    case Phase::kProbing: return "probing";
    case Phase::kDone: return "done";
    case Phase::kFailed: return "failed";
  }
  return "failed";
}

SourceInfo InspectSource(const std::filesystem::path& path) {
  SourceInfo info;
  info.path = path;
  info.display_name = path.filename().string();
  std::error_code ec;
  info.byte_size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot stat " + path.string());

  if (ZipReader::HasZipSignature(path)) {
    try {
      LayerBundle bundle = OpenBundle(path);
      info.kind = SourceKind::kLayerBundle;
      info.layers = bundle.manifest();
      info.bundle_snapshot_label = bundle.snapshot_label();
      return info;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kMissingManifest ||
          e.code() == ErrorCode::kCorruptArchive) {
        throw Error(ErrorCode::kUnrecognizedFormat,
                    "archive is not a layer bundle: " + std::string(e.what()));
      }
      throw;
    }
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::optional<int> dim = SniffEmbeddingDim(in);
  if (!dim) {
    throw Error(ErrorCode::kUnrecognizedFormat,
                "neither a layer bundle nor embedding text: " + info.display_name);
  }
  info.kind = SourceKind::kPlainTable;
  info.dim = *dim;
  return info;
}

JobRequest JobRequestFromJson(const json& body) {
  auto bad = [](const std::string& what) -> Error {
    return Error(ErrorCode::kInvalidRequest, what);
  };
  if (!body.is_object()) throw bad("request body must be a JSON object");
  JobRequest req;
  try {
    req.language = body.at("language").get<std::string>();
    for (const json& t : body.at("tasks")) req.tasks.push_back(t.get<std::string>());
    if (auto it = body.find("layer"); it != body.end() && !it->is_null()) {
      req.layer = it->get<std::string>();
    }
    for (const json& s : body.at("snapshots")) {
      SnapshotRequest snap;
      snap.label = s.value("label", "");
      snap.source_id = s.at("upload_id").get<std::string>();
      req.snapshots.push_back(std::move(snap));
    }
    if (auto it = body.find("seed"); it != body.end() && !it->is_null()) {
      req.seed = it->get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw bad(std::string("malformed job request: ") + e.what());
  }
  return req;
}

JobPlan PlanJob(const JobRequest& request, const TaskRegistry& registry,
                const SourceResolver& resolve,
                const std::filesystem::path& data_root) {
  JobPlan plan;
  plan.language = registry.language(request.language).code;
  plan.data_root = data_root;
  plan.seed = request.seed;
  plan.layer = request.layer;

  if (request.tasks.empty()) {
    throw Error(ErrorCode::kInvalidRequest, "select at least one probing task");
  }
  std::set<std::string_view> seen_tasks;
  for (const std::string& name : request.tasks) {
    if (!seen_tasks.insert(name).second) {
      throw Error(ErrorCode::kInvalidRequest, "task '" + name + "' selected twice");
    }
    plan.tasks.push_back(registry.FindTask(plan.language, name));
  }

  if (request.snapshots.empty()) {
    throw Error(ErrorCode::kNoSnapshots, "at least one embedding source is required");
  }
  if (request.snapshots.size() > kMaxSnapshots) {
    throw Error(ErrorCode::kTooManySnapshots,
                "at most " + std::to_string(kMaxSnapshots) +
                    " snapshots per job, got " +
                    std::to_string(request.snapshots.size()));
  }

  std::set<std::string> labels;
  for (const SnapshotRequest& snap : request.snapshots) {
    std::optional<SourceInfo> info = resolve(snap.source_id);
    if (!info) {
      throw Error(ErrorCode::kUnknownUpload,
                  "unknown upload '" + snap.source_id + "'");
    }
    PlannedSource src;
    src.source_id = snap.source_id;
    src.snapshot_label = snap.label;
    if (src.snapshot_label.empty()) {
      src.snapshot_label = !info->bundle_snapshot_label.empty()
                               ? info->bundle_snapshot_label
                               : std::filesystem::path(info->display_name).stem().string();
    }
    if (!labels.insert(src.snapshot_label).second) {
      throw Error(ErrorCode::kDuplicateSnapshot,
                  "snapshot label '" + src.snapshot_label + "' used twice");
    }

    if (info->kind == SourceKind::kLayerBundle) {
      if (!request.layer) {
        throw Error(ErrorCode::kLayerRequiredForBundle,
                    "'" + info->display_name + "' is a layer bundle; choose a layer");
      }
      const LayerDescriptor* layer = nullptr;
      for (const LayerDescriptor& d : info->layers) {
        if (d.name == *request.layer) layer = &d;
      }
      if (layer == nullptr) {
        throw Error(ErrorCode::kUnknownLayer, "'" + info->display_name +
                                                  "' has no layer '" +
                                                  *request.layer + "'");
      }
      src.dim = layer->dim;
      src.payload_bytes = layer->payload_bytes;
    } else {
      if (request.layer) {
        throw Error(ErrorCode::kLayerNotApplicable,
                    "'" + info->display_name +
                        "' is a plain embedding table and has no layers");
      }
      src.dim = info->dim;
      src.payload_bytes = info->byte_size;
    }
    src.info = std::move(*info);
    plan.sources.push_back(std::move(src));
  }

  for (const PlannedSource& src : plan.sources) {
    if (src.dim != plan.sources.front().dim) {
      throw Error(ErrorCode::kMixedDimensions,
                  "snapshots disagree on dimension: " +
                      std::to_string(plan.sources.front().dim) + " vs " +
                      std::to_string(src.dim));
    }
  }
  return plan;
}

const CellResult* ProbeResult::Find(std::string_view task,
                                    std::string_view snapshot) const {
  for (const CellResult& c : cells) {
    if (c.task == task && c.snapshot == snapshot) return &c;
  }
  return nullptr;
}

ProbeResult RunJob(const JobPlan& plan, const ProgressSink& progress) {
  Progress last;
  auto emit = [&](const Progress& p) {
    last = p;
    if (progress) progress(p);
  };

  try {
    std::vector<ProbingDataset> datasets;
    datasets.reserve(plan.tasks.size());
    for (const ProbingTaskSpec& task : plan.tasks) {
      datasets.push_back(LoadDataset(plan.data_root, plan.language, task));
    }

    std::uint64_t total = 0;
    for (const PlannedSource& src : plan.sources) total += src.payload_bytes;
    const ProgressSink forward = [&](const Progress& p) { emit(p); };
    LoadingMeter meter(std::max<std::uint64_t>(total, 1), forward);

    std::vector<EmbeddingTable> tables;
    tables.reserve(plan.sources.size());
    std::uint64_t before = 0;
    for (const PlannedSource& src : plan.sources) {
      ParseOptions opts;
      opts.expected_dim = src.dim;
      opts.source_label = src.snapshot_label;
      opts.on_progress = [&](std::uint64_t consumed) { meter.Advance(before + consumed); };
      if (src.info.kind == SourceKind::kLayerBundle) {
        LayerBundle bundle = OpenBundle(src.info.path);
        tables.push_back(LoadLayer(bundle, *plan.layer, opts).first);
      } else {
        tables.push_back(ParseEmbeddingFile(src.info.path, opts).first);
      }
      before += src.payload_bytes;
      meter.Advance(before);
    }
    meter.Complete();

    ProbeResult result;
    result.language = plan.language;
    result.layer = plan.layer;
    result.seed = plan.seed;
    for (const ProbingTaskSpec& t : plan.tasks) result.tasks.push_back(t.name);
    for (const PlannedSource& s : plan.sources) result.snapshots.push_back(s.snapshot_label);

    const std::size_t cells = plan.cell_count();
    std::size_t index = 0;
    for (std::size_t t = 0; t < plan.tasks.size(); ++t) {
      const ProbingTaskSpec& task = plan.tasks[t];
      for (std::size_t s = 0; s < plan.sources.size(); ++s) {
        const std::string& snapshot = plan.sources[s].snapshot_label;
        Progress p;
        p.phase = Phase::kProbing;
        p.fraction = kLoadingShare + (1.0 - kLoadingShare) *
                                         static_cast<double>(index) / cells;
        p.current_task = task.name;
        emit(p);

        const EmbeddingTable& table = tables[s];
        auto [filtered, oov] = IntersectVocab(datasets[t], table);
        TrainConfig cfg = plan.train_config;
        cfg.seed = DeriveSeed(plan.seed, task.name, snapshot);
        auto [model, report] = Train(table, filtered, cfg);
        const EvalResult eval = Evaluate(model, table, task.kind, filtered.test);

        CellResult cell;
        cell.task = task.name;
        cell.snapshot = snapshot;
        cell.test_accuracy = eval.accuracy;
        cell.test_loss = eval.mean_loss;
        cell.dev_best_accuracy = report.dev_accuracy_per_epoch[report.best_epoch];
        cell.epochs_run = report.epochs_run;
        cell.oov_rate = oov.overall_rate();
        cell.majority_baseline = MajorityBaseline(filtered);
        cell.test_size = eval.n;
        result.cells.push_back(std::move(cell));
        ++index;
      }
    }

    Progress done;
    done.phase = Phase::kDone;
    done.fraction = 1.0;
    emit(done);
    result.created_at = UtcNow();
    return result;
  } catch (...) {
    Progress failed = last;
    failed.phase = Phase::kFailed;
    if (progress) progress(failed);
    throw;
  }
}

ordered_json ResultToJson(const ProbeResult& result) {
  ordered_json doc;
  doc["language"] = result.language;
  doc["layer"] = result.layer ? ordered_json(*result.layer) : ordered_json(nullptr);
  doc["seed"] = result.seed;
  doc["tasks"] = result.tasks;
  doc["snapshots"] = result.snapshots;
  ordered_json cells = ordered_json::array();
  for (const CellResult& c : result.cells) {
    cells.push_back({{"task", c.task},
                     {"snapshot", c.snapshot},
                     {"test_accuracy", c.test_accuracy},
                     {"test_loss", c.test_loss},
                     {"dev_best_accuracy", c.dev_best_accuracy},
                     {"epochs_run", c.epochs_run},
                     {"oov_rate", c.oov_rate},
                     {"majority_baseline", c.majority_baseline},
                     {"test_size", c.test_size}});
  }
  doc["cells"] = std::move(cells);
  doc["created_at"] = result.created_at;
  return doc;
}

ordered_json ToChart(const ProbeResult& result) {
  ordered_json chart;
  chart["axes"] = result.tasks;
  ordered_json series = ordered_json::array();
  for (const std::string& snapshot : result.snapshots) {
    ordered_json values = ordered_json::array();
    for (const std::string& task : result.tasks) {
      const CellResult* c = result.Find(task, snapshot);
      values.push_back(c ? c->test_accuracy : 0.0);
    }
    series.push_back({{"label", snapshot}, {"values", std::move(values)}});
  }
  chart["series"] = std::move(series);

  ordered_json columns = ordered_json::array({"task"});
  for (const std::string& snapshot : result.snapshots) {
    columns.push_back(snapshot + " accuracy");
    columns.push_back(snapshot + " loss");
  }
  ordered_json rows = ordered_json::array();
  for (const std::string& task : result.tasks) {
    ordered_json row = ordered_json::array({task});
    for (const std::string& snapshot : result.snapshots) {
      const CellResult* c = result.Find(task, snapshot);
      row.push_back(c ? c->test_accuracy : 0.0);
      row.push_back(c ? c->test_loss : 0.0);
    }
    rows.push_back(std::move(row));
  }
  chart["table"] = {{"columns", std::move(columns)}, {"rows", std::move(rows)}};
  return chart;
}

ordered_json ResultDocument(const ProbeResult& result) {
  ordered_json doc = ToChart(result);
  doc["result"] = ResultToJson(result);
  return doc;
}

std::string ResultTableTsv(const ProbeResult& result) {
  const ordered_json table = ToChart(result)["table"];
  std::ostringstream out;
  bool first = true;
  for (const auto& col : table["columns"]) {
    out << (first ? "" : "\t") << col.get<std::string>();
    first = false;
  }
  out << '\n';
  for (const auto& row : table["rows"]) {
    first = true;
    for (const auto& cell : row) {
      out << (first ? "" : "\t");
      if (cell.is_string()) {
        out << cell.get<std::string>();
      } else {
        out << cell.dump();
      }
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace wordprobe
