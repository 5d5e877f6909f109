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

#include "cli.h"

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "wordprobe/dataset.h"
#include "wordprobe/embedding_table.h"
#include "wordprobe/error.h"
#include "wordprobe/http_api.h"
#include "wordprobe/layer_bundle.h"
#include "wordprobe/probe_runner.h"
#include "wordprobe/probe_service.h"
#include "wordprobe/result_store.h"
#include "wordprobe/synthetic.h"
#include "wordprobe/task_registry.h"

namespace wordprobe::cli {
namespace {

namespace fs = std::filesystem;

// Thrown for errors that should map to the validation exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void PrintError(std::ostream& err, const Error& e) {
  err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
}

TaskRegistry RegistryFrom(const std::string& path) {
  return path.empty() ? DefaultRegistry() : LoadRegistryFile(path);
}

std::vector<std::string> SplitList(const std::string& list) {
  std::vector<std::string> items;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// Draws a one-line bar on `err`, redrawing in place.
class ProgressBar {
 public:
  explicit ProgressBar(std::ostream& err) : err_(err) {}

  void Draw(const Progress& p) {
    constexpr int kWidth = 30;
    const int filled = static_cast<int>(std::lround(p.fraction * kWidth));
    std::string label(PhaseName(p.phase));
    if (p.current_task) label += " " + *p.current_task;
    err_ << "\r[" << std::string(filled, '#') << std::string(kWidth - filled, '.')
         << "] " << std::setw(3) << std::lround(p.fraction * 100) << "% " << label
         << "\x1b[K" << std::flush;
    if (p.phase == Phase::kDone || p.phase == Phase::kFailed) err_ << "\n";
  }

 private:
  std::ostream& err_;
};

struct ProbeFlags {
  std::string embeddings;
  std::vector<std::string> snapshots;
  std::string layer;
  std::string language;
  std::string tasks;
  std::string data_root = ".";
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
  std::string registry;
  bool quiet = false;
};

int CmdProbe(const ProbeFlags& f, std::ostream& out, std::ostream& err) {
  const TaskRegistry registry = RegistryFrom(f.registry);
  JobRequest request;
  request.language = f.language;
  request.tasks = SplitList(f.tasks);
  request.seed = f.seed;
  if (!f.layer.empty()) request.layer = f.layer;

  if (f.embeddings.empty() == f.snapshots.empty()) {
    throw UsageError("give exactly one of --embeddings or --snapshot");
  }
  if (!f.embeddings.empty()) {
    request.snapshots.push_back({"", f.embeddings});
  }
  for (const std::string& spec : f.snapshots) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw UsageError("--snapshot expects LABEL=PATH, got '" + spec + "'");
    }
    request.snapshots.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
  }

  const SourceResolver resolve =
      [](std::string_view id) -> std::optional<SourceInfo> {
    const fs::path path(id);
    if (!fs::is_regular_file(path)) return std::nullopt;
    return InspectSource(path);
  };
  const JobPlan plan = PlanJob(request, registry, resolve, f.data_root);

  ProgressBar bar(err);
  ProbeResult result;
  try {
    result = RunJob(plan, [&](const Progress& p) {
      if (!f.quiet) bar.Draw(p);
    });
  } catch (const Error& e) {
    PrintError(err, e);
    return kExitRuntime;
  }

  std::string rendered;
  if (f.format == "tsv") {
    rendered = ResultTableTsv(result);
  } else {
    rendered = ResultDocument(result).dump(2) + "\n";
  }
  if (f.out.empty()) {
    out << rendered;
  } else {
    std::ofstream file(f.out, std::ios::binary | std::ios::trunc);
    file << rendered;
    if (!file) {
      err << "error: IoError: cannot write " << f.out << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

void PrintReport(std::ostream& out, const ParseReport& report) {
  out << "accepted: " << report.accepted << "\n"
      << "dropped_malformed: " << report.dropped_malformed << "\n"
      << "dropped_duplicate: " << report.dropped_duplicate << "\n"
      << "detected_dim: " << report.detected_dim << "\n";
}

int CmdValidate(const std::string& path, const std::string& layer, std::ostream& out) {
  const SourceInfo info = InspectSource(path);
  if (info.kind == SourceKind::kPlainTable) {
    if (!layer.empty()) {
      throw Error(ErrorCode::kLayerNotApplicable, "plain tables have no layers");
    }
    PrintReport(out, ParseEmbeddingFile(path).second);
    return kExitOk;
  }
  const LayerBundle bundle = OpenBundle(path);
  std::vector<std::string> names =
      layer.empty() ? bundle.layer_names() : std::vector<std::string>{layer};
  for (const std::string& name : names) {
    out << "[" << name << "]\n";
    PrintReport(out, LoadLayer(bundle, name).second);
  }
  return kExitOk;
}

int CmdTasks(const std::string& language, const std::string& registry_path,
             std::ostream& out) {
  const TaskRegistry registry = RegistryFrom(registry_path);
  if (language.empty()) {
    for (const LanguageEntry& lang : registry.languages()) {
      out << lang.code << "\t" << lang.display_name << "\n";
    }
    return kExitOk;
  }
  for (const ProbingTaskSpec& task : registry.ListTasks(language)) {
    out << task.name << "\t" << TaskKindName(task.kind) << "\t" << task.description
        << "\n";
  }
  return kExitOk;
}

struct SynthFlags {
  std::string kind = "single";
  int classes = 2;
  int dim = 4;
  std::size_t train = 200;
  std::size_t dev = 50;
  std::size_t test = 200;
  std::uint64_t seed = 0;
  bool separable = true;
  std::string out;
  std::string language = "tr";
  std::string task = "Case";
  std::string token_prefix = "w";
  std::string embeddings_out;
};

int CmdSynth(const SynthFlags& f, std::ostream& out) {
  SyntheticSpec spec;
  if (f.kind == "single") {
    spec.kind = TaskKind::kSingleToken;
  } else if (f.kind == "pair") {
    spec.kind = TaskKind::kTokenPair;
  } else {
    throw UsageError("--kind must be single or pair");
  }
  spec.classes = f.classes;
  spec.dim = f.dim;
  spec.train = f.train;
  spec.dev = f.dev;
  spec.test = f.test;
  spec.seed = f.seed;
  spec.separable = f.separable;
  spec.task_name = f.task;
  spec.token_prefix = f.token_prefix;
  const auto [dataset, table] = GenerateSynthetic(spec);

  WriteDataset(f.out, f.language, dataset);
  const fs::path emb =
      f.embeddings_out.empty() ? fs::path(f.out) / "embeddings.txt" : fs::path(f.embeddings_out);
  std::ofstream file(emb, std::ios::binary | std::ios::trunc);
  WriteEmbeddingText(table, file, /*with_header=*/true);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + emb.string());
  out << "dataset: " << (fs::path(f.out) / f.language / f.task).string() << "\n"
      << "embeddings: " << emb.string() << "\n";
  return kExitOk;
}

int CmdBundle(const std::string& out_path, const std::string& label,
              const std::vector<std::string>& layer_specs, std::ostream& out) {
  if (layer_specs.empty()) throw UsageError("bundle needs at least one --layer");
  std::vector<std::pair<std::string, EmbeddingTable>> tables;
  for (const std::string& spec : layer_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw UsageError("--layer expects NAME=PATH, got '" + spec + "'");
    }
    tables.emplace_back(spec.substr(0, eq), ParseEmbeddingFile(spec.substr(eq + 1)).first);
  }
  std::vector<BundleLayer> layers;
  for (const auto& [name, table] : tables) layers.push_back({name, &table});
  WriteBundle(out_path, label, layers);
  out << "wrote " << out_path << " with " << layers.size() << " layers\n";
  return kExitOk;
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_root = ".";
  std::string db = "wordprobe-results.sqlite";
  std::string upload_dir = "wordprobe-uploads";
  std::string registry;
  std::string static_dir;
  int workers = 2;
  double quota_gb = 16;
  double max_upload_gb = 8;
};

int CmdServe(const ServeFlags& f, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.data_root = f.data_root;
  config.db_path = f.db;
  config.upload_dir = f.upload_dir;
  if (!f.registry.empty()) config.registry_path = f.registry;
  config.worker_count = f.workers;
  config.upload_quota = static_cast<std::uint64_t>(f.quota_gb * (1ull << 30));
  config.max_upload_bytes = static_cast<std::uint64_t>(f.max_upload_gb * (1ull << 30));

  // Block the stop signals before any thread starts so only the waiter sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGTERM);
  sigaddset(&stop_signals, SIGINT);
  sigset_t previous_mask;
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous_mask);
  struct MaskRestore {
    sigset_t mask;
    ~MaskRestore() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
  } restore{previous_mask};

  ProbeService service(config);
  HttpOptions options;
  options.host = f.host;
  options.port = f.port;
  if (!f.static_dir.empty()) options.static_dir = f.static_dir;
  HttpApi api(service, options);
  int port = 0;
  try {
    port = api.Bind();
  } catch (const Error& e) {
    PrintError(err, e);
    return kExitValidation;
  }
  out << "listening on http://" << f.host << ":" << port << std::endl;

  std::atomic<bool> signaled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    signaled = true;
    api.Stop();
  });
  api.Serve();
  // Wake the waiter if the server stopped for another reason.
  if (!signaled) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  out << "draining running jobs" << std::endl;
  service.Shutdown();
  return kExitOk;
}

int CmdPurge(const std::string& db, double older_than_days, std::ostream& out) {
  if (older_than_days < 0) throw UsageError("--older-than-days must be non-negative");
  ResultStore store(db);
  const auto age = std::chrono::seconds(static_cast<std::int64_t>(older_than_days * 86400));
  out << "purged " << store.PurgeOlderThan(age) << " results\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probe word embeddings with linear diagnostic classifiers", "wordprobe"};
  app.require_subcommand(1);

  ProbeFlags probe;
  CLI::App* probe_cmd = app.add_subcommand("probe", "Train probes and write results");
  probe_cmd->add_option("--embeddings", probe.embeddings, "Embedding table or layer bundle");
  probe_cmd->add_option("--snapshot", probe.snapshots, "LABEL=PATH, repeatable (up to 3)")
      ->take_all();
  probe_cmd->add_option("--layer", probe.layer, "Layer name inside bundles");
  probe_cmd->add_option("--language", probe.language, "Language code")->required();
  probe_cmd->add_option("--tasks", probe.tasks, "Comma separated task names")->required();
  probe_cmd->add_option("--data-root", probe.data_root, "Probing dataset root");
  probe_cmd->add_option("--seed", probe.seed, "Random seed");
  probe_cmd->add_option("--out", probe.out, "Output file (default stdout)");
  probe_cmd->add_option("--format", probe.format, "json or tsv")
      ->check(CLI::IsMember({"json", "tsv"}));
  probe_cmd->add_option("--registry", probe.registry, "Task registry JSON");
  probe_cmd->add_flag("--quiet", probe.quiet, "Do not draw the progress bar");

  std::string validate_path;
  std::string validate_layer;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Report parse statistics");
  validate_cmd->add_option("--embeddings", validate_path, "Embedding table or bundle")
      ->required();
  validate_cmd->add_option("--layer", validate_layer, "Only this bundle layer");

  std::string tasks_language;
  std::string tasks_registry;
  CLI::App* tasks_cmd = app.add_subcommand("tasks", "List languages or their tasks");
  tasks_cmd->add_option("--language", tasks_language, "Language code");
  tasks_cmd->add_option("--registry", tasks_registry, "Task registry JSON");

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic probing fixture");
  synth_cmd->add_option("--kind", synth.kind, "single or pair");
  synth_cmd->add_option("--classes", synth.classes, "Number of classes");
  synth_cmd->add_option("--dim", synth.dim, "Embedding dimension");
  synth_cmd->add_option("--train", synth.train, "Training instances");
  synth_cmd->add_option("--dev", synth.dev, "Development instances");
  synth_cmd->add_option("--test", synth.test, "Test instances");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--separable", synth.separable, "true or false");
  synth_cmd->add_option("--out", synth.out, "Output dataset root")->required();
  synth_cmd->add_option("--language", synth.language, "Language directory");
  synth_cmd->add_option("--task", synth.task, "Task directory");
  synth_cmd->add_option("--token-prefix", synth.token_prefix, "Token prefix");
  synth_cmd->add_option("--embeddings-out", synth.embeddings_out, "Embedding file path");

  std::string bundle_out;
  std::string bundle_label;
  std::vector<std::string> bundle_layers;
  CLI::App* bundle_cmd = app.add_subcommand("bundle", "Pack text tables into a layer bundle");
  bundle_cmd->add_option("--out", bundle_out, "Bundle path")->required();
  bundle_cmd->add_option("--label", bundle_label, "Snapshot label");
  bundle_cmd->add_option("--layer", bundle_layers, "NAME=PATH, repeatable")->take_all();

  ServeFlags serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP job service");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks one)");
  serve_cmd->add_option("--data-root", serve.data_root, "Probing dataset root");
  serve_cmd->add_option("--db", serve.db, "Result database");
  serve_cmd->add_option("--upload-dir", serve.upload_dir, "Temporary upload storage");
  serve_cmd->add_option("--registry", serve.registry, "Task registry JSON");
  serve_cmd->add_option("--static-dir", serve.static_dir, "Front end files to serve");
  serve_cmd->add_option("--workers", serve.workers, "Concurrent jobs")
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--quota-gb", serve.quota_gb, "Upload storage quota");
  serve_cmd->add_option("--max-upload-gb", serve.max_upload_gb, "Single upload cap");

  std::string purge_db = "wordprobe-results.sqlite";
  double purge_days = 30;
  CLI::App* purge_cmd = app.add_subcommand("purge", "Delete stored results by age");
  purge_cmd->add_option("--db", purge_db, "Result database");
  purge_cmd->add_option("--older-than-days", purge_days, "Age threshold in days");

  std::vector<const char*> argv = {"wordprobe"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*probe_cmd) {
      // Runtime failures inside the run are handled by CmdProbe itself.
      return CmdProbe(probe, out, err);
    }
    if (*validate_cmd) return CmdValidate(validate_path, validate_layer, out);
    if (*tasks_cmd) return CmdTasks(tasks_language, tasks_registry, out);
    if (*synth_cmd) return CmdSynth(synth, out);
    if (*bundle_cmd) return CmdBundle(bundle_out, bundle_label, bundle_layers, out);
    if (*serve_cmd) return CmdServe(serve, out, err);
    if (*purge_cmd) return CmdPurge(purge_db, purge_days, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    PrintError(err, e);
    return e.code() == ErrorCode::kIoError || e.code() == ErrorCode::kInternal
               ? kExitRuntime
               : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace wordprobe::cli
