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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and problem sizes are pinned below.

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "cli.h"
#include "test_util.h"
#include "wordprobe/classifier.h"
#include "wordprobe/dataset.h"
#include "wordprobe/embedding_table.h"
#include "wordprobe/error.h"
#include "wordprobe/probe_runner.h"
#include "wordprobe/probe_service.h"
#include "wordprobe/random.h"
#include "wordprobe/synthetic.h"

namespace wordprobe {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Separable-oracle equivalence.
constexpr double kOracleMinAccuracy = 0.99;
constexpr double kOracleMaxGap = 0.01;
constexpr double kOracleMaxSecondsPerTask = 10.0;
// Null-signal sanity.
constexpr std::size_t kNullTestRows = 2000;
constexpr double kNullBand = 0.10;
// Gradient correctness.
constexpr int kGradientTrials = 100;
constexpr double kGradientMaxRelError = 1e-4;
// Training recipe.
constexpr int kExpectedStopEpochs = 6;  // 1 + patience
constexpr int kMaxEpochs = 20;
constexpr double kClipBound = 0.5;
// Parser robustness.
constexpr int kRoundTripTables = 1000;
constexpr std::uint64_t kBigFileBytes = std::uint64_t{1} << 30;
constexpr int kBigFileDim = 100;
constexpr double kPeakMemoryFactor = 2.0;
// End-to-end run.
constexpr int kE2EDim = 300;
constexpr std::size_t kE2ETokensPerTable = 10000;
constexpr double kE2EMaxSeconds = 180.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

// ---------------------------------------------------------------------------
// Peak-memory probe for a 1 GiB text table, run in a child process so the
// measurement starts from a small resident set.

std::size_t VmHwmKiB() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stoull(line.substr(6));
  }
  return 0;
}

void WriteBigTable(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Rng rng(2024);
  std::string line;
  char num[32];
  std::uint64_t written = 0;
  for (std::size_t i = 0; written < kBigFileBytes; ++i) {
    line = "tok" + std::to_string(i);
    for (int k = 0; k < kBigFileDim; ++k) {
      const float v = static_cast<float>(rng.Normal() * 0.3);
      auto [end, ec] = std::to_chars(num, num + sizeof(num), v);
      line.push_back(' ');
      line.append(num, end);
    }
    line.push_back('\n');
    out << line;
    written += line.size();
  }
}

struct MemoryProbe {
  bool ok = false;
  std::size_t accepted = 0;
  std::uint64_t file_bytes = 0;
  double table_mib = 0;
  double peak_delta_mib = 0;
  double seconds = 0;
  std::string error;
};

MemoryProbe MeasureBigParse(const fs::path& dir) {
  MemoryProbe probe;
  const fs::path path = dir / "big.txt";
  WriteBigTable(path);
  probe.file_bytes = fs::file_size(path);

  int fds[2];
  if (pipe(fds) != 0) {
    probe.error = "pipe failed";
    return probe;
  }
  const pid_t pid = fork();
  if (pid == 0) {
    close(fds[0]);
    std::ostringstream report;
    try {
      const std::size_t before = VmHwmKiB();
      const auto start = Clock::now();
      auto [table, parsed] = ParseEmbeddingFile(path);
      const double secs = Seconds(start);
      const std::size_t after = VmHwmKiB();
      report << parsed.accepted << " " << table.MemoryBytes() << " "
             << (after - before) * 1024.0 << " " << secs;
    } catch (const std::exception& e) {
      report << "error " << e.what();
    }
    const std::string text = report.str();
    const ssize_t n = write(fds[1], text.data(), text.size());
    (void)n;
    _exit(0);
  }
  close(fds[1]);
  std::string text;
  char buf[512];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof(buf))) > 0) text.append(buf, n);
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  fs::remove(path);

  std::istringstream in(text);
  double table_bytes = 0, delta_bytes = 0;
  if (!(in >> probe.accepted >> table_bytes >> delta_bytes >> probe.seconds)) {
    probe.error = text.empty() ? "child produced no report" : text;
    return probe;
  }
  probe.table_mib = table_bytes / (1 << 20);
  probe.peak_delta_mib = delta_bytes / (1 << 20);
  probe.ok = true;
  return probe;
}

// ---------------------------------------------------------------------------

SyntheticSpec Spec(int classes, int dim, bool separable, std::uint64_t seed,
                   TaskKind kind = TaskKind::kSingleToken) {
  SyntheticSpec spec;
  spec.classes = classes;
  spec.dim = dim;
  spec.separable = separable;
  spec.seed = seed;
  spec.kind = kind;
  return spec;
}

Outcome SeparableOracle() {
  Outcome o;
  double min_acc = 1.0, max_gap = 0.0, max_secs = 0.0;
  int runs = 0;
  for (TaskKind kind : {TaskKind::kSingleToken, TaskKind::kTokenPair}) {
    for (int k : {2, 5}) {
      for (int d : {4, 50}) {
        auto [ds, table] = GenerateSynthetic(Spec(k, d, true, 1000 + 10 * k + d, kind));
        const auto start = Clock::now();
        TrainConfig config;
        config.seed = 7;
        auto [model, report] = Train(table, ds, config);
        const double acc = Evaluate(model, table, kind, ds.test).accuracy;
        const double secs = Seconds(start);
        const double oracle = testing::NearestCentroidAccuracy(ds, table);
        min_acc = std::min(min_acc, acc);
        max_gap = std::max(max_gap, std::abs(acc - oracle));
        max_secs = std::max(max_secs, secs);
        o.pass &= acc >= kOracleMinAccuracy && oracle >= kOracleMinAccuracy &&
                  std::abs(acc - oracle) <= kOracleMaxGap && secs < kOracleMaxSecondsPerTask;
        ++runs;
      }
    }
  }
  o.detail = Fmt("%.0f runs (K in {2,5}, d in {4,50}, single+pair); min accuracy %.4f (>= 0.99); "
                 "max |probe - centroid oracle| %.4f (<= 0.01); max %.3f s per task (< 10 s)",
                 runs, min_acc, max_gap, max_secs);
  return o;
}

Outcome NullSignal() {
  Outcome o;
  double worst = 0.0;
  int runs = 0;
  for (int k : {2, 5}) {
    for (int d : {4, 50}) {
      SyntheticSpec spec = Spec(k, d, false, 500 + 10 * k + d);
      spec.test = kNullTestRows;
      auto [ds, table] = GenerateSynthetic(spec);
      TrainConfig config;
      config.seed = 11;
      auto [model, report] = Train(table, ds, config);
      const double acc = Evaluate(model, table, TaskKind::kSingleToken, ds.test).accuracy;
      const double gap = std::abs(acc - MajorityBaseline(ds));
      worst = std::max(worst, gap);
      o.pass &= gap <= kNullBand;
      ++runs;
    }
  }
  o.detail = Fmt("%.0f runs with n_test = %.0f; max |accuracy - majority baseline| %.4f (<= 0.10)",
                 runs, static_cast<double>(kNullTestRows), worst);
  return o;
}

Outcome GradientCorrectness() {
  const double err = testing::MaxGradientRelativeError(/*seed=*/20240, kGradientTrials);
  return {err <= kGradientMaxRelError,
          Fmt("%.0f random trials, central differences (h = 1e-5, denominator floor 1e-5); max relative error %.3g "
              "(<= 1e-4)",
              kGradientTrials, err)};
}

Outcome TrainingRecipe() {
  Outcome o;
  // Constant dev accuracy across several seeds.
  int stop_min = 1 << 30, stop_max = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto [ds, table] = testing::ConstantDevFixture();
    TrainConfig config;
    config.seed = seed;
    const int epochs = Train(table, ds, config).second.epochs_run;
    stop_min = std::min(stop_min, epochs);
    stop_max = std::max(stop_max, epochs);
  }
  o.pass &= stop_min == kExpectedStopEpochs && stop_max == kExpectedStopEpochs;

  // Epoch cap and clipping, over separable, noisy and never-stopping runs.
  int most_epochs = 0;
  double largest = 0.0;
  long updates = 0;
  for (int variant = 0; variant < 6; ++variant) {
    auto [ds, table] = GenerateSynthetic(Spec(2 + variant % 3, 8, variant % 2 == 0, 40 + variant));
    TrainConfig config;
    config.seed = variant;
    config.learning_rate = variant < 3 ? 0.5 : 5.0;
    if (variant == 5) config.patience = 1000;
    config.on_clipped_gradients = [&](const Gradients& g) {
      ++updates;
      for (double v : g.weights) largest = std::max(largest, std::abs(v));
      for (double v : g.bias) largest = std::max(largest, std::abs(v));
    };
    most_epochs = std::max(most_epochs, Train(table, ds, config).second.epochs_run);
  }
  o.pass &= most_epochs <= kMaxEpochs && largest <= kClipBound && updates > 0;
  o.detail = Fmt("constant dev accuracy stops after %.0f..%.0f epochs (== 6); max epochs_run %.0f "
                 "(<= 20); max |clipped gradient component| %.4f (<= 0.5)",
                 stop_min, stop_max, most_epochs, largest);
  o.detail += " over " + std::to_string(updates) + " instrumented updates";
  return o;
}

Outcome ParserRobustness(const MemoryProbe& memory) {
  Outcome o;
  // Known drop accounting.
  std::istringstream fixture(
      "alpha 0.1 0.2 0.3\n"
      "beta 0.4 0.5\n"
      "gamma 0.1 oops 0.3\n"
      "alpha 0.7 0.8 0.9\n"
      "delta 1 2 3\n");
  const ParseReport drops = ParseEmbeddingText(fixture).second;
  o.pass &= drops.dropped_malformed == 2 && drops.dropped_duplicate == 1 && drops.accepted == 2;

  // Round trip on random tables.
  Rng rng(99);
  int identical = 0;
  for (int t = 0; t < kRoundTripTables; ++t) {
    const int dim = 1 + static_cast<int>(rng.Below(16));
    const int rows = 1 + static_cast<int>(rng.Below(50));
    EmbeddingTable table(dim);
    std::vector<float> v(dim);
    for (int r = 0; r < rows; ++r) {
      for (float& x : v) x = static_cast<float>(rng.Normal() * std::pow(10.0, rng.Uniform(-6, 6)));
      table.Insert("t" + std::to_string(r) + "_" + std::to_string(rng.Below(1000)), v);
    }
    std::stringstream text;
    WriteEmbeddingText(table, text, t % 2 == 0);
    identical += ParseEmbeddingText(text).first == table;
  }
  o.pass &= identical == kRoundTripTables;

  const bool memory_ok =
      memory.ok && memory.peak_delta_mib < kPeakMemoryFactor * memory.table_mib;
  o.pass &= memory_ok;
  std::ostringstream d;
  d << "drops malformed=" << drops.dropped_malformed << " duplicate=" << drops.dropped_duplicate
    << " (expected 2, 1); round trip identical " << identical << "/" << kRoundTripTables << "; ";
  if (memory.ok) {
    d << Fmt("%.0f MiB file, %.0f rows parsed in %.1f s, peak RSS growth %.0f MiB vs table",
             memory.file_bytes / double(1 << 20), static_cast<double>(memory.accepted),
             memory.seconds, memory.peak_delta_mib)
      << Fmt(" %.0f MiB (ratio %.2f < 2)", memory.table_mib,
             memory.peak_delta_mib / memory.table_mib);
  } else {
    d << "large-file probe failed: " << memory.error;
  }
  o.detail = d.str();
  return o;
}

// ---------------------------------------------------------------------------
// Fixtures shared by the pipeline-level criteria.

struct PipelineFixture {
  fs::path data_root;
  std::vector<fs::path> snapshots;  // text tables
  std::vector<std::string> tasks;
  std::size_t tokens = 0;
};

// Writes three Turkish tasks (two single-token, one pair) whose tokens form
// one table, plus `extra_snapshots` perturbed copies of that table.
PipelineFixture BuildPipelineFixture(const fs::path& dir, int dim, std::size_t scale,
                                     int extra_snapshots) {
  PipelineFixture f;
  f.data_root = dir / "data";
  struct TaskDef {
    const char* name;
    TaskKind kind;
    int classes;
    std::size_t train, dev, test;
    const char* prefix;
  };
  const TaskDef defs[] = {
      {"Case", TaskKind::kSingleToken, 3, 4 * scale, scale, 2 * scale, "c"},
      {"Number", TaskKind::kSingleToken, 2, 4 * scale, scale, 2 * scale, "n"},
      {"OddFeat", TaskKind::kTokenPair, 2, 16 * scale / 10, 4 * scale / 10, scale, "p"},
  };
  EmbeddingTable merged(dim, "base");
  std::uint64_t seed = 300;
  for (const TaskDef& t : defs) {
    SyntheticSpec spec;
    spec.kind = t.kind;
    spec.classes = t.classes;
    spec.dim = dim;
    spec.train = t.train;
    spec.dev = t.dev;
    spec.test = t.test;
    spec.seed = seed++;
    spec.task_name = t.name;
    spec.token_prefix = t.prefix;
    auto [ds, table] = GenerateSynthetic(spec);
    WriteDataset(f.data_root, "tr", ds);
    for (std::size_t i = 0; i < table.size(); ++i) merged.Insert(table.token(i), table.row(i));
    f.tasks.push_back(t.name);
  }
  f.tokens = merged.size();

  Rng rng(77);
  for (int s = 0; s <= extra_snapshots; ++s) {
    EmbeddingTable snap(dim);
    std::vector<float> v(dim);
    for (std::size_t i = 0; i < merged.size(); ++i) {
      const auto row = merged.row(i);
      for (int k = 0; k < dim; ++k) {
        v[k] = row[k] + (s == 0 ? 0.0f : static_cast<float>(0.05 * rng.Normal()));
      }
      snap.Insert(merged.token(i), v);
    }
    const fs::path path = dir / ("epoch" + std::to_string(s + 1) + ".txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    WriteEmbeddingText(snap, out, true);
    f.snapshots.push_back(path);
  }
  return f;
}

ServiceConfig ServiceAt(const fs::path& dir, const fs::path& data_root) {
  ServiceConfig config;
  config.data_root = data_root;
  config.db_path = dir / "results.sqlite";
  config.upload_dir = dir / "uploads";
  config.worker_count = 2;
  return config;
}

Upload UploadFile(ProbeService& service, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return service.CreateUpload(in, path.filename().string());
}

std::string StripCreatedAt(nlohmann::ordered_json result) {
  result.erase("created_at");
  return result.dump();
}

Outcome Determinism(const fs::path& dir) {
  Outcome o;
  const PipelineFixture f = BuildPipelineFixture(dir, 24, 100, 1);
  std::vector<std::string> args = {"probe", "--language", "tr", "--tasks", "Case,Number,OddFeat",
                                   "--data-root", f.data_root.string(), "--seed", "13",
                                   "--quiet"};
  for (std::size_t s = 0; s < f.snapshots.size(); ++s) {
    args.push_back("--snapshot");
    args.push_back("ep" + std::to_string(s + 1) + "=" + f.snapshots[s].string());
  }
  std::vector<std::string> cli_results;
  for (const char* out : {"cli1.json", "cli2.json"}) {
    std::vector<std::string> run = args;
    run.push_back("--out");
    run.push_back((dir / out).string());
    std::ostringstream sink_out, sink_err;
    if (cli::RunCli(run, sink_out, sink_err) != 0) {
      return {false, "CLI probe failed: " + sink_err.str()};
    }
    auto doc = nlohmann::ordered_json::parse(testing::ReadFile(dir / out));
    cli_results.push_back(StripCreatedAt(doc["result"]));
  }

  ProbeService service(ServiceAt(dir, f.data_root));
  JobRequest request;
  request.language = "tr";
  request.tasks = f.tasks;
  request.seed = 13;
  for (std::size_t s = 0; s < f.snapshots.size(); ++s) {
    request.snapshots.push_back(
        {"ep" + std::to_string(s + 1), UploadFile(service, f.snapshots[s]).id});
  }
  const JobTicket ticket = service.CreateJob(request);
  const JobStatus status = service.WaitForJob(ticket.job_id);
  if (status.state != JobState::kDone) {
    return {false, "service job failed: " + status.error_message};
  }
  const std::string service_result =
      StripCreatedAt(service.GetResult(ticket.public_token)["result"]);

  o.pass = cli_results[0] == cli_results[1] && cli_results[0] == service_result;
  o.detail = "3 tasks x 2 snapshots, seed 13: CLI run 1 vs run 2 " +
             std::string(cli_results[0] == cli_results[1] ? "identical" : "DIFFERENT") +
             "; CLI vs service " +
             (cli_results[0] == service_result ? "identical" : "DIFFERENT") + " (" +
             std::to_string(service_result.size()) + " bytes, created_at excluded)";
  return o;
}

Outcome JobLifecycle(const fs::path& dir) {
  Outcome o;
  const PipelineFixture f = BuildPipelineFixture(dir, 12, 50, 1);
  std::mutex mu;
  std::map<std::string, std::vector<JobStatus>> history;
  ServiceConfig config = ServiceAt(dir, f.data_root);
  config.observer = [&](const JobStatus& s) {
    std::lock_guard<std::mutex> lock(mu);
    history[s.job_id].push_back(s);
  };

  struct Submitted {
    JobTicket ticket;
    std::vector<fs::path> files;
    bool expect_done;
  };
  std::vector<Submitted> jobs;
  std::map<std::string, nlohmann::ordered_json> results;
  {
    ProbeService service(config);
    auto submit = [&](std::vector<std::string> tasks, int snapshots, bool shared,
                      bool expect_done) {
      JobRequest request;
      request.language = "tr";
      request.tasks = std::move(tasks);
      Submitted sub;
      std::optional<Upload> first;
      for (int s = 0; s < snapshots; ++s) {
        Upload up = shared && first ? *first : UploadFile(service, f.snapshots[s]);
        if (!first) first = up;
        request.snapshots.push_back({"s" + std::to_string(s), up.id});
        sub.files.push_back(up.stored_at);
      }
      if (shared) request.snapshots.resize(1);
      sub.ticket = service.CreateJob(request);
      sub.expect_done = expect_done;
      jobs.push_back(sub);
    };
    submit({"Case"}, 1, false, true);
    submit({"Case", "OddFeat"}, 2, false, true);
    submit({"Number"}, 2, false, true);
    submit({"Tense"}, 1, false, false);  // no dataset on disk
    submit({"Number", "Case"}, 1, false, true);

    for (const Submitted& s : jobs) {
      const JobStatus st = service.WaitForJob(s.ticket.job_id);
      o.pass &= (st.state == JobState::kDone) == s.expect_done && IsTerminal(st.state);
      results[s.ticket.public_token] = service.GetResult(s.ticket.public_token);
    }
  }

  int backward = 0, shrinking = 0, wrong_loading = 0, leftover_files = 0;
  for (const Submitted& s : jobs) {
    const auto& h = history[s.ticket.job_id];
    int loading_updates = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i > 0 && h[i].state < h[i - 1].state) ++backward;
      if (i > 0 && h[i].fraction < h[i - 1].fraction) ++shrinking;
      if (h[i].loading_step > 0) ++loading_updates;
    }
    if (h.empty() || h.front().state != JobState::kQueued) ++backward;
    if (s.expect_done && loading_updates != kLoadingSteps) ++wrong_loading;
    for (const fs::path& p : s.files) leftover_files += fs::exists(p);
  }

  // Restart on the same database.
  int restored = 0;
  {
    ServiceConfig again = ServiceAt(dir, f.data_root);
    ProbeService restarted(again);
    for (const auto& [token, before] : results) {
      restored += restarted.GetResult(token) == before;
    }
  }
  o.pass &= backward == 0 && shrinking == 0 && wrong_loading == 0 && leftover_files == 0 &&
            restored == static_cast<int>(results.size());
  std::ostringstream d;
  d << jobs.size() << " jobs (1 failing); backward transitions " << backward
    << ", shrinking fractions " << shrinking << ", jobs without exactly " << kLoadingSteps
    << " loading updates " << wrong_loading << ", upload files left after terminal "
    << leftover_files << ", results identical after restart " << restored << "/"
    << results.size();
  o.detail = d.str();
  return o;
}

Outcome EndToEnd(const fs::path& dir) {
  Outcome o;
  // Scale 500 gives 3500 + 3500 + 1500 * 2 = 10000 tokens per table.
  const PipelineFixture f = BuildPipelineFixture(dir, kE2EDim, 500, 1);
  const auto start = Clock::now();
  ProbeService service(ServiceAt(dir, f.data_root));
  JobRequest request;
  request.language = "tr";
  request.tasks = f.tasks;
  for (std::size_t s = 0; s < f.snapshots.size(); ++s) {
    request.snapshots.push_back(
        {"epoch" + std::to_string(s + 1), UploadFile(service, f.snapshots[s]).id});
  }
  const JobTicket ticket = service.CreateJob(request);
  const JobStatus status = service.WaitForJob(ticket.job_id, std::chrono::minutes(30));
  const double secs = Seconds(start);
  if (status.state != JobState::kDone) {
    return {false, "job ended as " + std::string(JobStateName(status.state)) + ": " +
                       status.error_message};
  }
  const auto doc = service.GetResult(ticket.public_token);
  double min_acc = 1.0;
  std::size_t cells = 0;
  for (const auto& cell : doc["result"]["cells"]) {
    min_acc = std::min(min_acc, cell["test_accuracy"].get<double>());
    ++cells;
  }
  o.pass = secs < kE2EMaxSeconds && f.tokens == kE2ETokensPerTable && cells == 6;
  o.detail = Fmt("3 tasks x 2 snapshots, dim %.0f, %.0f tokens per table: %.1f s end to end "
                 "(< 180 s), min cell accuracy %.4f",
                 kE2EDim, static_cast<double>(f.tokens), secs, min_acc);
  return o;
}

}  // namespace
}  // namespace wordprobe

int main() {
  using namespace wordprobe;
  testing::TempDir scratch;
  // Runs first, before any worker thread exists, so the child forks cleanly.
  const MemoryProbe memory = MeasureBigParse(scratch.path());

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  auto sub = [&](const char* name) {
    fs::create_directories(scratch / name);
    return scratch / name;
  };
  const Criterion criteria[] = {
      {"separable_oracle_equivalence", SeparableOracle},
      {"null_signal_sanity", NullSignal},
      {"gradient_correctness", GradientCorrectness},
      {"training_recipe_conformance", TrainingRecipe},
      {"parser_robustness", [&] { return ParserRobustness(memory); }},
      {"determinism_cli_vs_service", [&] { return Determinism(sub("determinism")); }},
      {"job_lifecycle", [&] { return JobLifecycle(sub("lifecycle")); }},
      {"end_to_end_desk_scale", [&] { return EndToEnd(sub("e2e")); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << c.name << ": " << outcome.detail
              << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : std::to_string(failures) + " acceptance criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
