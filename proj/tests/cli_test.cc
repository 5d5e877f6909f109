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

#include <gtest/gtest.h>
#include <httplib.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <regex>
#include <sstream>
#include <thread>

#include "test_util.h"
#include "wordprobe/dataset.h"
#include "wordprobe/result_store.h"

namespace wordprobe::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  // A separable single-token fixture for Turkish Case, written by `synth`.
  void Synth(const std::vector<std::string>& extra = {}) {
    std::vector<std::string> args = {"synth", "--out", data(), "--dim", "6", "--classes", "3",
                                     "--seed", "4"};
    args.insert(args.end(), extra.begin(), extra.end());
    const CliRun r = Cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
  }

  std::string data() const { return (dir_ / "data").string(); }
  std::string emb() const { return (dir_ / "data" / "embeddings.txt").string(); }
  std::string Path(const char* name) const { return (dir_ / name).string(); }

  testing::TempDir dir_;
};

TEST_F(CliTest, TasksPerLanguage) {
  CliRun de = Cli({"tasks", "--language", "de"});
  EXPECT_EQ(de.code, 0);
  EXPECT_NE(de.out.find("Gender\tsingle_token"), std::string::npos);
  CliRun tr = Cli({"tasks", "--language", "tr"});
  EXPECT_NE(tr.out.find("Case\t"), std::string::npos);
  CliRun xx = Cli({"tasks", "--language", "xx"});
  EXPECT_EQ(xx.code, kExitValidation);
  EXPECT_NE(xx.err.find("UnknownLanguage"), std::string::npos);
  CliRun all = Cli({"tasks"});
  EXPECT_NE(all.out.find("qu\tQuechua"), std::string::npos);
}

TEST_F(CliTest, ValidateReportsDrops) {
  testing::WriteFile(dir_ / "clean.txt", "a 1 2\nb 3 4\n");
  CliRun clean = Cli({"validate", "--embeddings", Path("clean.txt")});
  EXPECT_EQ(clean.code, 0);
  EXPECT_EQ(clean.out,
            "accepted: 2\ndropped_malformed: 0\ndropped_duplicate: 0\ndetected_dim: 2\n");

  testing::WriteFile(dir_ / "bad.txt", "a 1 2\nb 3\nc x y\nd 5 6\n");
  CliRun bad = Cli({"validate", "--embeddings", Path("bad.txt")});
  EXPECT_EQ(bad.code, 0);
  EXPECT_NE(bad.out.find("dropped_malformed: 2"), std::string::npos);

  testing::WriteFile(dir_ / "empty.txt", "");
  CliRun empty = Cli({"validate", "--embeddings", Path("empty.txt")});
  EXPECT_EQ(empty.code, kExitValidation);
}

TEST_F(CliTest, SynthIsLoadableAndDeterministic) {
  Synth();
  const ProbingTaskSpec task{"Case", TaskKind::kSingleToken, ""};
  const ProbingDataset ds = LoadDataset(data(), "tr", task);
  EXPECT_EQ(ds.train.size(), 200u);
  EXPECT_EQ(ds.label_set.size(), 3u);
  const std::string first = testing::ReadFile(emb());
  const std::string train = testing::ReadFile(dir_ / "data" / "tr" / "Case" / "train.tsv");
  Synth();
  EXPECT_EQ(testing::ReadFile(emb()), first);
  EXPECT_EQ(testing::ReadFile(dir_ / "data" / "tr" / "Case" / "train.tsv"), train);

  CliRun bad = Cli({"synth", "--out", data(), "--classes", "1"});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("InvalidSpec"), std::string::npos);
}

TEST_F(CliTest, ProbeSeparableFixture) {
  Synth();
  CliRun r = Cli({"probe", "--embeddings", emb(), "--language", "tr", "--tasks", "Case",
               "--data-root", data(), "--out", Path("result.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("100% done"), std::string::npos);
  const auto doc = nlohmann::json::parse(testing::ReadFile(dir_ / "result.json"));
  EXPECT_GE(doc["series"][0]["values"][0].get<double>(), 0.99);
  EXPECT_EQ(doc["series"][0]["label"], "embeddings");
  EXPECT_EQ(doc["result"]["seed"], 13);
}

TEST_F(CliTest, ProbeIsRepeatableModuloTimestamp) {
  Synth();
  auto run = [&](const char* out) {
    CliRun r = Cli({"probe", "--embeddings", emb(), "--language", "tr", "--tasks", "Case",
                 "--data-root", data(), "--out", Path(out), "--quiet"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
    const std::regex stamp("\"created_at\": \"[^\"]*\"");
    return std::regex_replace(testing::ReadFile(dir_ / out), stamp, "");
  };
  EXPECT_EQ(run("a.json"), run("b.json"));
}

TEST_F(CliTest, ProbeValidationErrors) {
  Synth();
  std::vector<std::string> args = {"probe", "--language", "tr", "--tasks", "Case",
                                   "--data-root", data()};
  for (int i = 0; i < 4; ++i) {
    args.push_back("--snapshot");
    args.push_back("s" + std::to_string(i) + "=" + emb());
  }
  CliRun many = Cli(args);
  EXPECT_EQ(many.code, kExitValidation);
  EXPECT_NE(many.err.find("TooManySnapshots"), std::string::npos);

  CliRun both = Cli({"probe", "--language", "tr", "--tasks", "Case", "--embeddings", emb(),
                  "--snapshot", "a=" + emb()});
  EXPECT_EQ(both.code, kExitValidation);
  CliRun no_flag = Cli({"probe", "--embeddings", emb(), "--tasks", "Case"});
  EXPECT_EQ(no_flag.code, kExitValidation);
  CliRun format = Cli({"probe", "--embeddings", emb(), "--language", "tr", "--tasks", "Case",
                    "--format", "xml"});
  EXPECT_EQ(format.code, kExitValidation);
}

TEST_F(CliTest, ProbeRuntimeFailure) {
  Synth();
  CliRun r = Cli({"probe", "--embeddings", emb(), "--language", "tr", "--tasks", "Tense",
               "--data-root", data(), "--quiet"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("MissingSplit"), std::string::npos);
}

TEST_F(CliTest, BundleThenProbeLayersAsTsv) {
  Synth();
  CliRun b = Cli({"bundle", "--out", Path("b.zip"), "--label", "ep5", "--layer", "e0=" + emb(),
               "--layer", "e1=" + emb()});
  ASSERT_EQ(b.code, 0) << b.err;
  CliRun v = Cli({"validate", "--embeddings", Path("b.zip")});
  EXPECT_NE(v.out.find("[e1]\naccepted: 450"), std::string::npos) << v.out;

  CliRun r = Cli({"probe", "--snapshot", "first=" + Path("b.zip"), "--layer", "e1",
               "--language", "tr", "--tasks", "Case", "--data-root", data(), "--format", "tsv",
               "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "task\tfirst accuracy\tfirst loss");

  CliRun missing_layer = Cli({"probe", "--embeddings", Path("b.zip"), "--language", "tr",
                           "--tasks", "Case", "--data-root", data()});
  EXPECT_EQ(missing_layer.code, kExitValidation);
  EXPECT_NE(missing_layer.err.find("LayerRequiredForBundle"), std::string::npos);
}

TEST_F(CliTest, PurgeRemovesOldResults) {
  {
    ResultStore store(dir_ / "r.sqlite");
    StoredResult r;
    r.public_token = "t";
    r.state = "done";
    store.Put(r);
  }
  CliRun keep = Cli({"purge", "--db", Path("r.sqlite"), "--older-than-days", "1"});
  EXPECT_EQ(keep.out, "purged 0 results\n");
  CliRun negative = Cli({"purge", "--db", Path("r.sqlite"), "--older-than-days", "-1"});
  EXPECT_EQ(negative.code, kExitValidation);
}

TEST_F(CliTest, ServePortConflictExitsWithValidationCode) {
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  CliRun r = Cli({"serve", "--port", std::to_string(port), "--db", Path("s.sqlite"),
               "--upload-dir", Path("up")});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("IoError"), std::string::npos);
}

TEST_F(CliTest, ServeAnswersAndDrainsOnSigterm) {
  Synth();
  const std::string log = Path("serve.log");
  const pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    FILE* f = freopen(log.c_str(), "w", stdout);
    (void)f;
    execl(WORDPROBE_CLI_BINARY, WORDPROBE_CLI_BINARY, "serve", "--port", "0", "--data-root",
          data().c_str(), "--db", Path("s.sqlite").c_str(), "--upload-dir",
          Path("up").c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  int port = 0;
  const std::regex listening("listening on http://[^:]+:(\\d+)");
  for (int i = 0; i < 200 && port == 0; ++i) {
    std::smatch m;
    const std::string text = testing::ReadFile(log);
    if (std::regex_search(text, m, listening)) port = std::stoi(m[1]);
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  ASSERT_GT(port, 0);

  httplib::Client client("127.0.0.1", port);
  auto langs = client.Get("/api/languages");
  ASSERT_TRUE(langs);
  EXPECT_EQ(langs->status, 200);

  // A job in flight when the signal arrives still completes.
  auto up = client.Post("/api/uploads?name=e.txt", testing::ReadFile(emb()),
                        "application/octet-stream");
  ASSERT_TRUE(up);
  const auto upload = nlohmann::json::parse(up->body);
  nlohmann::json job = {{"language", "tr"},
                        {"tasks", {"Case"}},
                        {"snapshots", {{{"upload_id", upload["id"]}}}}};
  auto created = client.Post("/api/jobs", job.dump(), "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const auto ticket = nlohmann::json::parse(created->body);
  const std::string token = ticket["public_token"];
  for (int i = 0; i < 200; ++i) {
    auto progress = client.Get("/api/jobs/" + ticket["job_id"].get<std::string>());
    ASSERT_TRUE(progress);
    if (nlohmann::json::parse(progress->body)["state"] != "queued") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NE(testing::ReadFile(log).find("draining"), std::string::npos);
  ResultStore store(Path("s.sqlite"));
  ASSERT_TRUE(store.Get(token).has_value());
  EXPECT_EQ(store.Get(token)->state, "done");
}

}  // namespace
}  // namespace wordprobe::cli
