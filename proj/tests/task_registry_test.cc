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

#include "wordprobe/task_registry.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "test_util.h"
#include "wordprobe/error.h"

namespace wordprobe {
namespace {

using nlohmann::ordered_json;

bool HasTask(const TaskRegistry& registry, std::string_view code, std::string_view task) {
  const auto& tasks = registry.ListTasks(code);
  return std::any_of(tasks.begin(), tasks.end(),
                     [&](const ProbingTaskSpec& t) { return t.name == task; });
}

ErrorCode LoadError(const char* text) {
  try {
    LoadRegistry(ordered_json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(TaskRegistryTest, DefaultMenusVaryByLanguage) {
  const TaskRegistry& registry = DefaultRegistry();
  EXPECT_EQ(registry.languages().size(), 28u);
  EXPECT_TRUE(HasTask(registry, "de", "Gender"));
  EXPECT_TRUE(HasTask(registry, "tr", "Case"));
  EXPECT_FALSE(HasTask(registry, "en", "Gender"));
  EXPECT_FALSE(HasTask(registry, "vi", "Case"));
  EXPECT_EQ(registry.language("de").display_name, "German");
}

TEST(TaskRegistryTest, DefaultRegistryUsesEveryTaskName) {
  std::set<std::string> names;
  for (const LanguageEntry& lang : DefaultRegistry().languages()) {
    for (const ProbingTaskSpec& t : lang.tasks) names.insert(t.name);
  }
  EXPECT_EQ(names.size(), 16u);
}

TEST(TaskRegistryTest, ContrastiveTasksArePairs) {
  const TaskRegistry& registry = DefaultRegistry();
  EXPECT_EQ(registry.FindTask("de", "OddFeat").kind, TaskKind::kTokenPair);
  EXPECT_EQ(registry.FindTask("de", "SharedFeat").kind, TaskKind::kTokenPair);
  EXPECT_EQ(registry.FindTask("de", "Case").kind, TaskKind::kSingleToken);
  EXPECT_FALSE(registry.FindTask("de", "Case").description.empty());
}

TEST(TaskRegistryTest, UnknownLookups) {
  const TaskRegistry& registry = DefaultRegistry();
  try {
    registry.ListTasks("xx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLanguage);
  }
  try {
    registry.FindTask("en", "Gender");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTask);
  }
}

TEST(TaskRegistryTest, TaskKindNames) {
  EXPECT_EQ(TaskKindName(TaskKind::kTokenPair), "token_pair");
  EXPECT_EQ(ParseTaskKind("single_token"), TaskKind::kSingleToken);
  try {
    ParseTaskKind("triple");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTaskKind);
  }
}

TEST(TaskRegistryTest, LoadErrors) {
  EXPECT_EQ(LoadError("{}"), ErrorCode::kEmptyRegistry);
  EXPECT_EQ(LoadError(R"({"xx": {"tasks": []}})"), ErrorCode::kEmptyRegistry);
  EXPECT_EQ(LoadError("[]"), ErrorCode::kInvalidRegistry);
  EXPECT_EQ(LoadError(R"({"xx": {"tasks": [{"name": "A"}, {"name": "A"}]}})"),
            ErrorCode::kInvalidRegistry);
  EXPECT_EQ(LoadError(R"({"xx": {"tasks": [{"name": "OddFeat"}]}})"),
            ErrorCode::kInvalidRegistry);
  EXPECT_EQ(LoadError(R"({"xx": {"tasks": [{"name": "A", "kind": "bag"}]}})"),
            ErrorCode::kUnknownTaskKind);
}

TEST(TaskRegistryTest, CustomRegistryRoundTripsThroughJson) {
  const TaskRegistry registry = LoadRegistry(ordered_json::parse(R"({
    "zz": {"name": "Zed", "tasks": [{"name": "Blip", "description": "made up"},
                                    {"name": "SharedFeat", "kind": "token_pair"}]}
  })"));
  EXPECT_EQ(registry.FindTask("zz", "Blip").description, "made up");
  const TaskRegistry again = LoadRegistry(registry.ToJson());
  EXPECT_EQ(again.ListTasks("zz"), registry.ListTasks("zz"));
  EXPECT_EQ(again.language("zz").display_name, "Zed");
}

TEST(TaskRegistryTest, LoadFromFile) {
  testing::TempDir dir;
  testing::WriteFile(dir / "r.json", R"({"zz": {"tasks": [{"name": "Blip"}]}})");
  EXPECT_EQ(LoadRegistryFile(dir / "r.json").language("zz").display_name, "zz");
  try {
    LoadRegistryFile(dir / "absent.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace wordprobe
