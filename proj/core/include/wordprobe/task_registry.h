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

#ifndef WORDPROBE_TASK_REGISTRY_H_
#define WORDPROBE_TASK_REGISTRY_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wordprobe {

enum class TaskKind {
  kSingleToken,  // one token -> label
  kTokenPair,    // contrastive: concatenated token pair -> label
};

std::string_view TaskKindName(TaskKind kind);
// Throws Error(kUnknownTaskKind).
TaskKind ParseTaskKind(std::string_view name);

struct ProbingTaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kSingleToken;
  std::string description;

  friend bool operator==(const ProbingTaskSpec&, const ProbingTaskSpec&) = default;
};

struct LanguageEntry {
  std::string code;
  std::string display_name;
  std::vector<ProbingTaskSpec> tasks;
};

// Per-language probing menus, kept in config order.
class TaskRegistry {
 public:
  const std::vector<LanguageEntry>& languages() const { return languages_; }

  // Throws Error(kUnknownLanguage).
  const LanguageEntry& language(std::string_view code) const;
  const std::vector<ProbingTaskSpec>& ListTasks(std::string_view code) const {
    return language(code).tasks;
  }
  // Throws Error(kUnknownLanguage) or Error(kUnknownTask).
  const ProbingTaskSpec& FindTask(std::string_view code,
                                  std::string_view task) const;

  nlohmann::ordered_json ToJson() const;

 private:
  friend TaskRegistry LoadRegistry(const nlohmann::ordered_json& config);
  std::vector<LanguageEntry> languages_;
};

// config: {"<code>": {"name": str, "tasks": [{"name": str, "kind": str,
// "description"?: str}]}}. OddFeat and SharedFeat must be token_pair.
TaskRegistry LoadRegistry(const nlohmann::ordered_json& config);
TaskRegistry LoadRegistryFile(const std::filesystem::path& path);

// The shipped 28-language registry.
const TaskRegistry& DefaultRegistry();
std::string_view DefaultRegistryJson();

}  // namespace wordprobe

#endif  // WORDPROBE_TASK_REGISTRY_H_
