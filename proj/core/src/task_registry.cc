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

#include <fstream>
#include <map>
#include <set>

#include "wordprobe/error.h"

namespace wordprobe {
namespace internal {
extern const std::string_view kDefaultRegistryJson;
}  // namespace internal

using nlohmann::ordered_json;

namespace {

const std::map<std::string, std::string, std::less<>>& KnownDescriptions() {
  static const std::map<std::string, std::string, std::less<>> kDescriptions = {
      {"Case", "grammatical case of a noun or adjective"},
      {"Degree", "degree of comparison of an adjective"},
      {"Gender", "grammatical gender"},
      {"Mood", "verbal mood"},
      {"Number", "grammatical number"},
      {"Person", "grammatical person of a verb or pronoun"},
      {"Polarity", "positive or negative polarity"},
      {"Possession", "possessor marking"},
      {"Tense", "verbal tense"},
      {"Voice", "verbal voice"},
      {"POS", "part of speech"},
      {"WordLength", "binned character length of the word"},
      {"TagCount", "number of morphological tags on the word"},
      {"Pseudoword", "real word versus generated pseudoword"},
      {"OddFeat", "the morphological feature on which two forms differ"},
      {"SharedFeat", "the morphological feature two forms share"},
  };
  return kDescriptions;
}

bool IsContrastive(std::string_view name) {
  return name == "OddFeat" || name == "SharedFeat";
}

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidRegistry, "registry: " + what);
}

}  // namespace

std::string_view TaskKindName(TaskKind kind) {
  return kind == TaskKind::kTokenPair ? "token_pair" : "single_token";
}

TaskKind ParseTaskKind(std::string_view name) {
  if (name == "single_token") return TaskKind::kSingleToken;
  if (name == "token_pair") return TaskKind::kTokenPair;
  throw Error(ErrorCode::kUnknownTaskKind,
              "unknown task kind '" + std::string(name) + "'");
}

const LanguageEntry& TaskRegistry::language(std::string_view code) const {
  for (const LanguageEntry& entry : languages_) {
    if (entry.code == code) return entry;
  }
  throw Error(ErrorCode::kUnknownLanguage,
              "unknown language '" + std::string(code) + "'");
}

const ProbingTaskSpec& TaskRegistry::FindTask(std::string_view code,
                                              std::string_view task) const {
  for (const ProbingTaskSpec& spec : language(code).tasks) {
    if (spec.name == task) return spec;
  }
  throw Error(ErrorCode::kUnknownTask, "task '" + std::string(task) +
                                           "' is not offered for language '" +
                                           std::string(code) + "'");
}

ordered_json TaskRegistry::ToJson() const {
  ordered_json doc = ordered_json::object();
  for (const LanguageEntry& entry : languages_) {
    ordered_json tasks = ordered_json::array();
    for (const ProbingTaskSpec& t : entry.tasks) {
      tasks.push_back({{"name", t.name},
                       {"kind", TaskKindName(t.kind)},
                       {"description", t.description}});
    }
    doc[entry.code] = {{"name", entry.display_name}, {"tasks", tasks}};
  }
  return doc;
}

TaskRegistry LoadRegistry(const ordered_json& config) {
  if (!config.is_object()) Invalid("top level must be an object");
  if (config.empty()) {
    throw Error(ErrorCode::kEmptyRegistry, "registry lists no languages");
  }
  TaskRegistry registry;
  for (const auto& [code, body] : config.items()) {
    if (code.empty()) Invalid("empty language code");
    if (!body.is_object()) Invalid("language '" + code + "' must be an object");
    LanguageEntry entry;
    entry.code = code;
    entry.display_name = body.value("name", code);
    auto tasks = body.find("tasks");
    if (tasks == body.end() || !tasks->is_array()) {
      Invalid("language '" + code + "' needs a tasks array");
    }
    if (tasks->empty()) {
      throw Error(ErrorCode::kEmptyRegistry,
                  "language '" + code + "' has no tasks");
    }
    std::set<std::string, std::less<>> seen;
    for (const ordered_json& t : *tasks) {
      if (!t.is_object() || !t.contains("name") || !t["name"].is_string()) {
        Invalid("task entries for '" + code + "' need a name");
      }
      ProbingTaskSpec spec;
      spec.name = t["name"].get<std::string>();
      if (spec.name.empty()) Invalid("empty task name for '" + code + "'");
      spec.kind = ParseTaskKind(t.value("kind", "single_token"));
      if (IsContrastive(spec.name) && spec.kind != TaskKind::kTokenPair) {
        Invalid(spec.name + " must be a token_pair task");
      }
      if (t.contains("description")) {
        spec.description = t["description"].get<std::string>();
      } else if (auto it = KnownDescriptions().find(spec.name);
                 it != KnownDescriptions().end()) {
        spec.description = it->second;
      }
      if (!seen.insert(spec.name).second) {
        Invalid("task '" + spec.name + "' listed twice for '" + code + "'");
      }
      entry.tasks.push_back(std::move(spec));
    }
    registry.languages_.push_back(std::move(entry));
  }
  return registry;
}

TaskRegistry LoadRegistryFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  ordered_json config;
  try {
    config = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    Invalid(e.what());
  }
  return LoadRegistry(config);
}

std::string_view DefaultRegistryJson() { return internal::kDefaultRegistryJson; }

const TaskRegistry& DefaultRegistry() {
  static const TaskRegistry registry =
      LoadRegistry(ordered_json::parse(internal::kDefaultRegistryJson));
  return registry;
}

}  // namespace wordprobe
