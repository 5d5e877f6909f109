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

#include "wordprobe/dataset.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "wordprobe/error.h"

namespace wordprobe {
namespace {

std::size_t ExpectedColumns(TaskKind kind) {
  return kind == TaskKind::kTokenPair ? 3 : 2;
}

std::vector<Instance> ReadSplit(const std::filesystem::path& path,
                                const ProbingTaskSpec& task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingSplit, "missing split " + path.string());
  }
  const std::size_t columns = ExpectedColumns(task.kind);
  std::vector<Instance> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    const bool any_empty = std::any_of(fields.begin(), fields.end(),
                                       [](const std::string& f) { return f.empty(); });
    if (fields.size() != columns || any_empty) {
      throw Error(ErrorCode::kMalformedRow,
                  path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " non-empty columns for " +
                      std::string(TaskKindName(task.kind)) + " task, got " +
                      std::to_string(fields.size()));
    }
    Instance inst;
    inst.label = std::move(fields.back());
    fields.pop_back();
    inst.tokens = std::move(fields);
    rows.push_back(std::move(inst));
  }
  return rows;
}

std::size_t DistinctLabels(const std::vector<Instance>& rows) {
  std::set<std::string_view> labels;
  for (const Instance& r : rows) labels.insert(r.label);
  return labels.size();
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

const std::vector<Instance>& ProbingDataset::split(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kDev: return dev;
    case Split::kTest: return test;
  }
  return train;
}

std::vector<Instance>& ProbingDataset::split(Split s) {
  return const_cast<std::vector<Instance>&>(
      static_cast<const ProbingDataset&>(*this).split(s));
}

double OOVReport::overall_rate() const {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  for (const SplitOOV& s : splits) {
    kept += s.kept;
    dropped += s.dropped_oov;
  }
  return kept + dropped == 0 ? 0.0 : static_cast<double>(dropped) / (kept + dropped);
}

std::vector<std::string> CollectLabels(const ProbingDataset& dataset) {
  std::set<std::string> labels;
  for (Split s : kAllSplits) {
    for (const Instance& r : dataset.split(s)) labels.insert(r.label);
  }
  return {labels.begin(), labels.end()};
}

ProbingDataset LoadDataset(const std::filesystem::path& root,
                           std::string_view language,
                           const ProbingTaskSpec& task) {
  ProbingDataset ds;
  ds.task = task;
  const std::filesystem::path dir = root / std::string(language) / task.name;
  for (Split s : kAllSplits) {
    ds.split(s) = ReadSplit(dir / (std::string(SplitName(s)) + ".tsv"), task);
  }
  ds.label_set = CollectLabels(ds);
  if (ds.label_set.size() < 2) {
    throw Error(ErrorCode::kSingleClassDataset,
                "dataset " + dir.string() + " has fewer than two labels");
  }
  return ds;
}

void WriteDataset(const std::filesystem::path& root, std::string_view language,
                  const ProbingDataset& dataset) {
  const std::filesystem::path dir =
      root / std::string(language) / dataset.task.name;
  std::filesystem::create_directories(dir);
  for (Split s : kAllSplits) {
    const auto path = dir / (std::string(SplitName(s)) + ".tsv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const Instance& r : dataset.split(s)) {
      for (const std::string& t : r.tokens) out << t << '\t';
      out << r.label << '\n';
    }
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

std::pair<ProbingDataset, OOVReport> IntersectVocab(const ProbingDataset& dataset,
                                                    const EmbeddingTable& table) {
  ProbingDataset out;
  out.task = dataset.task;
  OOVReport report;
  for (Split s : kAllSplits) {
    const auto& rows = dataset.split(s);
    auto& kept = out.split(s);
    SplitOOV& counts = report.splits[static_cast<int>(s)];
    for (const Instance& r : rows) {
      const bool known = std::all_of(
          r.tokens.begin(), r.tokens.end(),
          [&](const std::string& t) { return table.Contains(t); });
      if (known) {
        kept.push_back(r);
        ++counts.kept;
      } else {
        ++counts.dropped_oov;
      }
    }
    if (kept.empty()) {
      throw Error(ErrorCode::kEmptyAfterFiltering,
                  std::string(SplitName(s)) + " split of " + dataset.task.name +
                      " is empty after dropping out-of-vocabulary tokens");
    }
    if (DistinctLabels(rows) > 1 && DistinctLabels(kept) < 2) {
      throw Error(ErrorCode::kSingleClassDataset,
                  std::string(SplitName(s)) + " split of " + dataset.task.name +
                      " has a single class after vocabulary filtering");
    }
  }
  out.label_set = CollectLabels(out);
  if (out.label_set.size() < 2) {
    throw Error(ErrorCode::kSingleClassDataset,
                dataset.task.name + " has fewer than two labels after filtering");
  }
  return {std::move(out), report};
}

double MajorityBaseline(const ProbingDataset& dataset) {
  if (dataset.test.empty()) {
    throw Error(ErrorCode::kEmptySplit, "test split is empty");
  }
  std::map<std::string, std::size_t> counts;  // ordered: ties -> first label
  for (const Instance& r : dataset.train) ++counts[r.label];
  std::string majority;
  std::size_t best = 0;
  for (const auto& [label, n] : counts) {
    if (n > best) {
      best = n;
      majority = label;
    }
  }
  if (counts.empty() && !dataset.label_set.empty()) majority = dataset.label_set.front();
  std::size_t hits = 0;
  for (const Instance& r : dataset.test) hits += (r.label == majority);
  return static_cast<double>(hits) / dataset.test.size();
}

}  // namespace wordprobe
