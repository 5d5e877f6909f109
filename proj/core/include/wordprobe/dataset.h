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

#ifndef WORDPROBE_DATASET_H_
#define WORDPROBE_DATASET_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordprobe/embedding_table.h"
#include "wordprobe/task_registry.h"

namespace wordprobe {

enum class Split { kTrain, kDev, kTest };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kDev,
                                                    Split::kTest};
std::string_view SplitName(Split split);

// One labeled row: one token for single_token tasks, two for token_pair.
struct Instance {
  std::vector<std::string> tokens;
  std::string label;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct ProbingDataset {
  ProbingTaskSpec task;
  // Distinct labels over all splits, lexicographically sorted; a label's
  // position is its class index.
  std::vector<std::string> label_set;
  std::vector<Instance> train;
  std::vector<Instance> dev;
  std::vector<Instance> test;

  const std::vector<Instance>& split(Split s) const;
  std::vector<Instance>& split(Split s);

  friend bool operator==(const ProbingDataset&, const ProbingDataset&) = default;
};

struct SplitOOV {
  std::size_t kept = 0;
  std::size_t dropped_oov = 0;
  double oov_rate() const {
    const std::size_t total = kept + dropped_oov;
    return total == 0 ? 0.0 : static_cast<double>(dropped_oov) / total;
  }
};

struct OOVReport {
  std::array<SplitOOV, 3> splits;  // indexed by Split

  const SplitOOV& operator[](Split s) const { return splits[static_cast<int>(s)]; }
  double overall_rate() const;
};

// Reads <root>/<language>/<task>/{train,dev,test}.tsv, each row
// "token[\ttoken2]\tlabel". Blank lines are skipped.
// Throws Error with kMissingSplit, kMalformedRow or kSingleClassDataset.
ProbingDataset LoadDataset(const std::filesystem::path& root,
                           std::string_view language,
                           const ProbingTaskSpec& task);

void WriteDataset(const std::filesystem::path& root, std::string_view language,
                  const ProbingDataset& dataset);

std::vector<std::string> CollectLabels(const ProbingDataset& dataset);

// Drops every instance with a token missing from `table` and recomputes the
// label set. Throws Error(kEmptyAfterFiltering) if a split ends up empty and
// Error(kSingleClassDataset) if filtering leaves fewer than two labels or
// collapses a multi-class split to one class.
std::pair<ProbingDataset, OOVReport> IntersectVocab(const ProbingDataset& dataset,
                                                    const EmbeddingTable& table);

// Test-split accuracy of always predicting the most frequent train label
// (ties go to the lexicographically first label).
double MajorityBaseline(const ProbingDataset& dataset);

}  // namespace wordprobe

#endif  // WORDPROBE_DATASET_H_
