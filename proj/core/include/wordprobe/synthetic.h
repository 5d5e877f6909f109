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

#ifndef WORDPROBE_SYNTHETIC_H_
#define WORDPROBE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include "wordprobe/dataset.h"
#include "wordprobe/embedding_table.h"

namespace wordprobe {

struct SyntheticSpec {
  TaskKind kind = TaskKind::kSingleToken;
  int classes = 2;
  int dim = 4;
  std::size_t train = 200;
  std::size_t dev = 50;
  std::size_t test = 200;
  bool separable = true;
  std::uint64_t seed = 0;
  // Defaults to "Synthetic" / "SyntheticPair" by kind.
  std::string task_name;
  // Generated tokens are <prefix><8-digit counter>; distinct prefixes keep
  // several generated tasks from colliding in one table.
  std::string token_prefix = "w";
};

// Upper bound (exclusive) on the noise norm added in separable mode.
inline constexpr double kSyntheticNoiseBound = 0.25;

// Builds a labeled dataset and the embedding table covering its tokens.
// Labels are balanced per split ("c0", "c1", ... zero-padded so that label
// order equals class order). In separable mode every token of a class-c row
// sits at SyntheticClassCenter(c) plus noise of norm < 0.25; otherwise vectors
// are drawn independently of labels. Deterministic in `seed`.
// Throws Error(kInvalidSpec).
std::pair<ProbingDataset, EmbeddingTable> GenerateSynthetic(
    const SyntheticSpec& spec);

// Unit-norm center of class `label`: the basis vector e_label when
// dim >= classes, or a vertex of the regular simplex centered at the origin
// when dim == classes - 1. Throws Error(kInvalidSpec) for narrower dims.
std::vector<double> SyntheticClassCenter(int classes, int dim, int label);

}  // namespace wordprobe

#endif  // WORDPROBE_SYNTHETIC_H_
