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

#include "wordprobe/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "wordprobe/error.h"
#include "wordprobe/random.h"

namespace wordprobe {
namespace {

// Largest radius actually drawn; strictly below kSyntheticNoiseBound.
constexpr double kNoiseRadius = 0.2;

std::string PaddedLabel(int c, int classes) {
  const int width = static_cast<int>(std::to_string(classes - 1).size());
  std::string digits = std::to_string(c);
  return "c" + std::string(width - digits.size(), '0') + digits;
}

void FillVector(Rng& rng, const SyntheticSpec& spec,
                const std::vector<double>& center, std::vector<float>* v) {
  v->assign(spec.dim, 0.0f);
  std::vector<double> g(spec.dim);
  double norm = 0.0;
  for (double& x : g) {
    x = rng.Normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (spec.separable) {
    const double radius = rng.Uniform(0.0, kNoiseRadius);
    for (int k = 0; k < spec.dim; ++k) {
      (*v)[k] = static_cast<float>(center[k] + (norm > 0 ? g[k] / norm * radius : 0.0));
    }
  } else {
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.dim));
    for (int k = 0; k < spec.dim; ++k) (*v)[k] = static_cast<float>(g[k] * scale);
  }
}

}  // namespace

std::vector<double> SyntheticClassCenter(int classes, int dim, int label) {
  if (classes < 2 || label < 0 || label >= classes || dim < classes - 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "class centers need 0 <= label < classes and dim >= classes - 1");
  }
  std::vector<double> center(dim, 0.0);
  if (dim >= classes) {
    center[label] = 1.0;
    return center;
  }
  // Orthonormal basis of the hyperplane sum(x) = 0 in R^classes, built by
  // Gram-Schmidt over the centered basis vectors, then vertex coordinates.
  const int n = classes;
  auto centered = [n](int i) {
    std::vector<double> c(n, -1.0 / n);
    c[i] += 1.0;
    return c;
  };
  std::vector<std::vector<double>> basis;
  for (int i = 0; i < n - 1; ++i) {
    std::vector<double> u = centered(i);
    for (const auto& b : basis) {
      const double dot = std::inner_product(u.begin(), u.end(), b.begin(), 0.0);
      for (int k = 0; k < n; ++k) u[k] -= dot * b[k];
    }
    const double len = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
    for (double& x : u) x /= len;
    basis.push_back(std::move(u));
  }
  const std::vector<double> vertex = centered(label);
  double norm = 0.0;
  for (int j = 0; j < dim; ++j) {
    center[j] = std::inner_product(vertex.begin(), vertex.end(), basis[j].begin(), 0.0);
    norm += center[j] * center[j];
  }
  for (double& x : center) x /= std::sqrt(norm);
  return center;
}

std::pair<ProbingDataset, EmbeddingTable> GenerateSynthetic(
    const SyntheticSpec& spec) {
  if (spec.classes < 2) {
    throw Error(ErrorCode::kInvalidSpec, "synthetic data needs at least 2 classes");
  }
  if (spec.dim < 1) throw Error(ErrorCode::kInvalidSpec, "dim must be >= 1");
  if (spec.separable && spec.dim < spec.classes - 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "separable mode needs dim >= classes - 1");
  }
  if (spec.train == 0 || spec.dev == 0 || spec.test == 0) {
    throw Error(ErrorCode::kInvalidSpec, "every split needs at least one row");
  }
  if (spec.token_prefix.empty() ||
      spec.token_prefix.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidSpec, "token prefix must be a non-empty word");
  }

  ProbingDataset ds;
  ds.task.kind = spec.kind;
  ds.task.name = !spec.task_name.empty() ? spec.task_name
                 : spec.kind == TaskKind::kTokenPair ? "SyntheticPair"
                                                     : "Synthetic";
  ds.task.description = spec.separable ? "synthetic, linearly separable"
                                       : "synthetic, labels independent of vectors";
  for (int c = 0; c < spec.classes; ++c) {
    ds.label_set.push_back(PaddedLabel(c, spec.classes));
  }

  EmbeddingTable table(spec.dim, "synthetic");
  Rng rng(spec.seed);
  const int tokens_per_row = spec.kind == TaskKind::kTokenPair ? 2 : 1;
  std::size_t counter = 0;
  std::vector<float> v;
  char name[32];
  std::vector<std::vector<double>> centers;
  if (spec.separable) {
    for (int c = 0; c < spec.classes; ++c) {
      centers.push_back(SyntheticClassCenter(spec.classes, spec.dim, c));
    }
  }
  const std::vector<double> no_center;

  const std::size_t sizes[] = {spec.train, spec.dev, spec.test};
  for (Split s : kAllSplits) {
    const std::size_t n = sizes[static_cast<int>(s)];
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % spec.classes);
    rng.Shuffle(std::span<int>(labels));

    auto& rows = ds.split(s);
    rows.reserve(n);
    for (int label : labels) {
      Instance inst;
      inst.label = ds.label_set[label];
      for (int t = 0; t < tokens_per_row; ++t) {
        std::snprintf(name, sizeof(name), "%08zu", counter++);
        std::string token = spec.token_prefix + name;
        FillVector(rng, spec, spec.separable ? centers[label] : no_center, &v);
        table.Insert(token, v);
        inst.tokens.push_back(std::move(token));
      }
      rows.push_back(std::move(inst));
    }
  }
  ds.label_set = CollectLabels(ds);
  return {std::move(ds), std::move(table)};
}

}  // namespace wordprobe
