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

#ifndef WORDPROBE_CLASSIFIER_H_
#define WORDPROBE_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordprobe/dataset.h"
#include "wordprobe/embedding_table.h"

namespace wordprobe {

// Single linear layer with softmax over frozen inputs. The embedding table
// is only ever read; it is not part of the parameters.
struct Classifier {
  int num_classes = 0;
  int input_dim = 0;
  std::vector<double> weights;  // num_classes x input_dim, row-major
  std::vector<double> bias;     // num_classes
  std::vector<std::string> labels;  // class index -> label

  static Classifier Zero(std::vector<std::string> labels, int input_dim);

  double& weight(int k, int d) { return weights[static_cast<std::size_t>(k) * input_dim + d]; }
  double weight(int k, int d) const {
    return weights[static_cast<std::size_t>(k) * input_dim + d];
  }
  // Throws Error(kBadLabelIndex).
  int LabelIndex(std::string_view label) const;
};

struct Gradients {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct LabeledVector {
  std::vector<double> x;
  int label = 0;
};

struct TrainConfig {
  int max_epochs = 20;
  int patience = 5;
  // Elementwise bound applied to every gradient component before the update.
  double grad_clip = 0.5;
  double learning_rate = 0.5;
  int batch_size = 32;
  std::uint64_t seed = 0;
  // Test hook: sees every mini-batch gradient after clipping.
  std::function<void(const Gradients&)> on_clipped_gradients;
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = 0;  // index into dev_accuracy_per_epoch
  std::vector<double> dev_accuracy_per_epoch;
  std::vector<double> train_loss_per_epoch;
  bool stopped_early = false;

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
  std::size_t n = 0;
};

// Classifier input width: dim for single tokens, 2*dim for pairs.
int InputDim(int embedding_dim, TaskKind kind);

// Token vector, or the concatenation (first, second) for pairs.
// Throws Error(kOOVToken) or Error(kDimMismatch) on a wrong token count.
std::vector<double> Encode(const Instance& instance, const EmbeddingTable& table,
                           TaskKind kind);

// Wx + b. Throws Error(kDimMismatch).
std::vector<double> Logits(const Classifier& c, std::span<const double> x);
// softmax(Wx + b), computed with the max logit subtracted.
std::vector<double> Forward(const Classifier& c, std::span<const double> x);
// Argmax of the logits; ties go to the lowest class index.
int Predict(const Classifier& c, std::span<const double> x);

// Mean cross-entropy over `batch` and its exact gradient.
// Throws Error(kDimMismatch), Error(kBadLabelIndex) or Error(kEmptySplit).
double LossAndGrad(const Classifier& c, std::span<const LabeledVector> batch,
                   Gradients* grads);

// Clamps each component into [-bound, bound].
void ClipGradients(Gradients& grads, double bound);

// Mini-batch gradient descent with per-epoch reshuffling, early stopping on
// dev accuracy (ties are not improvements) and restore-best. Deterministic
// in (table, dataset, config). Throws Error(kEmptySplit),
// Error(kSingleClassDataset), Error(kInvalidConfig) or Error(kOOVToken).
std::pair<Classifier, TrainReport> Train(const EmbeddingTable& table,
                                         const ProbingDataset& dataset,
                                         const TrainConfig& config);

// Throws Error(kEmptySplit) or Error(kOOVToken).
EvalResult Evaluate(const Classifier& c, const EmbeddingTable& table,
                    TaskKind kind, const std::vector<Instance>& split);

}  // namespace wordprobe

#endif  // WORDPROBE_CLASSIFIER_H_
