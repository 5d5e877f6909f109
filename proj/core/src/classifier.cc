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

#include "wordprobe/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wordprobe/error.h"
#include "wordprobe/random.h"

namespace wordprobe {
namespace {

constexpr double kInitScale = 0.08;

// Dense row-major matrix of encoded examples.
struct EncodedSplit {
  int cols = 0;
  std::vector<double> x;
  std::vector<int> labels;

  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {x.data() + i * cols, static_cast<std::size_t>(cols)};
  }
};

EncodedSplit EncodeSplit(const Classifier& c, const EmbeddingTable& table,
                         TaskKind kind, const std::vector<Instance>& rows) {
  EncodedSplit out;
  out.cols = c.input_dim;
  out.x.reserve(rows.size() * c.input_dim);
  out.labels.reserve(rows.size());
  for (const Instance& r : rows) {
    const std::vector<double> v = Encode(r, table, kind);
    if (static_cast<int>(v.size()) != c.input_dim) {
      throw Error(ErrorCode::kDimMismatch, "encoded width does not match classifier");
    }
    out.x.insert(out.x.end(), v.begin(), v.end());
    out.labels.push_back(c.LabelIndex(r.label));
  }
  return out;
}

void LogitsInto(const Classifier& c, std::span<const double> x,
                std::vector<double>* z) {
  z->resize(c.num_classes);
  for (int k = 0; k < c.num_classes; ++k) {
    const double* w = c.weights.data() + static_cast<std::size_t>(k) * c.input_dim;
    double s = c.bias[k];
    for (int d = 0; d < c.input_dim; ++d) s += w[d] * x[d];
    (*z)[k] = s;
  }
}

// Turns logits into probabilities in place; returns log p[label].
double SoftmaxInPlace(std::vector<double>* z, int label) {
  const double m = *std::max_element(z->begin(), z->end());
  double sum = 0.0;
  for (double& v : *z) {
    v = std::exp(v - m);
    sum += v;
  }
  const double log_p = std::log((*z)[label]) - std::log(sum);
  for (double& v : *z) v /= sum;
  return log_p;
}

int ArgMax(const std::vector<double>& z) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(z.size()); ++k) {
    if (z[k] > z[best]) best = k;
  }
  return best;
}

// Adds one example's loss gradient (unnormalized) into grads; returns its loss.
double Accumulate(const Classifier& c, std::span<const double> x, int label,
                  std::vector<double>* scratch, Gradients* grads) {
  LogitsInto(c, x, scratch);
  const double loss = -SoftmaxInPlace(scratch, label);
  for (int k = 0; k < c.num_classes; ++k) {
    const double delta = (*scratch)[k] - (k == label ? 1.0 : 0.0);
    double* g = grads->weights.data() + static_cast<std::size_t>(k) * c.input_dim;
    for (int d = 0; d < c.input_dim; ++d) g[d] += delta * x[d];
    grads->bias[k] += delta;
  }
  return loss;
}

void ResetGradients(const Classifier& c, Gradients* grads) {
  grads->weights.assign(c.weights.size(), 0.0);
  grads->bias.assign(c.bias.size(), 0.0);
}

void ScaleGradients(Gradients* grads, double factor) {
  for (double& g : grads->weights) g *= factor;
  for (double& g : grads->bias) g *= factor;
}

double Accuracy(const Classifier& c, const EncodedSplit& split,
                std::vector<double>* scratch) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < split.rows(); ++i) {
    LogitsInto(c, split.row(i), scratch);
    hits += (ArgMax(*scratch) == split.labels[i]);
  }
  return static_cast<double>(hits) / split.rows();
}

void ValidateConfig(const TrainConfig& cfg) {
  if (cfg.max_epochs < 1 || cfg.patience < 1 || cfg.batch_size < 1 ||
      !(cfg.learning_rate > 0) || !(cfg.grad_clip > 0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "train config needs max_epochs, patience, batch_size >= 1 and "
                "positive learning_rate and grad_clip");
  }
}

}  // namespace

Classifier Classifier::Zero(std::vector<std::string> labels, int input_dim) {
  Classifier c;
  c.num_classes = static_cast<int>(labels.size());
  c.input_dim = input_dim;
  c.weights.assign(static_cast<std::size_t>(c.num_classes) * input_dim, 0.0);
  c.bias.assign(c.num_classes, 0.0);
  c.labels = std::move(labels);
  return c;
}

int Classifier::LabelIndex(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw Error(ErrorCode::kBadLabelIndex,
                "label '" + std::string(label) + "' is not in the label set");
  }
  return static_cast<int>(it - labels.begin());
}

int InputDim(int embedding_dim, TaskKind kind) {
  return kind == TaskKind::kTokenPair ? 2 * embedding_dim : embedding_dim;
}

std::vector<double> Encode(const Instance& instance, const EmbeddingTable& table,
                           TaskKind kind) {
  const std::size_t want = kind == TaskKind::kTokenPair ? 2 : 1;
  if (instance.tokens.size() != want) {
    throw Error(ErrorCode::kDimMismatch,
                "instance has " + std::to_string(instance.tokens.size()) +
                    " tokens, task kind needs " + std::to_string(want));
  }
  std::vector<double> x;
  x.reserve(want * table.dim());
  for (const std::string& token : instance.tokens) {
    const auto v = table.Lookup(token);
    if (!v) throw Error(ErrorCode::kOOVToken, "token '" + token + "' not in table");
    x.insert(x.end(), v->begin(), v->end());
  }
  return x;
}

std::vector<double> Logits(const Classifier& c, std::span<const double> x) {
  if (static_cast<int>(x.size()) != c.input_dim) {
    throw Error(ErrorCode::kDimMismatch,
                "input has " + std::to_string(x.size()) + " components, expected " +
                    std::to_string(c.input_dim));
  }
  std::vector<double> z;
  LogitsInto(c, x, &z);
  return z;
}

std::vector<double> Forward(const Classifier& c, std::span<const double> x) {
  std::vector<double> z = Logits(c, x);
  SoftmaxInPlace(&z, 0);
  return z;
}

int Predict(const Classifier& c, std::span<const double> x) {
  return ArgMax(Logits(c, x));
}

double LossAndGrad(const Classifier& c, std::span<const LabeledVector> batch,
                   Gradients* grads) {
  if (batch.empty()) throw Error(ErrorCode::kEmptySplit, "empty batch");
  ResetGradients(c, grads);
  std::vector<double> scratch;
  double loss = 0.0;
  for (const LabeledVector& ex : batch) {
    if (static_cast<int>(ex.x.size()) != c.input_dim) {
      throw Error(ErrorCode::kDimMismatch, "batch vector width mismatch");
    }
    if (ex.label < 0 || ex.label >= c.num_classes) {
      throw Error(ErrorCode::kBadLabelIndex,
                  "label index " + std::to_string(ex.label) + " out of range");
    }
    loss += Accumulate(c, ex.x, ex.label, &scratch, grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  ScaleGradients(grads, inv);
  return loss * inv;
}

void ClipGradients(Gradients& grads, double bound) {
  for (double& g : grads.weights) g = std::clamp(g, -bound, bound);
  for (double& g : grads.bias) g = std::clamp(g, -bound, bound);
}

std::pair<Classifier, TrainReport> Train(const EmbeddingTable& table,
                                         const ProbingDataset& dataset,
                                         const TrainConfig& config) {
  ValidateConfig(config);
  if (dataset.train.empty() || dataset.dev.empty()) {
    throw Error(ErrorCode::kEmptySplit,
                dataset.task.name + ": train and dev splits must be non-empty");
  }
  if (dataset.label_set.size() < 2) {
    throw Error(ErrorCode::kSingleClassDataset,
                dataset.task.name + ": need at least two labels");
  }

  Classifier model = Classifier::Zero(dataset.label_set,
                                      InputDim(table.dim(), dataset.task.kind));
  const EncodedSplit train = EncodeSplit(model, table, dataset.task.kind, dataset.train);
  const EncodedSplit dev = EncodeSplit(model, table, dataset.task.kind, dataset.dev);

  Rng rng(config.seed);
  for (double& w : model.weights) w = rng.Uniform(-kInitScale, kInitScale);
  for (double& b : model.bias) b = rng.Uniform(-kInitScale, kInitScale);

  TrainReport report;
  Classifier best = model;
  double best_accuracy = -1.0;
  int since_best = 0;
  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scratch;
  Gradients grads;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      ResetGradients(model, &grads);
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t r = order[i];
        epoch_loss += Accumulate(model, train.row(r), train.labels[r], &scratch, &grads);
      }
      ScaleGradients(&grads, 1.0 / static_cast<double>(end - start));
      ClipGradients(grads, config.grad_clip);
      if (config.on_clipped_gradients) config.on_clipped_gradients(grads);
      for (std::size_t k = 0; k < model.weights.size(); ++k) {
        model.weights[k] -= config.learning_rate * grads.weights[k];
      }
      for (std::size_t k = 0; k < model.bias.size(); ++k) {
        model.bias[k] -= config.learning_rate * grads.bias[k];
      }
    }
    report.train_loss_per_epoch.push_back(epoch_loss / train.rows());
    const double accuracy = Accuracy(model, dev, &scratch);
    report.dev_accuracy_per_epoch.push_back(accuracy);
    report.epochs_run = epoch + 1;

    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      report.best_epoch = epoch;
      best = model;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      report.stopped_early = true;
      break;
    }
  }
  return {std::move(best), std::move(report)};
}

EvalResult Evaluate(const Classifier& c, const EmbeddingTable& table,
                    TaskKind kind, const std::vector<Instance>& split) {
  if (split.empty()) throw Error(ErrorCode::kEmptySplit, "evaluation split is empty");
  const EncodedSplit data = EncodeSplit(c, table, kind, split);
  std::vector<double> z;
  std::size_t hits = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    LogitsInto(c, data.row(i), &z);
    hits += (ArgMax(z) == data.labels[i]);
    loss -= SoftmaxInPlace(&z, data.labels[i]);
  }
  EvalResult result;
  result.n = data.rows();
  result.accuracy = static_cast<double>(hits) / result.n;
  result.mean_loss = loss / result.n;
  return result;
}

}  // namespace wordprobe
