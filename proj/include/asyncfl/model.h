/**
 * Copyright 2026 The asyncfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ASYNCFL_MODEL_H_
#define ASYNCFL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "asyncfl/batch.h"
#include "asyncfl/params.h"

namespace asyncfl {

// Softmax classifier: either linear (logistic regression) or one ReLU hidden
// layer. Parameters are flattened as [W1, b1] or [W1, b1, W2, b2] with
// row-major weight matrices of shape (fan_out x fan_in).
struct ModelSpec {
  enum class Arch { kLogistic, kMlp };

  Arch arch = Arch::kLogistic;
  std::size_t input_dim = 1;
  std::size_t hidden_dim = 0;
  std::size_t num_classes = 2;

  static ModelSpec Logistic(std::size_t input_dim, std::size_t num_classes);
  static ModelSpec Mlp(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes);

  std::size_t ParamCount() const;
  void Validate() const;
};

std::string_view ArchName(ModelSpec::Arch arch);
ModelSpec::Arch ParseArch(std::string_view name);

// Glorot-uniform weights, zero biases. Deterministic in (spec, seed).
ParamVector InitParams(const ModelSpec &spec, std::uint64_t seed);

struct LossAndGrad {
  double loss = 0.0;
  ParamVector grad;
};

// Mean softmax cross-entropy over the batch and its gradient.
LossAndGrad ComputeLossAndGrad(const ModelSpec &spec, const ParamVector &params, const BatchView &batch);

// params - lr * grad, nothing else.
ParamVector SgdStep(const ParamVector &params, const ParamVector &grad, double lr);

struct LocalTrainOptions {
  int epochs = 3;
  std::size_t batch_size = 32;
  double lr = 0.05;
};

// Mini-batch SGD over the rows of `data` listed in `shard`. Epoch e shuffles
// with the stream DeriveKey(shuffle_key, e).
ParamVector LocalTrain(const ModelSpec &spec, const ParamVector &params, const BatchView &data,
                       std::span<const std::size_t> shard, const LocalTrainOptions &options,
                       std::uint64_t shuffle_key);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

// Top-1 accuracy (ties go to the lowest class index) and mean loss.
Evaluation Evaluate(const ModelSpec &spec, const ParamVector &params, const BatchView &test);

// Class scores (logits) for a single input row.
std::vector<double> Logits(const ModelSpec &spec, const ParamVector &params, std::span<const double> input);

// Row softmax with max subtraction.
std::vector<double> Softmax(std::span<const double> logits);

}  // namespace asyncfl

#endif  // ASYNCFL_MODEL_H_
