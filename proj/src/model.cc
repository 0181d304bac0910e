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

#include "asyncfl/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "asyncfl/error.h"
#include "asyncfl/rng.h"

namespace asyncfl {
namespace {

// Offsets of each parameter block inside the flat vector.
struct Layout {
  std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0, total = 0;
};

Layout MakeLayout(const ModelSpec &spec) {
  Layout l;
  if (spec.arch == ModelSpec::Arch::kLogistic) {
    l.b1 = spec.input_dim * spec.num_classes;
    l.total = l.b1 + spec.num_classes;
    return l;
  }
  l.b1 = spec.input_dim * spec.hidden_dim;
  l.w2 = l.b1 + spec.hidden_dim;
  l.b2 = l.w2 + spec.hidden_dim * spec.num_classes;
  l.total = l.b2 + spec.num_classes;
  return l;
}

void CheckParams(const ModelSpec &spec, const ParamVector &params) {
  if (params.size() != spec.ParamCount()) {
    throw ValidationError("model: expected " + std::to_string(spec.ParamCount()) + " parameters, got " +
                          std::to_string(params.size()));
  }
}

void CheckBatch(const ModelSpec &spec, const BatchView &batch) {
  if (batch.size() == 0) throw ValidationError("model: empty batch");
  if (batch.dim != spec.input_dim) throw ValidationError("model: batch dimension does not match input_dim");
  if (batch.inputs.size() != batch.size() * batch.dim) throw ValidationError("model: malformed batch");
  for (int label : batch.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= spec.num_classes) {
      throw ValidationError("model: label out of range");
    }
  }
}

// out = W x + b for W of shape (rows x cols).
void Affine(const double *w, const double *b, std::span<const double> x, std::size_t rows, double *out) {
  const std::size_t cols = x.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = b[r];
    const double *wr = w + r * cols;
    for (std::size_t c = 0; c < cols; ++c) sum += wr[c] * x[c];
    out[r] = sum;
  }
}

double LogSumExp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Reusable forward/backward scratch for one sample at a time.
class Network {
 public:
  Network(const ModelSpec &spec, const ParamVector &params)
      : spec_(spec), layout_(MakeLayout(spec)), p_(params.data()), hidden_(spec.hidden_dim),
        logits_(spec.num_classes) {}

  std::span<const double> Forward(std::span<const double> x) {
    if (spec_.arch == ModelSpec::Arch::kLogistic) {
      Affine(p_ + layout_.w1, p_ + layout_.b1, x, spec_.num_classes, logits_.data());
    } else {
      Affine(p_ + layout_.w1, p_ + layout_.b1, x, spec_.hidden_dim, hidden_.data());
      for (double &h : hidden_) h = std::max(h, 0.0);
      Affine(p_ + layout_.w2, p_ + layout_.b2, hidden_, spec_.num_classes, logits_.data());
    }
    return logits_;
  }

  // Returns the sample loss and accumulates its gradient into `grad`.
  double Backward(std::span<const double> x, int label, std::vector<double> &grad) {
    Forward(x);
    const double lse = LogSumExp(logits_);
    const double loss = lse - logits_[label];
    std::vector<double> dlogits(spec_.num_classes);
    for (std::size_t k = 0; k < spec_.num_classes; ++k) {
      dlogits[k] = std::exp(logits_[k] - lse) - (static_cast<int>(k) == label ? 1.0 : 0.0);
    }
    if (spec_.arch == ModelSpec::Arch::kLogistic) {
      AccumulateOuter(dlogits, x, grad.data() + layout_.w1, grad.data() + layout_.b1);
      return loss;
    }
    AccumulateOuter(dlogits, hidden_, grad.data() + layout_.w2, grad.data() + layout_.b2);
    std::vector<double> dhidden(spec_.hidden_dim, 0.0);
    const double *w2 = p_ + layout_.w2;
    for (std::size_t k = 0; k < spec_.num_classes; ++k) {
      for (std::size_t j = 0; j < spec_.hidden_dim; ++j) dhidden[j] += w2[k * spec_.hidden_dim + j] * dlogits[k];
    }
    for (std::size_t j = 0; j < spec_.hidden_dim; ++j) {
      if (hidden_[j] <= 0.0) dhidden[j] = 0.0;
    }
    AccumulateOuter(dhidden, x, grad.data() + layout_.w1, grad.data() + layout_.b1);
    return loss;
  }

 private:
  static void AccumulateOuter(std::span<const double> dout, std::span<const double> in, double *dw, double *db) {
    for (std::size_t r = 0; r < dout.size(); ++r) {
      double *row = dw + r * in.size();
      for (std::size_t c = 0; c < in.size(); ++c) row[c] += dout[r] * in[c];
      db[r] += dout[r];
    }
  }

  const ModelSpec &spec_;
  Layout layout_;
  const double *p_;
  std::vector<double> hidden_;
  std::vector<double> logits_;
};

}  // namespace

ModelSpec ModelSpec::Logistic(std::size_t input_dim, std::size_t num_classes) {
  return {Arch::kLogistic, input_dim, 0, num_classes};
}

ModelSpec ModelSpec::Mlp(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes) {
  return {Arch::kMlp, input_dim, hidden_dim, num_classes};
}

std::size_t ModelSpec::ParamCount() const { return MakeLayout(*this).total; }

void ModelSpec::Validate() const {
  if (input_dim < 1) throw ValidationError("model: input_dim must be >= 1");
  if (num_classes < 1) throw ValidationError("model: num_classes must be >= 1");
  if (arch == Arch::kMlp && hidden_dim < 1) throw ValidationError("model: hidden_dim must be >= 1");
}

std::string_view ArchName(ModelSpec::Arch arch) { return arch == ModelSpec::Arch::kLogistic ? "logistic" : "mlp"; }

ModelSpec::Arch ParseArch(std::string_view name) {
  if (name == "logistic") return ModelSpec::Arch::kLogistic;
  if (name == "mlp") return ModelSpec::Arch::kMlp;
  throw ValidationError("unknown model architecture '" + std::string(name) + "' (expected logistic or mlp)");
}

ParamVector InitParams(const ModelSpec &spec, std::uint64_t seed) {
  spec.Validate();
  const Layout layout = MakeLayout(spec);
  std::vector<double> p(layout.total, 0.0);
  RngStream rng(DeriveKey(seed, StreamTag::kInit));
  auto fill = [&](std::size_t offset, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < fan_in * fan_out; ++i) p[offset + i] = rng.Uniform(-limit, limit);
  };
  if (spec.arch == ModelSpec::Arch::kLogistic) {
    fill(layout.w1, spec.input_dim, spec.num_classes);
  } else {
    fill(layout.w1, spec.input_dim, spec.hidden_dim);
    fill(layout.w2, spec.hidden_dim, spec.num_classes);
  }
  return ParamVector(std::move(p));
}

LossAndGrad ComputeLossAndGrad(const ModelSpec &spec, const ParamVector &params, const BatchView &batch) {
  CheckParams(spec, params);
  CheckBatch(spec, batch);
  Network net(spec, params);
  std::vector<double> grad(params.size(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) loss += net.Backward(batch.row(i), batch.labels[i], grad);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (double &g : grad) g *= inv_n;
  return {loss * inv_n, ParamVector(std::move(grad))};
}

ParamVector SgdStep(const ParamVector &params, const ParamVector &grad, double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ValidationError("sgd_step: learning rate must be finite and >= 0");
  return AddScaled(params, -lr, grad);
}

ParamVector LocalTrain(const ModelSpec &spec, const ParamVector &params, const BatchView &data,
                       std::span<const std::size_t> shard, const LocalTrainOptions &options,
                       std::uint64_t shuffle_key) {
  if (shard.empty()) throw ValidationError("local_train: empty shard");
  if (options.epochs < 1) throw ValidationError("local_train: epochs must be >= 1");
  if (options.batch_size < 1) throw ValidationError("local_train: batch_size must be >= 1");
  CheckParams(spec, params);

  ParamVector current = params;
  std::vector<std::size_t> order(shard.begin(), shard.end());
  Batch scratch;
  scratch.dim = data.dim;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    RngStream rng(DeriveKey(shuffle_key, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      scratch.inputs.clear();
      scratch.labels.clear();
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t row = order[i];
        if (row >= data.size()) throw ValidationError("local_train: shard index out of range");
        auto x = data.row(row);
        scratch.inputs.insert(scratch.inputs.end(), x.begin(), x.end());
        scratch.labels.push_back(data.labels[row]);
      }
      const LossAndGrad lg = ComputeLossAndGrad(spec, current, scratch.view());
      current = SgdStep(current, lg.grad, options.lr);
    }
  }
  return current;
}

std::vector<double> Logits(const ModelSpec &spec, const ParamVector &params, std::span<const double> input) {
  CheckParams(spec, params);
  if (input.size() != spec.input_dim) throw ValidationError("model: input dimension mismatch");
  Network net(spec, params);
  auto z = net.Forward(input);
  return {z.begin(), z.end()};
}

std::vector<double> Softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - m);
    sum += out[k];
  }
  for (double &v : out) v /= sum;
  return out;
}

Evaluation Evaluate(const ModelSpec &spec, const ParamVector &params, const BatchView &test) {
  CheckParams(spec, params);
  CheckBatch(spec, test);
  Network net(spec, params);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto z = net.Forward(test.row(i));
    // max_element returns the first maximum, i.e. the lowest class index on ties.
    const auto best = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    if (best == test.labels[i]) ++correct;
    loss += LogSumExp(z) - z[test.labels[i]];
  }
  const auto n = static_cast<double>(test.size());
  return {static_cast<double>(correct) / n, loss / n};
}

}  // namespace asyncfl
