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

#include "asyncfl/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "asyncfl/error.h"

namespace asyncfl {
namespace {

constexpr std::array<std::string_view, 7> kMetricNames = {"euclidean", "manhattan", "cosine", "bregman",
                                                          "hellinger", "kl",        "fisher"};

std::string ValidMetricList() {
  std::string out;
  for (auto name : kMetricNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

void CheckSameLength(const ProbVector &p, const ProbVector &q, const char *what) {
  if (p.size() != q.size()) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()) + ")");
  }
}

// Overflow-safe Euclidean norm of the element-wise difference.
double ScaledDiffNorm(std::span<const double> x, std::span<const double> y) {
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) scale = std::max(scale, std::abs(x[i] - y[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = (x[i] - y[i]) / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

double EntropyTerm(double x, double y) { return x * std::log(x / y) - x + y; }

void CheckEntropyDomain(const ParamVector &x) {
  for (double v : x) {
    if (!(v > 0.0)) throw ValidationError("negative-entropy generator requires strictly positive entries");
  }
}

}  // namespace

std::string_view MetricName(MetricKind kind) { return kMetricNames[static_cast<std::size_t>(kind)]; }

MetricKind ParseMetricKind(std::string_view name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (kMetricNames[i] == name) return kAllMetrics[i];
  }
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected one of: " + ValidMetricList() +
                        ")");
}

bool IsProbabilistic(MetricKind kind) {
  return kind == MetricKind::kHellinger || kind == MetricKind::kKLDivergence || kind == MetricKind::kFisherRao;
}

std::string_view GeneratorName(BregmanGenerator generator) {
  return generator == BregmanGenerator::kSquaredNorm ? "squared_norm" : "negative_entropy";
}

BregmanGenerator ParseGenerator(std::string_view name) {
  if (name == "squared_norm") return BregmanGenerator::kSquaredNorm;
  if (name == "negative_entropy") return BregmanGenerator::kNegativeEntropy;
  throw ValidationError("unknown Bregman generator '" + std::string(name) +
                        "' (expected squared_norm or negative_entropy)");
}

double GeneratorValue(BregmanGenerator generator, const ParamVector &x) {
  double sum = 0.0;
  if (generator == BregmanGenerator::kSquaredNorm) {
    for (double v : x) sum += 0.5 * v * v;
  } else {
    CheckEntropyDomain(x);
    for (double v : x) sum += v * std::log(v);
  }
  return sum;
}

ParamVector GeneratorGradient(BregmanGenerator generator, const ParamVector &x) {
  if (generator == BregmanGenerator::kSquaredNorm) return x;
  CheckEntropyDomain(x);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::log(x[i]) + 1.0;
  return ParamVector(std::move(g));
}

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("ProbVector: empty");
  double sum = 0.0;
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("ProbVector: entries must be finite and > 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("ProbVector: entries must sum to 1");
}

double Euclidean(const ParamVector &x, const ParamVector &y) {
  CheckSameLength(x, y, "euclidean");
  return ScaledDiffNorm(x.values(), y.values());
}

double Manhattan(const ParamVector &x, const ParamVector &y) {
  CheckSameLength(x, y, "manhattan");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
  return sum;
}

double CosineDistance(const ParamVector &x, const ParamVector &y) {
  CheckSameLength(x, y, "cosine");
  const double nx = L2Norm(x);
  const double ny = L2Norm(y);
  if (nx == 0.0 && ny == 0.0) return 0.0;
  if (nx == 0.0 || ny == 0.0) return 1.0;
  // Normalize before the dot product so large parameters cannot overflow it.
  double similarity = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) similarity += (x[i] / nx) * (y[i] / ny);
  return std::clamp(1.0 - similarity, 0.0, 2.0);
}

double Bregman(const ParamVector &x, const ParamVector &y, BregmanGenerator generator) {
  CheckSameLength(x, y, "bregman");
  double sum = 0.0;
  if (generator == BregmanGenerator::kSquaredNorm) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      sum += 0.5 * d * d;
    }
    return sum;
  }
  CheckEntropyDomain(x);
  CheckEntropyDomain(y);
  for (std::size_t i = 0; i < x.size(); ++i) sum += EntropyTerm(x[i], y[i]);
  return std::max(sum, 0.0);
}

ProbVector ToDistribution(const ParamVector &x, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("to_distribution: delta must be > 0");
  if (x.empty()) throw ValidationError("to_distribution: empty vector");
  std::vector<double> p(x.size());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = std::abs(x[i]) + delta;
    total += p[i];
  }
  for (double &v : p) v /= total;
  return ProbVector(std::move(p));
}

double KLDivergence(const ProbVector &p, const ProbVector &q) {
  CheckSameLength(p, q, "kl");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * std::log(p[i] / q[i]);
  // Rounding can push a near-zero divergence slightly negative.
  return std::max(sum, 0.0);
}

double Hellinger(const ProbVector &p, const ProbVector &q) {
  CheckSameLength(p, q, "hellinger");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += d * d;
  }
  return std::min(std::sqrt(sum) / std::numbers::sqrt2, 1.0);
}

double FisherRao(const ProbVector &p, const ProbVector &q) {
  CheckSameLength(p, q, "fisher");
  double overlap = 0.0;
  double mass_p = 0.0;
  double mass_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    overlap += std::sqrt(p[i] * q[i]);
    mass_p += p[i];
    mass_q += q[i];
  }
  // Dividing by the actual masses makes the coefficient exactly 1 for p == q,
  // where arccos is too ill-conditioned to absorb a last-bit error in the sums.
  const double coefficient = overlap / std::sqrt(mass_p * mass_q);
  return 2.0 * std::acos(std::clamp(coefficient, 0.0, 1.0));
}

double Distance(MetricKind kind, const ParamVector &x, const ParamVector &y, const MetricOptions &options) {
  switch (kind) {
    case MetricKind::kEuclidean:
      return Euclidean(x, y);
    case MetricKind::kManhattan:
      return Manhattan(x, y);
    case MetricKind::kCosine:
      return CosineDistance(x, y);
    case MetricKind::kBregman:
      return Bregman(x, y, options.generator);
    case MetricKind::kHellinger:
    case MetricKind::kKLDivergence:
    case MetricKind::kFisherRao:
      break;
  }
  asyncfl::CheckSameLength(x, y, "distance");
  const ProbVector p = ToDistribution(x, options.normalization_delta);
  const ProbVector q = ToDistribution(y, options.normalization_delta);
  if (kind == MetricKind::kHellinger) return Hellinger(p, q);
  if (kind == MetricKind::kKLDivergence) return KLDivergence(p, q);
  return FisherRao(p, q);
}

}  // namespace asyncfl
