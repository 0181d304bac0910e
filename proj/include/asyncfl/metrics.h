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

#ifndef ASYNCFL_METRICS_H_
#define ASYNCFL_METRICS_H_

#include <array>
#include <string>
#include <string_view>

#include "asyncfl/params.h"

namespace asyncfl {

enum class MetricKind { kEuclidean, kManhattan, kCosine, kBregman, kHellinger, kKLDivergence, kFisherRao };

inline constexpr std::array<MetricKind, 7> kAllMetrics = {
    MetricKind::kEuclidean, MetricKind::kManhattan,    MetricKind::kCosine,   MetricKind::kBregman,
    MetricKind::kHellinger, MetricKind::kKLDivergence, MetricKind::kFisherRao};

// Lowercase names used in config files and CSV output:
// euclidean, manhattan, cosine, bregman, hellinger, kl, fisher.
std::string_view MetricName(MetricKind kind);
// Throws ValidationError listing the valid names when `name` is unknown.
MetricKind ParseMetricKind(std::string_view name);

// True for the metrics that compare normalized distributions rather than raw vectors.
bool IsProbabilistic(MetricKind kind);

// Separable convex generator phi(x) = sum_i f(x_i) for Bregman divergences.
enum class BregmanGenerator {
  kSquaredNorm,      // f(t) = t^2 / 2, any finite input
  kNegativeEntropy,  // f(t) = t ln t, strictly positive inputs only
};

std::string_view GeneratorName(BregmanGenerator generator);
BregmanGenerator ParseGenerator(std::string_view name);

// phi(x) and grad phi(x) for the given generator. Throws ValidationError
// outside the generator's domain.
double GeneratorValue(BregmanGenerator generator, const ParamVector &x);
ParamVector GeneratorGradient(BregmanGenerator generator, const ParamVector &x);

// A strictly positive vector summing to one (within 1e-9).
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

inline constexpr double kDefaultNormalizationDelta = 1e-12;

struct MetricOptions {
  double normalization_delta = kDefaultNormalizationDelta;
  BregmanGenerator generator = BregmanGenerator::kSquaredNorm;
};

double Euclidean(const ParamVector &x, const ParamVector &y);
double Manhattan(const ParamVector &x, const ParamVector &y);

// 1 - cos(x, y) in [0, 2]. Both zero -> 0; exactly one zero -> 1.
double CosineDistance(const ParamVector &x, const ParamVector &y);

// D(x, y) = phi(x) - phi(y) - <grad phi(y), x - y>, accumulated coordinate by
// coordinate so that D(x, x) is exactly zero.
double Bregman(const ParamVector &x, const ParamVector &y,
               BregmanGenerator generator = BregmanGenerator::kSquaredNorm);

// p_i = (|x_i| + delta) / sum_j (|x_j| + delta).
ProbVector ToDistribution(const ParamVector &x, double delta = kDefaultNormalizationDelta);

double KLDivergence(const ProbVector &p, const ProbVector &q);
double Hellinger(const ProbVector &p, const ProbVector &q);
// Geodesic distance on the simplex: 2 * arccos(sum_i sqrt(p_i q_i)), in [0, pi].
double FisherRao(const ProbVector &p, const ProbVector &q);

// Dispatch used by the staleness estimator. Probabilistic metrics normalize
// both arguments with ToDistribution first.
double Distance(MetricKind kind, const ParamVector &x, const ParamVector &y,
                const MetricOptions &options = {});

}  // namespace asyncfl

#endif  // ASYNCFL_METRICS_H_
