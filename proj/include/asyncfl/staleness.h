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

#ifndef ASYNCFL_STALENESS_H_
#define ASYNCFL_STALENESS_H_

#include <cstdint>
#include <string>

#include "asyncfl/metrics.h"
#include "asyncfl/params.h"

namespace asyncfl {

// How many local epochs a client runs given its most recent staleness.
struct EpochRule {
  enum class Kind { kFixed, kInverseStaleness };

  Kind kind = Kind::kFixed;
  int k = 3;  // Fixed(K)
  int k_ref = 8;
  int k_min = 1;
  int k_max = 8;

  static EpochRule Fixed(int k);
  static EpochRule InverseStaleness(int k_ref, int k_min, int k_max);

  void Validate() const;
};

inline constexpr double kDefaultLambda = 0.5;
inline constexpr double kDefaultEpsilon = 0.1;
// Floor on the update norm in the staleness denominator.
inline constexpr double kUpdateNormFloor = 1e-12;

struct StalenessConfig {
  MetricKind metric = MetricKind::kEuclidean;
  double lambda = kDefaultLambda;
  double epsilon = kDefaultEpsilon;
  double normalization_delta = kDefaultNormalizationDelta;
  BregmanGenerator generator = BregmanGenerator::kSquaredNorm;
  EpochRule epoch_rule;

  MetricOptions metric_options() const { return {normalization_delta, generator}; }
  void Validate() const;
};

// A versioned global model.
struct ModelSnapshot {
  std::uint64_t version = 0;
  ParamVector params;
  double vtime = 0.0;
};

// gamma = D(current, base) / max(||delta||_2, kUpdateNormFloor).
double ComputeStaleness(const StalenessConfig &cfg, const ModelSnapshot &current, const ModelSnapshot &base,
                        const ParamVector &delta);

// eta = lambda / (gamma + epsilon).
double AdaptiveLearningRate(const StalenessConfig &cfg, double gamma);

// Fixed(K) -> K; InverseStaleness -> clamp(round(K_ref / (1 + gamma)), K_min, K_max).
int AdjustLocalEpochs(const EpochRule &rule, double gamma);

}  // namespace asyncfl

#endif  // ASYNCFL_STALENESS_H_
