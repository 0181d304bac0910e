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

#include "asyncfl/staleness.h"

#include <algorithm>
#include <cmath>

#include "asyncfl/error.h"

namespace asyncfl {

EpochRule EpochRule::Fixed(int k) {
  EpochRule rule;
  rule.kind = Kind::kFixed;
  rule.k = k;
  return rule;
}

EpochRule EpochRule::InverseStaleness(int k_ref, int k_min, int k_max) {
  EpochRule rule;
  rule.kind = Kind::kInverseStaleness;
  rule.k_ref = k_ref;
  rule.k_min = k_min;
  rule.k_max = k_max;
  return rule;
}

void EpochRule::Validate() const {
  if (kind == Kind::kFixed) {
    if (k < 1) throw ValidationError("epoch rule: k must be >= 1");
    return;
  }
  if (k_ref < 1 || k_min < 1 || k_max < 1) throw ValidationError("epoch rule: k_ref, k_min, k_max must be >= 1");
  if (k_min > k_max) throw ValidationError("epoch rule: k_min must be <= k_max");
}

void StalenessConfig::Validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("staleness.lambda must be > 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("staleness.epsilon must be > 0");
  if (!(normalization_delta > 0.0) || !std::isfinite(normalization_delta)) {
    throw ValidationError("staleness.delta must be > 0");
  }
  epoch_rule.Validate();
}

double ComputeStaleness(const StalenessConfig &cfg, const ModelSnapshot &current, const ModelSnapshot &base,
                        const ParamVector &delta) {
  if (current.version < base.version) throw ValidationError("staleness: base snapshot is newer than current");
  CheckSameLength(current.params, base.params, "staleness");
  CheckSameLength(current.params, delta, "staleness");
  const double drift = Distance(cfg.metric, current.params, base.params, cfg.metric_options());
  const double gamma = drift / std::max(L2Norm(delta), kUpdateNormFloor);
  if (!std::isfinite(gamma)) throw NumericError("staleness: non-finite gamma");
  return gamma;
}

double AdaptiveLearningRate(const StalenessConfig &cfg, double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("adaptive_lr: gamma must be >= 0");
  return cfg.lambda / (gamma + cfg.epsilon);
}

int AdjustLocalEpochs(const EpochRule &rule, double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("adjust_local_epochs: gamma must be >= 0");
  if (rule.kind == EpochRule::Kind::kFixed) return rule.k;
  const double target = std::round(static_cast<double>(rule.k_ref) / (1.0 + gamma));
  return static_cast<int>(std::clamp(target, static_cast<double>(rule.k_min), static_cast<double>(rule.k_max)));
}

}  // namespace asyncfl
