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

#include "asyncfl/params.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "asyncfl/error.h"

namespace asyncfl {
namespace {

std::vector<double> CheckFinite(std::vector<double> values, const char *what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericError(std::string(what) + ": non-finite value at index " + std::to_string(i));
    }
  }
  return values;
}

}  // namespace

ParamVector::ParamVector(std::vector<double> values)
    : values_(CheckFinite(std::move(values), "ParamVector")) {}

ParamVector::ParamVector(std::initializer_list<double> values)
    : ParamVector(std::vector<double>(values)) {}

ParamVector ParamVector::Zeros(std::size_t length) {
  return ParamVector(std::vector<double>(length, 0.0));
}

void CheckSameLength(const ParamVector &a, const ParamVector &b, const char *what) {
  if (a.size() != b.size()) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
}

ParamVector Add(const ParamVector &a, const ParamVector &b) {
  CheckSameLength(a, b, "add");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return ParamVector(CheckFinite(std::move(out), "add"));
}

ParamVector Subtract(const ParamVector &a, const ParamVector &b) {
  CheckSameLength(a, b, "subtract");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return ParamVector(CheckFinite(std::move(out), "subtract"));
}

ParamVector Scale(const ParamVector &a, double c) {
  if (!std::isfinite(c)) throw NumericError("scale: non-finite factor");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return ParamVector(CheckFinite(std::move(out), "scale"));
}

ParamVector AddScaled(const ParamVector &a, double c, const ParamVector &b) {
  CheckSameLength(a, b, "add_scaled");
  if (!std::isfinite(c)) throw NumericError("add_scaled: non-finite factor");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + c * b[i];
  return ParamVector(CheckFinite(std::move(out), "add_scaled"));
}

double Dot(const ParamVector &a, const ParamVector &b) {
  CheckSameLength(a, b, "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double L2Norm(const ParamVector &a) {
  // Rescale by the largest magnitude so squares of large entries cannot overflow.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : a) {
    const double r = v / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

}  // namespace asyncfl
