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

#ifndef ASYNCFL_PARAMS_H_
#define ASYNCFL_PARAMS_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace asyncfl {

// Flat vector of finite doubles. The length is fixed at construction and every
// binary operation requires equal lengths; there is no broadcasting.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::vector<double> values);
  ParamVector(std::initializer_list<double> values);

  static ParamVector Zeros(std::size_t length);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const double *data() const { return values_.data(); }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const ParamVector &other) const = default;

 private:
  std::vector<double> values_;
};

void CheckSameLength(const ParamVector &a, const ParamVector &b, const char *what);

ParamVector Add(const ParamVector &a, const ParamVector &b);
ParamVector Subtract(const ParamVector &a, const ParamVector &b);
ParamVector Scale(const ParamVector &a, double c);
// a + c * b, evaluated element-wise in one pass.
ParamVector AddScaled(const ParamVector &a, double c, const ParamVector &b);

// Left-to-right accumulation; results are bit-reproducible.
double Dot(const ParamVector &a, const ParamVector &b);
double L2Norm(const ParamVector &a);

}  // namespace asyncfl

#endif  // ASYNCFL_PARAMS_H_
