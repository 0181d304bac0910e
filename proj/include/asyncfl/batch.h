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

#ifndef ASYNCFL_BATCH_H_
#define ASYNCFL_BATCH_H_

#include <cstddef>
#include <span>
#include <vector>

namespace asyncfl {

// Non-owning view of n samples: row-major inputs (n x dim) and n labels.
struct BatchView {
  std::span<const double> inputs;
  std::span<const int> labels;
  std::size_t dim = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return inputs.subspan(i * dim, dim); }
};

// Owning samples with the same layout.
struct Batch {
  std::vector<double> inputs;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::size_t size() const { return labels.size(); }
  BatchView view() const { return {inputs, labels, dim}; }
};

}  // namespace asyncfl

#endif  // ASYNCFL_BATCH_H_
