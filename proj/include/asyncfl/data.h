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

#ifndef ASYNCFL_DATA_H_
#define ASYNCFL_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "asyncfl/batch.h"

namespace asyncfl {

struct Dataset {
  Batch samples;
  std::size_t num_classes = 0;

  std::size_t size() const { return samples.size(); }
  std::size_t dim() const { return samples.dim; }
  BatchView view() const { return samples.view(); }
};

// Per-client sample indices. Shards are disjoint, cover every sample, and are
// sorted ascending.
struct Partition {
  std::vector<std::vector<std::size_t>> shards;

  std::size_t num_clients() const { return shards.size(); }
  // Throws ConsistencyError unless the shards form a partition of [0, n) with
  // at least `min_per_client` samples each.
  void Check(std::size_t n, std::size_t min_per_client = 1) const;
};

// Isotropic Gaussian blobs with per-coordinate standard deviation `spread`.
// Class means are the unit simplex vertices e_c when dim >= num_classes,
// otherwise points on the unit circle (dim >= 2) or the integers (dim == 1).
// Samples are stored class by class.
Dataset SynthBlobs(std::size_t n_per_class, std::size_t dim, std::size_t num_classes, double spread,
                   std::uint64_t seed);

// Mean of class c used by SynthBlobs.
std::vector<double> BlobMean(std::size_t dim, std::size_t num_classes, std::size_t c);

// Proportions drawn from Dirichlet(alpha, ..., alpha) by normalizing Gamma(alpha, 1) draws.
std::vector<double> SampleDirichlet(std::size_t k, double alpha, std::uint64_t key);

// Splits `counts_total` into integer counts proportional to `proportions`
// using largest-remainder rounding; ties go to the lower index.
std::vector<std::size_t> LargestRemainder(std::span<const double> proportions, std::size_t counts_total);

inline constexpr std::size_t kDefaultMinPerClient = 2;

// Per-class Dirichlet split of the sample indices across clients. Shards below
// `min_per_client` are topped up with samples taken from the largest shard.
Partition DirichletPartition(std::span<const int> labels, std::size_t n_clients, double alpha, std::uint64_t seed,
                             std::size_t min_per_client = kDefaultMinPerClient);

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

// Reads an IDX image/label pair (e.g. Fashion-MNIST). Pixels are scaled to [0, 1].
Dataset LoadIdx(const std::filesystem::path &images_path, const std::filesystem::path &labels_path);

}  // namespace asyncfl

#endif  // ASYNCFL_DATA_H_
