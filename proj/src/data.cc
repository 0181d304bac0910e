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

#include "asyncfl/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "asyncfl/error.h"
#include "asyncfl/rng.h"

namespace asyncfl {
namespace {

std::vector<unsigned char> ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t ReadBigEndian32(const std::vector<unsigned char> &bytes, std::size_t offset,
                              const std::filesystem::path &path) {
  if (bytes.size() < offset + 4) throw IoError("truncated IDX header in " + path.string());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

}  // namespace

void Partition::Check(std::size_t n, std::size_t min_per_client) const {
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (std::size_t c = 0; c < shards.size(); ++c) {
    if (shards[c].size() < std::max<std::size_t>(min_per_client, 1)) {
      throw ConsistencyError("partition: client " + std::to_string(c) + " has too few samples");
    }
    for (std::size_t idx : shards[c]) {
      if (idx >= n) throw ConsistencyError("partition: index out of range");
      if (seen[idx]) throw ConsistencyError("partition: index assigned twice");
      seen[idx] = 1;
      ++total;
    }
  }
  if (total != n) throw ConsistencyError("partition: not every sample is assigned");
}

std::vector<double> BlobMean(std::size_t dim, std::size_t num_classes, std::size_t c) {
  std::vector<double> mean(dim, 0.0);
  if (dim >= num_classes) {
    mean[c] = 1.0;
  } else if (dim >= 2) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(num_classes);
    mean[0] = std::cos(angle);
    mean[1] = std::sin(angle);
  } else {
    mean[0] = static_cast<double>(c);
  }
  return mean;
}

Dataset SynthBlobs(std::size_t n_per_class, std::size_t dim, std::size_t num_classes, double spread,
                   std::uint64_t seed) {
  if (n_per_class < 1 || dim < 1 || num_classes < 1) throw ValidationError("synth_blobs: counts must be >= 1");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw ValidationError("synth_blobs: spread must be > 0");
  Dataset ds;
  ds.num_classes = num_classes;
  ds.samples.dim = dim;
  ds.samples.inputs.reserve(n_per_class * num_classes * dim);
  ds.samples.labels.reserve(n_per_class * num_classes);
  RngStream rng(DeriveKey(seed, StreamTag::kData));
  for (std::size_t c = 0; c < num_classes; ++c) {
    const std::vector<double> mean = BlobMean(dim, num_classes, c);
    for (std::size_t i = 0; i < n_per_class; ++i) {
      for (std::size_t j = 0; j < dim; ++j) ds.samples.inputs.push_back(rng.Normal(mean[j], spread));
      ds.samples.labels.push_back(static_cast<int>(c));
    }
  }
  return ds;
}

std::vector<double> SampleDirichlet(std::size_t k, double alpha, std::uint64_t key) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("dirichlet: alpha must be > 0");
  RngStream rng(key);
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> p(k);
  double sum = 0.0;
  for (double &v : p) {
    v = gamma(rng);
    sum += v;
  }
  // Every draw can underflow to zero for tiny alpha; fall back to uniform.
  if (!(sum > 0.0)) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  for (double &v : p) v /= sum;
  return p;
}

std::vector<std::size_t> LargestRemainder(std::span<const double> proportions, std::size_t counts_total) {
  std::vector<std::size_t> counts(proportions.size());
  std::vector<double> remainders(proportions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    const double exact = proportions[i] * static_cast<double>(counts_total);
    counts[i] = std::min(static_cast<std::size_t>(std::floor(exact)), counts_total - assigned);
    remainders[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(proportions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < counts_total; i = (i + 1) % order.size()) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

Partition DirichletPartition(std::span<const int> labels, std::size_t n_clients, double alpha, std::uint64_t seed,
                             std::size_t min_per_client) {
  if (n_clients < 1) throw ValidationError("dirichlet_partition: n_clients must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("dirichlet_partition: alpha must be > 0");
  const std::size_t n = labels.size();
  if (n_clients > n) {
    throw ValidationError("dirichlet_partition: " + std::to_string(n_clients) + " clients but only " +
                          std::to_string(n) + " samples");
  }
  const std::size_t floor_size = std::max<std::size_t>(min_per_client, 1);
  if (n_clients * floor_size > n) {
    throw ValidationError("dirichlet_partition: cannot give every client " + std::to_string(floor_size) +
                          " samples");
  }

  int max_label = -1;
  for (int label : labels) {
    if (label < 0) throw ValidationError("dirichlet_partition: negative label");
    max_label = std::max(max_label, label);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);

  Partition part;
  part.shards.resize(n_clients);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto &members = by_class[c];
    if (members.empty()) continue;
    const std::uint64_t class_key = DeriveKey(seed, StreamTag::kPartition, c);
    RngStream shuffle_rng(DeriveKey(class_key, 0));
    std::shuffle(members.begin(), members.end(), shuffle_rng);
    const std::vector<double> p = SampleDirichlet(n_clients, alpha, DeriveKey(class_key, 1));
    const std::vector<std::size_t> counts = LargestRemainder(p, members.size());
    std::size_t next = 0;
    for (std::size_t client = 0; client < n_clients; ++client) {
      for (std::size_t j = 0; j < counts[client]; ++j) part.shards[client].push_back(members[next++]);
    }
  }

  auto by_size = [](const auto &a, const auto &b) { return a.size() < b.size(); };
  for (;;) {
    auto smallest = std::min_element(part.shards.begin(), part.shards.end(), by_size);
    if (smallest->size() >= floor_size) break;
    auto largest = std::max_element(part.shards.begin(), part.shards.end(), by_size);
    smallest->push_back(largest->back());
    largest->pop_back();
  }
  for (auto &shard : part.shards) std::sort(shard.begin(), shard.end());
  return part;
}

Dataset LoadIdx(const std::filesystem::path &images_path, const std::filesystem::path &labels_path) {
  const std::vector<unsigned char> images = ReadFile(images_path);
  const std::vector<unsigned char> labels = ReadFile(labels_path);

  if (ReadBigEndian32(images, 0, images_path) != kIdxImagesMagic) {
    throw FormatError("bad IDX image magic in " + images_path.string());
  }
  if (ReadBigEndian32(labels, 0, labels_path) != kIdxLabelsMagic) {
    throw FormatError("bad IDX label magic in " + labels_path.string());
  }
  const std::size_t count = ReadBigEndian32(images, 4, images_path);
  const std::size_t rows = ReadBigEndian32(images, 8, images_path);
  const std::size_t cols = ReadBigEndian32(images, 12, images_path);
  const std::size_t label_count = ReadBigEndian32(labels, 4, labels_path);
  if (count != label_count) {
    throw ConsistencyError("IDX image count " + std::to_string(count) + " does not match label count " +
                           std::to_string(label_count));
  }
  const std::size_t dim = rows * cols;
  if (dim == 0) throw FormatError("IDX images have zero size");
  if (images.size() < 16 + count * dim) throw IoError("truncated IDX image data in " + images_path.string());
  if (labels.size() < 8 + count) throw IoError("truncated IDX label data in " + labels_path.string());

  Dataset ds;
  ds.samples.dim = dim;
  ds.samples.inputs.resize(count * dim);
  ds.samples.labels.resize(count);
  for (std::size_t i = 0; i < count * dim; ++i) ds.samples.inputs[i] = images[16 + i] / 255.0;
  int max_label = -1;
  for (std::size_t i = 0; i < count; ++i) {
    ds.samples.labels[i] = labels[8 + i];
    max_label = std::max(max_label, ds.samples.labels[i]);
  }
  ds.num_classes = static_cast<std::size_t>(max_label + 1);
  return ds;
}

}  // namespace asyncfl
