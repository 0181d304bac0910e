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

#ifndef ASYNCFL_RNG_H_
#define ASYNCFL_RNG_H_

#include <cstdint>
#include <limits>

namespace asyncfl {

// Named consumers of randomness. Each gets its own stream derived from the
// root seed, so adding draws to one consumer never shifts another.
enum class StreamTag : std::uint64_t {
  kPartition = 1,
  kInit = 2,
  kShuffle = 3,
  kDelay = 4,
  kSpeed = 5,
  kData = 6,
};

std::uint64_t SplitMix64(std::uint64_t x);

// Derives an independent stream key from a parent key and up to two indices.
std::uint64_t DeriveKey(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0);
std::uint64_t DeriveKey(std::uint64_t root, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

// Counter-based generator: the n-th output is a pure function of (key, n).
// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1).
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal via the Box-Muller transform (one value per two uniforms).
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace asyncfl

#endif  // ASYNCFL_RNG_H_
