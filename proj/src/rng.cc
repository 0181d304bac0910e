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

#include "asyncfl/rng.h"

#include <cmath>
#include <numbers>

namespace asyncfl {
namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveKey(std::uint64_t parent, std::uint64_t a, std::uint64_t b) {
  std::uint64_t k = SplitMix64(parent ^ 0x5851f42d4c957f2dULL);
  k = SplitMix64(k ^ SplitMix64(a + 0x14057b7ef767814fULL));
  return SplitMix64(k ^ SplitMix64(b + 0x2545f4914f6cdd1dULL));
}

std::uint64_t DeriveKey(std::uint64_t root, StreamTag tag, std::uint64_t a, std::uint64_t b) {
  return DeriveKey(DeriveKey(root, static_cast<std::uint64_t>(tag)), a, b);
}

RngStream::result_type RngStream::operator()() {
  return SplitMix64(key_ + kGolden * ++counter_);
}

double RngStream::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::Normal() {
  // 1 - U lies in (0, 1], keeping log() finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace asyncfl
