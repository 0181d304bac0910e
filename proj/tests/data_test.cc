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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "asyncfl/data.h"
#include "asyncfl/error.h"
#include "asyncfl/rng.h"
#include "test_util.h"

namespace asyncfl {
namespace {

namespace fs = std::filesystem;

std::vector<int> BalancedLabels(std::size_t per_class, std::size_t classes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < classes; ++c) labels.insert(labels.end(), per_class, static_cast<int>(c));
  return labels;
}

double MaxClassShare(const std::vector<std::size_t> &shard, const std::vector<int> &labels, std::size_t classes) {
  std::vector<std::size_t> hist(classes, 0);
  for (std::size_t i : shard) ++hist[static_cast<std::size_t>(labels[i])];
  return static_cast<double>(*std::max_element(hist.begin(), hist.end())) / static_cast<double>(shard.size());
}

TEST(SynthBlobsTest, CountsAndDeterminism) {
  const Dataset a = SynthBlobs(50, 6, 4, 0.3, 9);
  EXPECT_EQ(a.size(), 200u);
  EXPECT_EQ(a.dim(), 6u);
  EXPECT_EQ(a.num_classes, 4u);
  for (int c = 0; c < 4; ++c) EXPECT_EQ(std::count(a.samples.labels.begin(), a.samples.labels.end(), c), 50);
  const Dataset b = SynthBlobs(50, 6, 4, 0.3, 9);
  EXPECT_EQ(a.samples.inputs, b.samples.inputs);
  EXPECT_EQ(a.samples.labels, b.samples.labels);
  EXPECT_NE(a.samples.inputs, SynthBlobs(50, 6, 4, 0.3, 10).samples.inputs);
}

TEST(SynthBlobsTest, TinySpreadIsSeparableByNearestMean) {
  for (std::size_t dim : {1u, 2u, 3u, 8u}) {
    const Dataset ds = SynthBlobs(20, dim, 5, 1e-6, 4);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const auto x = ds.view().row(i);
      std::size_t best = 0;
      double best_d = INFINITY;
      for (std::size_t c = 0; c < 5; ++c) {
        const auto m = BlobMean(dim, 5, c);
        double d = 0.0;
        for (std::size_t j = 0; j < dim; ++j) d += (x[j] - m[j]) * (x[j] - m[j]);
        if (d < best_d) best_d = d, best = c;
      }
      correct += static_cast<int>(best) == ds.samples.labels[i];
    }
    EXPECT_EQ(correct, ds.size()) << "dim " << dim;
  }
}

TEST(SynthBlobsTest, RejectsBadArguments) {
  EXPECT_THROW(SynthBlobs(0, 2, 2, 0.1, 1), ValidationError);
  EXPECT_THROW(SynthBlobs(2, 2, 2, 0.0, 1), ValidationError);
}

TEST(DirichletTest, ProportionsSumToOne) {
  testing::Gen gen(71);
  for (int trial = 0; trial < 500; ++trial) {
    const double alpha = std::exp(gen.Real(std::log(0.01), std::log(1000.0)));
    const auto p = SampleDirichlet(gen.Length(1, 30), alpha, static_cast<std::uint64_t>(trial));
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(LargestRemainderTest, ExactTotals) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  EXPECT_EQ(LargestRemainder(p, 10), (std::vector<std::size_t>{5, 3, 2}));
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_EQ(LargestRemainder(thirds, 4), (std::vector<std::size_t>{2, 1, 1}));
  testing::Gen gen(72);
  for (int trial = 0; trial < 300; ++trial) {
    const auto props = SampleDirichlet(gen.Length(1, 20), 0.5, static_cast<std::uint64_t>(trial));
    const std::size_t total = gen.Length(0, 500);
    const auto counts = LargestRemainder(props, total);
    std::size_t sum = 0;
    for (auto c : counts) sum += c;
    EXPECT_EQ(sum, total);
  }
}

TEST(DirichletPartitionTest, AxiomsHoldForRandomConfigurations) {
  testing::Gen gen(73);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t classes = gen.Length(1, 6);
    const auto labels = BalancedLabels(gen.Length(2, 40), classes);
    const std::size_t min_per_client = gen.Length(1, std::min<std::size_t>(3, labels.size()));
    const std::size_t max_clients = std::min<std::size_t>(30, labels.size() / min_per_client);
    const std::size_t clients = gen.Length(1, max_clients);
    const double alpha = std::exp(gen.Real(std::log(0.05), std::log(100.0)));
    const Partition part = DirichletPartition(labels, clients, alpha, static_cast<std::uint64_t>(trial), min_per_client);
    ASSERT_EQ(part.num_clients(), clients);
    EXPECT_NO_THROW(part.Check(labels.size(), min_per_client));
    for (const auto &shard : part.shards) EXPECT_TRUE(std::is_sorted(shard.begin(), shard.end()));
  }
}

TEST(DirichletPartitionTest, DeterministicPerSeed) {
  const auto labels = BalancedLabels(100, 4);
  const Partition a = DirichletPartition(labels, 10, 0.5, 3);
  EXPECT_EQ(a.shards, DirichletPartition(labels, 10, 0.5, 3).shards);
  EXPECT_NE(a.shards, DirichletPartition(labels, 10, 0.5, 4).shards);
}

TEST(DirichletPartitionTest, LargeAlphaIsNearlyIid) {
  const auto labels = BalancedLabels(100, 4);
  const Partition part = DirichletPartition(labels, 4, 1000.0, 2024);
  for (const auto &shard : part.shards) {
    std::vector<double> hist(4, 0.0);
    for (std::size_t i : shard) hist[static_cast<std::size_t>(labels[i])] += 1.0;
    const double uniform = static_cast<double>(shard.size()) / 4.0;
    for (double h : hist) EXPECT_LE(std::abs(h - uniform), 0.2 * uniform);
  }
}

TEST(DirichletPartitionTest, SmallAlphaIsSkewed) {
  const auto labels = BalancedLabels(100, 4);
  const Partition part = DirichletPartition(labels, 4, 0.1, 2024);
  double max_share = 0.0;
  for (const auto &shard : part.shards) max_share = std::max(max_share, MaxClassShare(shard, labels, 4));
  EXPECT_GT(max_share, 0.6);
}

TEST(DirichletPartitionTest, SkewGrowsAsAlphaShrinks) {
  const auto labels = BalancedLabels(100, 4);
  auto mean_max_share = [&](double alpha) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      for (const auto &shard : DirichletPartition(labels, 10, alpha, seed).shards) {
        total += MaxClassShare(shard, labels, 4);
        ++count;
      }
    }
    return total / static_cast<double>(count);
  };
  EXPECT_GT(mean_max_share(0.1), mean_max_share(10.0));
}

TEST(DirichletPartitionTest, Errors) {
  const auto labels = BalancedLabels(3, 2);
  EXPECT_THROW(DirichletPartition(labels, 7, 0.5, 1), ValidationError);
  EXPECT_THROW(DirichletPartition(labels, 4, 0.5, 1, 2), ValidationError);
  EXPECT_THROW(DirichletPartition(labels, 0, 0.5, 1), ValidationError);
  EXPECT_THROW(DirichletPartition(labels, 2, 0.0, 1), ValidationError);
}

TEST(PartitionCheckTest, DetectsViolations) {
  Partition p{{{0, 1}, {2}}};
  EXPECT_NO_THROW(p.Check(3));
  EXPECT_THROW(p.Check(4), ConsistencyError);
  EXPECT_THROW(p.Check(3, 2), ConsistencyError);
  Partition dup{{{0, 1}, {1, 2}}};
  EXPECT_THROW(dup.Check(3), ConsistencyError);
}

// IDX fixtures written byte by byte.
class IdxTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("asyncfl_idx_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static void Put32(std::vector<unsigned char> &out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<unsigned char>(v >> shift));
  }

  fs::path Write(const std::string &name, const std::vector<unsigned char> &bytes) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return path;
  }

  fs::path Images(std::uint32_t count, std::vector<unsigned char> pixels, std::uint32_t magic = kIdxImagesMagic) {
    std::vector<unsigned char> bytes;
    Put32(bytes, magic);
    Put32(bytes, count);
    Put32(bytes, 3);
    Put32(bytes, 3);
    bytes.insert(bytes.end(), pixels.begin(), pixels.end());
    return Write("images.idx", bytes);
  }

  fs::path Labels(std::vector<unsigned char> labels, std::uint32_t magic = kIdxLabelsMagic) {
    std::vector<unsigned char> bytes;
    Put32(bytes, magic);
    Put32(bytes, static_cast<std::uint32_t>(labels.size()));
    bytes.insert(bytes.end(), labels.begin(), labels.end());
    return Write("labels.idx", bytes);
  }

  static std::vector<unsigned char> TwoImages() {
    std::vector<unsigned char> px(18, 0);
    px[0] = 255;
    px[10] = 51;
    return px;
  }

  fs::path dir_;
};

TEST_F(IdxTest, LoadsTwoImagePair) {
  const Dataset ds = LoadIdx(Images(2, TwoImages()), Labels({3, 1}));
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.dim(), 9u);
  EXPECT_EQ(ds.samples.inputs[0], 1.0);
  EXPECT_EQ(ds.samples.inputs[1], 0.0);
  EXPECT_DOUBLE_EQ(ds.samples.inputs[10], 0.2);
  EXPECT_EQ(ds.samples.labels, (std::vector<int>{3, 1}));
  EXPECT_EQ(ds.num_classes, 4u);
}

TEST_F(IdxTest, CountMismatchIsConsistencyError) {
  std::vector<unsigned char> px(27, 7);
  EXPECT_THROW(LoadIdx(Images(3, px), Labels({0, 1})), ConsistencyError);
}

TEST_F(IdxTest, BadMagicIsFormatError) {
  EXPECT_THROW(LoadIdx(Images(2, TwoImages(), 0x00000802), Labels({0, 1})), FormatError);
  EXPECT_THROW(LoadIdx(Images(2, TwoImages()), Labels({0, 1}, 0x00000803)), FormatError);
}

TEST_F(IdxTest, TruncatedOrMissingIsIoError) {
  std::vector<unsigned char> short_px(10, 0);
  EXPECT_THROW(LoadIdx(Images(2, short_px), Labels({0, 1})), IoError);
  EXPECT_THROW(LoadIdx(dir_ / "nope", Labels({0, 1})), IoError);
  EXPECT_THROW(LoadIdx(Write("tiny", {0, 0}), Labels({0})), IoError);
}

}  // namespace
}  // namespace asyncfl
