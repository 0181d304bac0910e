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

#include "asyncfl/error.h"
#include "asyncfl/params.h"
#include "test_util.h"

namespace asyncfl {
namespace {

TEST(ParamVectorTest, RejectsNonFiniteEntries) {
  EXPECT_THROW(ParamVector({1.0, std::nan("")}), NumericError);
  EXPECT_THROW(ParamVector({INFINITY}), NumericError);
}

TEST(ParamVectorTest, Add) {
  EXPECT_EQ(Add({1, 2}, {3, 4}), ParamVector({4, 6}));
  const ParamVector x{1.5, -2.0, 3.25};
  EXPECT_EQ(Add(x, ParamVector::Zeros(3)), x);
}

TEST(ParamVectorTest, AddOverflowIsAnError) {
  EXPECT_THROW(Add({1e308, 0}, {1e308, 0}), NumericError);
}

TEST(ParamVectorTest, LengthMismatchIsAnError) {
  EXPECT_THROW(Add({1, 2}, {1, 2, 3}), ValidationError);
  EXPECT_THROW(Subtract({1}, {1, 2}), ValidationError);
  EXPECT_THROW(Dot({1}, {1, 2}), ValidationError);
  EXPECT_THROW(AddScaled({1}, 2.0, {1, 2}), ValidationError);
}

TEST(ParamVectorTest, Scale) {
  EXPECT_EQ(Scale({1, -2}, 0.5), ParamVector({0.5, -1}));
  const ParamVector x{0.1, -7.0, 3.0};
  EXPECT_EQ(Scale(x, 1.0), x);
  EXPECT_EQ(Scale(x, 0.0), ParamVector::Zeros(3));
  EXPECT_THROW(Scale(x, INFINITY), NumericError);
  EXPECT_THROW(Scale({1e300}, 1e10), NumericError);
}

TEST(ParamVectorTest, L2Norm) {
  EXPECT_EQ(L2Norm({3, 4}), 5.0);
  EXPECT_EQ(L2Norm(ParamVector::Zeros(4)), 0.0);
  EXPECT_EQ(L2Norm({1, 1, 1, 1}), 2.0);
  // No intermediate overflow for large entries.
  EXPECT_DOUBLE_EQ(L2Norm({3e200, 4e200}), 5e200);
}

TEST(ParamVectorTest, NormIsAbsolutelyHomogeneous) {
  testing::Gen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    const ParamVector x = gen.Vector(gen.Length(1, 64));
    const double c = gen.Real(-10.0, 10.0);
    EXPECT_LE(testing::RelErr(L2Norm(Scale(x, c)), std::abs(c) * L2Norm(x)), 1e-12);
  }
}

TEST(ParamVectorTest, NormZeroOnlyForZeroVector) {
  EXPECT_GT(L2Norm({0, 0, 1e-300}), 0.0);
  EXPECT_EQ(L2Norm({0, 0, 0}), 0.0);
}

TEST(ParamVectorTest, AccumulationIsBitReproducible) {
  testing::Gen gen(12);
  const ParamVector a = gen.Vector(1000);
  const ParamVector b = gen.Vector(1000);
  const double first = Dot(a, b);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(Dot(a, b), first);
  EXPECT_EQ(Add(a, b), Add(b, a));
}

TEST(ParamVectorTest, AddScaledMatchesScaleThenAdd) {
  const ParamVector a{1, 2, 3};
  const ParamVector b{-1, 0.5, 4};
  EXPECT_EQ(AddScaled(a, 2.0, b), Add(a, Scale(b, 2.0)));
}

}  // namespace
}  // namespace asyncfl
