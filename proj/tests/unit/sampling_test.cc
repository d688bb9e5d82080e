// Copyright 2026 The MFT Tracker Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mft/sampling.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

namespace mft {
namespace {

ScalarMap MakeMap(int w, int h, std::vector<float> v) {
  return ScalarMap::FromData(w, h, std::move(v));
}

TEST(SampleScalar, SingleCell) {
  EXPECT_FLOAT_EQ(SampleScalar(MakeMap(1, 1, {0.7f}), {0, 0}), 0.7f);
}

TEST(SampleScalar, LinearInX) {
  EXPECT_FLOAT_EQ(SampleScalar(MakeMap(2, 1, {0, 1}), {0.25f, 0}), 0.25f);
}

TEST(SampleScalar, FourTapCenter) {
  // (1-.5)(1-.5)*0 + .5*.5*1 + .5*.5*2 + .5*.5*3 = 1.5
  EXPECT_FLOAT_EQ(SampleScalar(MakeMap(2, 2, {0, 1, 2, 3}), {0.5f, 0.5f}), 1.5f);
}

TEST(SampleScalar, RejectsNonFinitePosition) {
  const auto m = MakeMap(2, 2, {0, 1, 2, 3});
  EXPECT_THROW(SampleScalar(m, {std::numeric_limits<float>::quiet_NaN(), 0}), Error);
  EXPECT_THROW(SampleScalar(m, {0, std::numeric_limits<float>::infinity()}), Error);
}

TEST(SampleFlow, UniformField) {
  FlowField f(5, 4, Vec2{3, -1});
  EXPECT_EQ(SampleFlow(f, {1.3f, 2.7f}), (Vec2{3, -1}));
  EXPECT_EQ(SampleFlow(f, {4, 3}), (Vec2{3, -1}));
}

TEST(SampleFlow, MidpointOfRamp) {
  auto f = FlowField::FromData(2, 1, {{0, 0}, {2, 0}});
  EXPECT_EQ(SampleFlow(f, {0.5f, 0}), (Vec2{1, 0}));
}

TEST(SampleFlow, FourTapCorners) {
  auto f = FlowField::FromData(2, 2, {{0, 0}, {1, 0}, {0, 2}, {1, 2}});
  EXPECT_EQ(SampleFlow(f, {0.5f, 0.5f}), (Vec2{0.5f, 1.0f}));
}

TEST(BuildPositionMap, ZeroFlowIsIdentity) {
  const PositionMap p = BuildPositionMap(FlowField(2, 2));
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) EXPECT_EQ(p(x, y), (Vec2{float(x), float(y)}));
}

TEST(BuildPositionMap, SinglePixel) {
  auto f = FlowField::FromData(1, 1, {{5, -2}});
  EXPECT_EQ(BuildPositionMap(f)(0, 0), (Vec2{5, -2}));
}

TEST(BuildPositionMap, PerPixelAddition) {
  auto f = FlowField::FromData(3, 1, {{1, 0}, {1, 0}, {1, 0}});
  const PositionMap p = BuildPositionMap(f);
  EXPECT_EQ(p(0, 0), (Vec2{1, 0}));
  EXPECT_EQ(p(1, 0), (Vec2{2, 0}));
  EXPECT_EQ(p(2, 0), (Vec2{3, 0}));
}

TEST(OutOfBounds, BoundaryInclusive) {
  EXPECT_FALSE(OutOfBounds({0, 0}, 4, 4));
  EXPECT_FALSE(OutOfBounds({3.0f, 3.0f}, 4, 4));
  EXPECT_TRUE(OutOfBounds({-0.01f, 1}, 4, 4));
  EXPECT_TRUE(OutOfBounds({1, 3.01f}, 4, 4));
}

class SamplingProperties : public ::testing::Test {
 protected:
  std::mt19937 rng{1234};

  ScalarMap RandomMap(int w, int h) {
    std::uniform_real_distribution<float> v(-5, 5);
    ScalarMap m(w, h);
    for (auto& x : m.data()) x = v(rng);
    return m;
  }
};

TEST_F(SamplingProperties, IntegerPositionsAreExact) {
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarMap m = RandomMap(1 + trial % 7, 1 + trial % 5);
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x)
        ASSERT_EQ(SampleScalar(m, {float(x), float(y)}), m(x, y));
  }
}

TEST_F(SamplingProperties, ResultWithinNeighbourRange) {
  for (int trial = 0; trial < 2000; ++trial) {
    const ScalarMap m = RandomMap(6, 5);
    std::uniform_real_distribution<float> px(0, 5), py(0, 4);
    const Vec2 p{px(rng), py(rng)};
    const auto t = internal::MakeTap(p, 6, 5);
    const float vals[] = {m(t.x0, t.y0), m(t.x1, t.y0), m(t.x0, t.y1), m(t.x1, t.y1)};
    const float s = SampleScalar(m, p);
    ASSERT_GE(s, *std::min_element(vals, vals + 4));
    ASSERT_LE(s, *std::max_element(vals, vals + 4));
  }
}

TEST_F(SamplingProperties, OutsideClampsToNearestInBounds) {
  for (int trial = 0; trial < 2000; ++trial) {
    const ScalarMap m = RandomMap(6, 5);
    std::uniform_real_distribution<float> px(-10, 15), py(-10, 14);
    const Vec2 p{px(rng), py(rng)};
    const Vec2 clamped{std::clamp(p.x, 0.0f, 5.0f), std::clamp(p.y, 0.0f, 4.0f)};
    ASSERT_EQ(SampleScalar(m, p), SampleScalar(m, clamped));
  }
}

TEST_F(SamplingProperties, AffineFieldsAreReproducedExactly) {
  // Dyadic coefficients keep every intermediate exactly representable.
  FlowField f(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) f(x, y) = {0.25f * x - 0.125f * y + 1.5f, 0.0625f * x + 2.0f};
  std::uniform_int_distribution<int> q(0, 7 * 16);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 p{q(rng) / 16.0f, q(rng) / 16.0f};
    const Vec2 s = SampleFlow(f, p);
    ASSERT_EQ(s.x, 0.25f * p.x - 0.125f * p.y + 1.5f);
    ASSERT_EQ(s.y, 0.0625f * p.x + 2.0f);
  }
}

}  // namespace
}  // namespace mft
