// Copyright 2026 The spu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "spu/random.hpp"

namespace spu {
namespace {

TEST(RandomStream, SameKeyPathSameDraws) {
  RandomStream a(42, {1, 2, 3});
  RandomStream b(42, {1, 2, 3});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, SubstreamMatchesDirectConstruction) {
  const RandomStream parent(7, {5});
  RandomStream via = parent.substream({9, 11});
  RandomStream direct(7, {5, 9, 11});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(via.next_u64(), direct.next_u64());
}

TEST(RandomStream, DistinctKeysDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint64_t k = 0; k < 1000; ++k) first.insert(RandomStream(1, {k}).next_u64());
  EXPECT_EQ(first.size(), 1000u);
  EXPECT_NE(RandomStream(1, {0}).next_u64(), RandomStream(2, {0}).next_u64());
}

TEST(RandomStream, UniformInUnitInterval) {
  RandomStream r(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(RandomStream, BelowCoversRangeEvenly) {
  RandomStream r(4);
  std::vector<int> hits(6, 0);
  for (int i = 0; i < 60000; ++i) ++hits[r.below(6)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 400);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(RandomStream, CategoricalFollowsWeightsAndSkipsZeros) {
  RandomStream r(5);
  const std::vector<double> w{0.0, 1.0, 3.0, 0.0};
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 40000; ++i) ++hits[r.categorical(w)];
  EXPECT_EQ(hits[0], 0);
  EXPECT_EQ(hits[3], 0);
  EXPECT_NEAR(hits[2] / 40000.0, 0.75, 0.01);
}

TEST(RandomStream, NormalMoments) {
  RandomStream r(6);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

}  // namespace
}  // namespace spu
