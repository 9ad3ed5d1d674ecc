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

#include <cmath>
#include <vector>

#include "spu/diagnostics.hpp"
#include "spu/random.hpp"

namespace spu {
namespace {

std::vector<double> ar1(double rho, std::size_t n, RandomStream& rng) {
  std::vector<double> x(n);
  double v = rng.normal() / std::sqrt(1.0 - rho * rho);
  for (auto& s : x) {
    v = rho * v + rng.normal();
    s = v;
  }
  return x;
}

TEST(MeanAndError, SmallSeries) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_and_error(x);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_THROW(mean_of(std::vector<double>{}), Error);
}

TEST(GelmanRubin, HandComputedTwoChains) {
  // means 2 and 5, grand 3.5; sum of squares 2 + 2 = 4; W = 4/(3*1); B = 3*4.5.
  const auto g = gelman_rubin({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
  EXPECT_NEAR(g.within, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.between, 13.5, 1e-14);
  EXPECT_NEAR(g.r_hat, std::sqrt((2.0 / 3.0 * 4.0 / 3.0 + 4.5) / (4.0 / 3.0)), 1e-14);
  EXPECT_FALSE(g.converged());
}

TEST(GelmanRubin, IdenticalChainsSitBelowOne) {
  const std::vector<double> c{0.3, -1.2, 0.8, 2.0, -0.4};
  const auto g = gelman_rubin({c, c});
  EXPECT_NEAR(g.r_hat, std::sqrt(4.0 / 5.0), 1e-14);
  EXPECT_TRUE(g.converged());
}

TEST(GelmanRubin, ConstantChainsAreDegenerate) {
  const auto g = gelman_rubin({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
  EXPECT_TRUE(g.degenerate);
  EXPECT_TRUE(g.converged());
}

TEST(GelmanRubin, InputChecks) {
  EXPECT_THROW(gelman_rubin({{1.0, 2.0}}), Error);
  EXPECT_THROW(gelman_rubin({{1.0, 2.0}, {1.0}}), Error);
}

TEST(GelmanRubin, IidChainsNearOne) {
  RandomStream rng(21);
  std::vector<std::vector<double>> c(2, std::vector<double>(10000));
  for (auto& s : c)
    for (auto& v : s) v = rng.normal();
  const auto g = gelman_rubin(c);
  EXPECT_GE(g.r_hat, 0.98);
  EXPECT_LE(g.r_hat, 1.05);
}

TEST(Relaxation, FindsWindowForSlowStart) {
  // Both chains relax from +/-5 towards 0 with rate 0.9 per step, plus noise.
  const ChainRunner run = [](std::uint64_t label, std::size_t steps) {
    RandomStream rng(3, {label});
    std::vector<double> x(steps);
    double v = label == 0 ? 5.0 : -5.0;
    for (auto& s : x) {
      v *= 0.9;
      s = v + rng.normal();
    }
    return x;
  };
  const auto rep = find_relaxation(run, 4, 200);
  EXPECT_TRUE(rep.converged);
  EXPECT_GE(rep.n_relax, 4u);
  EXPECT_LE(rep.n_relax, 60u);
}

TEST(Relaxation, ThrowsWhenNothingConverges) {
  const ChainRunner run = [](std::uint64_t label, std::size_t steps) {
    RandomStream rng(4, {label});
    std::vector<double> x(steps);
    for (auto& s : x) s = (label == 0 ? 10.0 : -10.0) + rng.normal();
    return x;
  };
  try {
    find_relaxation(run, 4, 40);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConverged);
  }
}

TEST(Labels, ReferenceStarts) {
  EXPECT_EQ(ferro_label(6), 0u);
  EXPECT_EQ(antiferro_label(6), 0b101010u);
  EXPECT_EQ(antiferro_label(3), 0b010u);
}

TEST(Jackknife, IdentityMatchesStandardError) {
  RandomStream rng(8);
  std::vector<double> x(4096);
  for (auto& v : x) v = rng.normal();
  const auto j = jackknife(x, 1);
  const auto m = mean_and_error(x);
  EXPECT_NEAR(j.mean, m.mean, 1e-12);
  EXPECT_NEAR(j.stderr_, m.stderr_, 1e-12);
}

TEST(Jackknife, NonlinearFunctionOfMean) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  // Leave-one-out means 3, 8/3, 7/3, 2; squares averaged.
  const auto j = jackknife(x, 1, [](double m) { return m * m; });
  const double f1 = (9.0 + 64.0 / 9.0 + 49.0 / 9.0 + 4.0) / 4.0;
  EXPECT_NEAR(j.mean, f1, 1e-14);
  EXPECT_THROW(jackknife(x, 3), Error);
}

TEST(Autocorrelation, IidSeriesHasHalfStep) {
  RandomStream rng(12);
  std::vector<double> x(1 << 16);
  for (auto& v : x) v = rng.normal();
  const auto a = autocorrelation_time(x);
  EXPECT_TRUE(a.saturated);
  EXPECT_LE(a.tau, 1.0);
}

TEST(Autocorrelation, Ar1WithinFactorTwo) {
  RandomStream rng(13);
  const double rho = 0.8;
  const auto x = ar1(rho, 1 << 20, rng);
  const auto a = autocorrelation_time(x);
  const double expect = (1.0 + rho) / (2.0 * (1.0 - rho));
  EXPECT_TRUE(a.saturated);
  EXPECT_GE(a.tau, expect / 2.0);
  EXPECT_LE(a.tau, expect * 2.0);
}

TEST(Autocorrelation, NeedsEnoughData) {
  EXPECT_THROW(autocorrelation_time(std::vector<double>(10, 1.0)), Error);
}

TEST(MedianOfMeans, HandValuesAndPartitions) {
  const std::vector<double> x{1, 2, 3, 100, 5, 6, 7};
  // Blocks of 2: (1.5, 51.5, 5.5); tail 7 dropped.
  EXPECT_DOUBLE_EQ(median_of_means(x, 3), 5.5);
  EXPECT_DOUBLE_EQ(median_of_means(x, 1), 124.0 / 7.0);
  EXPECT_THROW(median_of_means(x, 0), Error);
  EXPECT_THROW(median_of_means(x, 8), Error);
}

TEST(MedianOfMeans, BoundShape) {
  EXPECT_NEAR(median_of_means_bound(10, 100, 1.0, 0.3), std::exp(-20.0 * std::pow(0.5 - 1.0 / 9.0, 2)), 1e-15);
  EXPECT_EQ(median_of_means_bound(10, 1, 1.0, 0.3), 1.0);
}

TEST(Ratio, PropagationAndIndeterminate) {
  const auto r = ratio_error({2.0, 0.1}, {4.0, 0.2});
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  EXPECT_NEAR(r.stderr_, 0.5 * std::sqrt(0.05 * 0.05 * 2), 1e-15);
  EXPECT_FALSE(r.indeterminate);
  EXPECT_TRUE(ratio_error({1.0, 0.1}, {0.1, 0.1}).indeterminate);
  EXPECT_THROW(ratio_error({1.0, 0.1}, {0.0, 0.1}), Error);
}

}  // namespace
}  // namespace spu
