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
#include <numbers>

#include "spu/mcmc_spu.hpp"

namespace spu {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PairPlanner, HoeffdingCount) {
  const auto e = build_expansion(2.0, 0.002);
  const double l4 = std::pow(e.c_norm1, 4.0);
  EXPECT_EQ(required_pairs(0.1, 0.05, e), static_cast<std::uint64_t>(std::ceil(l4 * std::log(40.0) / 0.02)));
  EXPECT_THROW(required_pairs(0.0, 0.05, e), Error);
}

TEST(PairPlanner, SampledOrdersFollowExpansion) {
  const auto e = build_expansion(4.0, 0.01);
  RandomStream rng(11);
  std::vector<double> hits(e.d + 1, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits[sample_pair(e, rng).m] += 1.0 / n;
  for (std::size_t k = 0; k <= e.d; ++k) EXPECT_NEAR(hits[k], e.p[k], 0.006);
}

TEST(Engines, CircuitAndDenseBranchesAgree) {
  const auto h = build_tfi(2, kPi / 3.0);
  const auto e = build_expansion(2.0, 0.01);
  const auto obs = to_dense(h);
  const DenseSpuEngine dense(h, e, obs);
  const CircuitSpuEngine circ(h, obs);
  for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {2, 1}, {4, 4}, {1, 5}}) {
    for (int k = 0; k < 2; ++k) {
      const auto a = dense.kernel(m, n, k);
      const auto b = circ.kernel(m, n, k);
      for (std::uint64_t i = 0; i < 4; ++i) {
        const Branch x = a->branch(i), y = b->branch(i);
        EXPECT_NEAR(x.weight, y.weight, 1e-10);
        EXPECT_LT((x.phi - y.phi).norm(), 1e-10);
        if (x.weight > 1e-9) {
          EXPECT_NEAR(x.observable, y.observable, 1e-9);
        }
      }
    }
  }
}

TEST(Engines, EqualOrderOddBranchVanishes) {
  const auto h = build_tfi(3, 0.7);
  const auto obs = to_dense(h);
  const CircuitSpuEngine circ(h, obs);
  for (std::size_t m : {0u, 1u, 3u}) {
    const auto k = circ.circuit_kernel(m, m, 1);
    for (std::uint64_t i = 0; i < 8; ++i) EXPECT_LT(k->branch(i).weight, 1e-24);
  }
}

TEST(Engines, OutcomeDistributionSumsToOne) {
  const auto h = build_tfi(2, 0.7);
  const CircuitSpuEngine circ(h, to_dense(h));
  const auto k = circ.circuit_kernel(2, 3, 0);
  double s = 0.0;
  for (double p : k->outcome_distribution(1)) s += p;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Chain, TransitionMatrixFixesWeights) {
  const auto h = build_tfi(3, kPi / 3.0);
  const auto e = build_expansion(3.0, 0.01);
  const DenseSpuEngine eng(h, e, to_dense(h));
  for (auto [m, n, k] : std::vector<std::tuple<std::size_t, std::size_t, int>>{{1, 2, 0}, {2, 3, 1}, {0, 3, 0}}) {
    const auto kern = eng.kernel(m, n, k);
    const Eigen::MatrixXd p = spu_transition_matrix(*kern);
    const Eigen::VectorXd pi = spu_stationary_weights(*kern);
    EXPECT_LT((p.transpose() * pi - pi).cwiseAbs().sum(), 1e-10);
  }
}

TEST(Chain, DeadStartThrows) {
  const auto h = build_tfi(2, 0.5);
  const auto e = build_expansion(1.0, 0.1);
  const DenseSpuEngine eng(h, e, to_dense(h));
  SpuOptions opt;
  RandomStream rng(1);
  EXPECT_THROW(run_chain(*eng.kernel(1, 1, 1), 1, 1, 1, 0, opt, rng), Error);
}

TEST(Pairs, DeterministicForAnyWorkerCount) {
  const auto h = build_tfi(3, kPi / 8.0);
  const auto e = build_expansion(1.0, 0.01);
  const DenseSpuEngine eng(h, e, to_dense(h));
  SpuOptions opt;
  opt.chain_steps = 80;
  opt.burn_in = 10;
  opt.z_samples = 8;
  const SpuRun run{77, 3};
  const auto a = run_pairs(eng, e, opt, run, 60, 1);
  const auto b = run_pairs(eng, e, opt, run, 60, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    EXPECT_EQ(a[p].pair.m, b[p].pair.m);
    EXPECT_EQ(a[p].numerator(), b[p].numerator());
    EXPECT_EQ(a[p].denominator(), b[p].denominator());
  }
  // Any single record can be replayed from its keys.
  const auto again = run_pair(eng, e, opt, run, 17);
  EXPECT_EQ(again.numerator(), a[17].numerator());
}

TEST(Pairs, EqualOrderPairsHaveNoOddRecord) {
  const auto h = build_tfi(2, 0.5);
  const auto e = build_expansion(0.5, 0.1);
  const DenseSpuEngine eng(h, e, to_dense(h));
  SpuOptions opt;
  opt.chain_steps = 20;
  opt.burn_in = 5;
  opt.z_samples = 4;
  const auto recs = run_pairs(eng, e, opt, SpuRun{1, 0}, 200);
  int equal = 0;
  for (const auto& r : recs) {
    if (r.pair.m != r.pair.n) continue;
    ++equal;
    EXPECT_FALSE(r.branch[1].has_chain);
    EXPECT_EQ(r.branch[1].signed_denominator(), 0.0);
  }
  EXPECT_GT(equal, 0);
}

TEST(Exhaustive, EqualsTruncatedTraceRatio) {
  // Independent oracle: Tr[F H F] / Tr[F F] for the truncated series F.
  const auto h = build_tfi(3, kPi / 8.0);
  const auto e = build_expansion(2.0, 0.002);
  const DenseSpuEngine eng(h, e, to_dense(h));
  const auto t = exhaustive_estimate(eng, e);
  EXPECT_NEAR(t.value, -0.2893809472069089, 1e-10);
  EXPECT_LE(std::abs(t.value - exact_canonical_average(h, to_dense(h), 2.0)), t.truncation_band);
}

TEST(Sampled, AgreesWithExactWithinErrorBars) {
  const auto h = build_tfi(3, kPi / 8.0);
  const auto obs = to_dense(h);
  const auto e = build_expansion(1.0, 0.002);
  const DenseSpuEngine eng(h, e, obs);
  SpuOptions opt;
  opt.chain_steps = 120;
  opt.burn_in = 20;
  opt.z_samples = 16;
  const auto recs = run_pairs(eng, e, opt, SpuRun{5, 0}, 4000);
  const auto t = combine(recs, e);
  const double exact = exact_canonical_average(h, obs, 1.0);
  EXPECT_LE(std::abs(t.value - exact), 4.0 * t.stat_error + t.truncation_band);
  EXPECT_GT(t.stat_error, 0.0);
}

TEST(Survey, EqualOrderOddIsZeroAndMeansAreProbabilities) {
  const auto rows = postselection_survey(build_tfi(3, kPi / 6.0), {1.0, 5.0}, 0.1);
  for (const auto& r : rows) {
    EXPECT_LT(r.max_equal_order_odd, 1e-12);
    EXPECT_GT(r.mean, 0.0);
    EXPECT_LE(r.mean, 1.0);
    EXPECT_EQ(r.entries, 2 * (r.d + 1) * (r.d + 1) - (r.d + 1));
  }
}

}  // namespace
}  // namespace spu
