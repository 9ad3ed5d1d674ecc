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

#include "spu/qite.hpp"

namespace spu {
namespace {

TEST(Bessel, AgreesWithStandardLibraryAndFrozenValues) {
  EXPECT_NEAR(bessel_i(3, 2.5), 0.4743704087780359, 1e-15);
  EXPECT_NEAR(bessel_i(0, 19.34) / 22899231.80407197, 1.0, 1e-13);
  EXPECT_NEAR(bessel_i(40, 19.34) / 2.956332710006682e-08, 1.0, 1e-12);
  for (unsigned k : {0u, 1u, 5u, 20u, 60u})
    for (double x : {0.1, 1.0, 7.5, 19.3, 80.0})
      EXPECT_NEAR(bessel_i(k, x) / std::cyl_bessel_i(static_cast<double>(k), x), 1.0, 1e-12) << k << " " << x;
  EXPECT_EQ(bessel_i(0, 0.0), 1.0);
  EXPECT_EQ(bessel_i(3, 0.0), 0.0);
  EXPECT_THROW(bessel_i(2, -1.0), Error);
}

TEST(TruncationOrder, FrozenValues) {
  EXPECT_EQ(truncation_order(38.68222, 0.1), 82u);
  EXPECT_EQ(truncation_order(3.868, 0.002), 17u);
  EXPECT_EQ(truncation_order(0.0, 0.1), 5u);
  EXPECT_EQ(truncation_order(2.0, 0.002), 12u);
  EXPECT_EQ(truncation_order(1.0, 0.1), 6u);
  EXPECT_EQ(truncation_order(4.0, 0.1), 13u);
  EXPECT_THROW(truncation_order(1.0, 0.0), Error);
  EXPECT_THROW(truncation_order(-1.0, 0.1), Error);
}

TEST(Expansion, ProbabilitiesNormalizedAndCloseToExponential) {
  for (double beta : {0.0, 1.0, 4.0, 20.0}) {
    const auto e = build_expansion(beta, 0.01);
    double s = 0.0;
    for (double p : e.p) s += p;
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_LE(std::abs(e.c_norm1 - std::exp(beta / 2.0)), 0.01);
    for (double x = -1.0; x <= 1.0; x += 0.01) EXPECT_LE(std::abs(e.evaluate(x) - std::exp(-beta / 2.0 * x)), 0.01);
  }
}

TEST(Expansion, TruncatedOperatorMatchesSpectralFunction) {
  const auto h = build_tfi(3, 0.5);
  const auto e = build_expansion(3.0, 0.001);
  const auto f = truncated_operator(e, h);
  const Spectrum s(h);
  const auto exact = s.apply_function([](double x) { return std::exp(-1.5 * x); });
  EXPECT_LT((f - exact).cwiseAbs().maxCoeff(), 0.001 * 8);
}

TEST(Expansion, VectorFormMatchesOperator) {
  const auto h = build_tfi(3, 0.5);
  const auto e = build_expansion(2.0, 0.01);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Random(8);
  const auto [v, p] = qite_apply_truncated(e, h, psi);
  EXPECT_LT((v - truncated_operator(e, h) * psi / e.c_norm1).norm(), 1e-12);
  EXPECT_NEAR(p, v.squaredNorm(), 1e-14);
}

TEST(ConventionalLcu, CircuitMatchesDenseSeries) {
  const auto h = build_tfi(2, 0.9);
  const auto e = build_expansion(2.0, 0.002);
  ASSERT_EQ(e.d, 12u);
  const auto lcu = build_conventional_lcu(e, h);
  EXPECT_EQ(lcu.coefficient.count, 4u);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Random(4);
  psi.normalize();
  const auto [vc, pc] = qite_apply_circuit(lcu, 2, psi);
  const auto [vd, pd] = qite_apply_truncated(e, h, psi);
  EXPECT_LT((vc - vd).norm(), 1e-10);
  EXPECT_NEAR(pc, pd, 1e-10);
}

TEST(ConventionalLcu, RefusesOversizeCircuits) {
  EXPECT_THROW(build_conventional_lcu(build_expansion(2.0, 0.002), build_tfi(20, 0.5)), Error);
}

}  // namespace
}  // namespace spu
