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

#include "spu/hamiltonian.hpp"

namespace spu {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PauliString, MasksAndLabel) {
  const auto s = PauliString::on_sites(4, {{1, Pauli::X}, {2, Pauli::Y}, {4, Pauli::Z}});
  EXPECT_EQ(s.x_mask(), 0b0011u);
  EXPECT_EQ(s.z_mask(), 0b1010u);
  EXPECT_EQ(s.y_count(), 1u);
  EXPECT_EQ(s.weight(), 3u);
  EXPECT_EQ(s.label(), "XYIZ");
  EXPECT_THROW(PauliString::on_sites(3, {{4, Pauli::X}}), Error);
}

TEST(PauliString, ActionMatchesKroneckerMatrices) {
  // Y on site 1 maps |0> to i|1> and |1> to -i|0>.
  const auto y = pauli_matrix(PauliString::on_sites(1, {{1, Pauli::Y}}));
  EXPECT_NEAR(std::abs(y(1, 0) - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(y(0, 1) - cplx(0, -1)), 0.0, 1e-15);
  // Z on site 2 of two sites: sign set by bit 1.
  const auto z = pauli_matrix(PauliString::on_sites(2, {{2, Pauli::Z}}));
  EXPECT_DOUBLE_EQ(z(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(z(1, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(z(2, 2).real(), -1.0);
  EXPECT_DOUBLE_EQ(z(3, 3).real(), -1.0);
}

TEST(TransverseFieldRing, TermLayoutAndNorm) {
  const auto h = build_tfi(5, kPi / 3.0);
  ASSERT_EQ(h.term_count(), 10u);
  EXPECT_NEAR(h.one_norm(), 1.0, 1e-15);
  EXPECT_NEAR(h.terms()[0].coefficient, std::pow(std::cos(kPi / 6.0), 2) / 5.0, 1e-15);
  EXPECT_NEAR(h.terms()[5].coefficient, std::pow(std::sin(kPi / 6.0), 2) / 5.0, 1e-15);
  EXPECT_EQ(h.terms()[4].string.label(), "XIIIX");  // wrap-around bond
  EXPECT_EQ(h.terms()[7].string.label(), "IIYII");
  EXPECT_THROW(build_tfi(1, 0.3), Error);
  EXPECT_THROW(build_tfi(3, -0.1), Error);
}

TEST(TransverseFieldRing, SparseApplyMatchesDense) {
  const auto h = build_tfi(4, 0.7);
  const auto d = to_dense(h);
  EXPECT_TRUE(d.is_hermitian(1e-14));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(16);
  EXPECT_LT((h.apply(v) - d.matrix * v).norm(), 1e-14);
}

TEST(TransverseFieldRing, FrozenCanonicalEnergies) {
  // Independent Kronecker-product oracle, N = 4, theta = pi/3.
  const auto h = build_tfi(4, kPi / 3.0);
  const auto d = to_dense(h);
  EXPECT_NEAR(exact_canonical_average(h, d, 0.0), 0.0, 1e-14);
  EXPECT_NEAR(exact_canonical_average(h, d, 0.5), -0.07843244342200521, 1e-12);
  EXPECT_NEAR(exact_canonical_average(h, d, 2.0), -0.32354863841295656, 1e-12);
  EXPECT_NEAR(exact_canonical_average(h, d, 5.0), -0.6795615130082333, 1e-12);
  const Spectrum s(h);
  EXPECT_NEAR(s.values().minCoeff(), -0.7716740150910845, 1e-12);
}

TEST(TransverseFieldRing, EnergyDecreasesWithBeta) {
  const auto h = build_tfi(5, kPi / 8.0);
  const Spectrum s(h);
  const auto d = to_dense(h);
  double prev = s.canonical_average(d, 0.0);
  for (double b = 0.5; b <= 40.0; b += 0.5) {
    const double e = s.canonical_average(d, b);
    EXPECT_LT(e, prev + 1e-14);
    prev = e;
  }
  // The gap is O(1/N) on the unit-norm scale; check the limit far out.
  EXPECT_NEAR(s.canonical_average(d, 1e4), s.values().minCoeff(), 1e-9);
}

TEST(TransverseFieldRing, LargeBetaDoesNotUnderflow) {
  const auto h = build_tfi(3, 1.0);
  const double e = exact_canonical_average(h, to_dense(h), 1e4);
  EXPECT_TRUE(std::isfinite(e));
}

TEST(Rescale, PureFieldHasUnitMaximum) {
  EXPECT_NEAR(rescale_report(build_tfi(5, kPi)).e_max, 1.0, 1e-12);
  EXPECT_NEAR(rescale_report(build_tfi(4, kPi / 3.0)).e_max, 0.7716740150910845, 1e-12);
}

TEST(Rescale, TemperatureMap) {
  EXPECT_NEAR(beta_from_temperature(300.0, 1.0), 38.68172707248529, 1e-10);
  EXPECT_NEAR(beta_from_temperature(300.0, 0.1), 3.8681727072485286, 1e-12);
  EXPECT_THROW(beta_from_temperature(0.0, 1.0), Error);
}

TEST(DenseGuard, RejectsLargeModelsAndNonHermitian) {
  EXPECT_THROW(require_dense(15), Error);
  try {
    require_dense(20);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OracleSize);
  }
  DenseOperator bad{Eigen::MatrixXcd::Zero(2, 2), "bad"};
  bad.matrix(0, 1) = 1.0;
  EXPECT_THROW(require_hermitian(bad), Error);
}

TEST(Observables, FieldObservableIsNormalized) {
  const auto f = field_observable(3);
  const Spectrum s(f);
  EXPECT_NEAR(s.values().maxCoeff(), 1.0, 1e-12);
  EXPECT_NEAR(s.values().minCoeff(), -1.0, 1e-12);
}

}  // namespace
}  // namespace spu
