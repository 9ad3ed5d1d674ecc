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

#include "spu/circuit.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/simulator.hpp"

namespace spu {
namespace {

Eigen::VectorXcd to_vec(const QuantumState& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

TEST(Simulator, HadamardAndControlledX) {
  Circuit c(2);
  c.add(hadamard(0)).add(with_controls(pauli_x(1), {{0, true}}));
  const auto s = apply_circuit(QuantumState(2, 0), c);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s[0] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[3] - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-15);
}

TEST(Simulator, ActiveLowControl) {
  Circuit c(2);
  c.add(with_controls(pauli_x(1), {{0, false}}));
  EXPECT_NEAR(std::abs(apply_circuit(QuantumState(2, 0), c)[2]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(apply_circuit(QuantumState(2, 1), c)[1]), 1.0, 1e-15);
}

TEST(Simulator, PauliProductMatchesDenseString) {
  const auto p = PauliString::on_sites(3, {{1, Pauli::Y}, {2, Pauli::Z}, {3, Pauli::X}});
  Circuit c(3);
  c.add(pauli_product(p, 0));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(8);
  const auto out = apply_circuit(QuantumState::embed(3, v), c);
  EXPECT_LT((to_vec(out) - pauli_matrix(p) * v).norm(), 1e-14);
}

TEST(Simulator, InverseUndoesCircuit) {
  Circuit c(3);
  c.add(hadamard(0)).add(rotation(Axis::Y, 1, 0.37)).add(phase(2, 0.9));
  c.add(with_controls(rotation(Axis::X, 2, 1.1), {{0, true}, {1, false}}));
  c.add(pauli_product(PauliString::on_sites(3, {{1, Pauli::Y}, {3, Pauli::Y}}), 0));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(8);
  v.normalize();
  auto s = apply_circuit(QuantumState::embed(3, v), c);
  s = apply_circuit(std::move(s), c.inverse());
  EXPECT_LT((to_vec(s) - v).norm(), 1e-13);
}

TEST(Simulator, ResetHasNoInverse) {
  Circuit c(1);
  c.add(reset(0));
  EXPECT_THROW(static_cast<void>(c.inverse()), Error);
}

TEST(Simulator, ResetReturnsQubitToZero) {
  Circuit c(1);
  c.add(hadamard(0)).add(reset(0));
  RandomStream rng(1);
  const auto s = apply_circuit(QuantumState(1, 0), c, &rng);
  EXPECT_NEAR(std::norm(s[0]), 1.0, 1e-14);
}

TEST(Simulator, PostselectReturnsProbability) {
  Circuit c(2);
  c.add(rotation(Axis::Y, 1, 2.0 * std::acos(std::sqrt(0.3))));
  auto [proj, p] = postselect(apply_circuit(QuantumState(2, 0), c), Register{"A", 1, 1}, 0);
  EXPECT_NEAR(p, 0.3, 1e-14);
  EXPECT_NEAR(proj.norm2(), 0.3, 1e-14);
}

TEST(Simulator, OutcomeProbabilitiesSumToOne) {
  Circuit c(3);
  c.add(hadamard(0)).add(hadamard(1)).add(rotation(Axis::Y, 2, 0.4));
  const auto s = apply_circuit(QuantumState(3, 0), c);
  const auto p = outcome_probabilities(s, Register{"R", 1, 2});
  double t = 0.0;
  for (double v : p) t += v;
  EXPECT_NEAR(t, 1.0, 1e-14);
}

TEST(Simulator, ExpectationOfHamiltonianAgreesWithDense) {
  const auto h = build_tfi(3, 0.9);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(8);
  v.normalize();
  const auto s = QuantumState::embed(4, v);  // one idle ancilla
  const double dense = v.dot(to_dense(h).matrix * v).real();
  EXPECT_NEAR(expectation(s, h), dense, 1e-13);
  EXPECT_NEAR(expectation(s, to_dense(h)), dense, 1e-13);
}

TEST(Simulator, ShotSamplingIsUnbiased) {
  RandomStream rng(9);
  double s = 0.0;
  for (int i = 0; i < 2000; ++i) s += sample_probability(0.37, 100, rng);
  EXPECT_NEAR(s / 2000.0, 0.37, 0.005);
}

TEST(Simulator, CircuitRejectsOverlappingQubits) {
  Circuit c(2);
  EXPECT_THROW(c.add(with_controls(pauli_x(0), {{0, true}})), Error);
  EXPECT_THROW(c.add(hadamard(2)), Error);
}

}  // namespace
}  // namespace spu
