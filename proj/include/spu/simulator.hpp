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

#pragma once

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spu/circuit.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/random.hpp"

namespace spu {

/// Fixed-order pairwise sum, so reductions do not depend on how work was
/// split between threads.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

/// Dense amplitude vector over the whole register. May be unnormalized (after
/// a postselection); norm2() reports the tracked weight.
class QuantumState {
 public:
  QuantumState() = default;

  explicit QuantumState(std::size_t n_qubits, std::uint64_t basis = 0)
      : n_qubits_(n_qubits), amp_(std::size_t{1} << n_qubits) {
    if (n_qubits > 30) throw Error(ErrorKind::OracleSize, "statevector limited to 30 qubits");
    if (basis >= amp_.size()) throw Error(ErrorKind::Layout, "basis label outside register");
    amp_[basis] = 1.0;
  }

  QuantumState(std::size_t n_qubits, std::vector<cplx> amplitudes)
      : n_qubits_(n_qubits), amp_(std::move(amplitudes)) {
    if (amp_.size() != (std::size_t{1} << n_qubits)) throw Error(ErrorKind::Layout, "amplitude count mismatch");
  }

  /// |system> placed on the low qubits, every ancilla in |0>.
  static QuantumState embed(std::size_t n_qubits, const Eigen::VectorXcd& system) {
    QuantumState s(n_qubits);
    s.amp_[0] = 0.0;
    if (static_cast<std::size_t>(system.size()) > s.amp_.size()) throw Error(ErrorKind::Layout, "system vector too long");
    for (Eigen::Index i = 0; i < system.size(); ++i) s.amp_[static_cast<std::size_t>(i)] = system(i);
    return s;
  }

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amp_.size(); }
  std::vector<cplx>& amplitudes() noexcept { return amp_; }
  const std::vector<cplx>& amplitudes() const noexcept { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[i]; }

  double norm2() const {
    std::vector<double> p(amp_.size());
    for (std::size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
    return pairwise_sum(p);
  }

  void normalize() {
    const double n2 = norm2();
    if (n2 < 1e-28) throw Error(ErrorKind::DegenerateState, "cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amp_) a *= inv;
  }

  /// The low `n` qubits as a vector, assuming the rest are |0>.
  Eigen::VectorXcd low_block(std::size_t n) const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(std::size_t{1} << n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = amp_[static_cast<std::size_t>(i)];
    return v;
  }

 private:
  std::size_t n_qubits_ = 0;
  std::vector<cplx> amp_;
};

namespace detail {

struct ControlMask {
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
};

inline ControlMask control_mask(const Gate& g) {
  ControlMask c;
  for (const auto& ctl : g.controls) {
    const std::uint64_t bit = std::uint64_t{1} << ctl.qubit;
    c.mask |= bit;
    if (ctl.active_high) c.value |= bit;
  }
  return c;
}

using Mat2 = std::array<cplx, 4>;  // row-major

inline Mat2 gate_matrix(const Gate& g) {
  constexpr double r = 0.70710678118654752440;
  const cplx i1{0.0, 1.0};
  switch (g.kind) {
    case GateKind::Hadamard: return {r, r, r, -r};
    case GateKind::PauliX: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::PauliY: return {0.0, -i1, i1, 0.0};
    case GateKind::PauliZ: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::Phase: return {1.0, 0.0, 0.0, std::exp(i1 * g.angle)};
    case GateKind::Rotation: {
      const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
      switch (g.axis) {
        case Axis::X: return {c, -i1 * s, -i1 * s, c};
        case Axis::Y: return {c, -s, s, c};
        case Axis::Z: return {std::exp(-i1 * (g.angle / 2.0)), 0.0, 0.0, std::exp(i1 * (g.angle / 2.0))};
      }
      break;
    }
    default: break;
  }
  throw Error(ErrorKind::Layout, "gate has no 2x2 matrix");
}

inline void apply_single(std::vector<cplx>& amp, const Gate& g) {
  const Mat2 m = gate_matrix(g);
  const ControlMask c = control_mask(g);
  const std::uint64_t tbit = std::uint64_t{1} << g.target;
  const std::uint64_t dim = amp.size();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & tbit) || (i & c.mask) != c.value) continue;
    const std::uint64_t j = i | tbit;
    const cplx a = amp[i], b = amp[j];
    amp[i] = m[0] * a + m[1] * b;
    amp[j] = m[2] * a + m[3] * b;
  }
}

inline void apply_pauli_product(std::vector<cplx>& amp, const Gate& g) {
  std::uint64_t flip = 0, sign = 0;
  std::size_t ny = 0;
  for (const auto& [q, p] : g.paulis) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (p == Pauli::X || p == Pauli::Y) flip |= bit;
    if (p == Pauli::Z || p == Pauli::Y) sign |= bit;
    if (p == Pauli::Y) ++ny;
  }
  const cplx yp = i_power(ny);
  auto phase = [&](std::uint64_t i) { return (std::popcount(i & sign) & 1U) ? -yp : yp; };
  const ControlMask c = control_mask(g);
  const std::uint64_t dim = amp.size();
  if (flip == 0) {
    for (std::uint64_t i = 0; i < dim; ++i)
      if ((i & c.mask) == c.value) amp[i] *= phase(i);
    return;
  }
  const std::uint64_t low = flip & (~flip + 1);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & low) || (i & c.mask) != c.value) continue;
    const std::uint64_t j = i ^ flip;
    const cplx a = amp[i], b = amp[j];
    amp[j] = phase(i) * a;
    amp[i] = phase(j) * b;
  }
}

}  // namespace detail

/// Outcome of measuring one qubit; the state collapses and is renormalized.
inline int measure_qubit(QuantumState& s, std::size_t q, RandomStream& rng) {
  auto& amp = s.amplitudes();
  const std::uint64_t bit = std::uint64_t{1} << q;
  std::vector<double> p1v, allv;
  p1v.reserve(amp.size() / 2);
  allv.reserve(amp.size());
  for (std::uint64_t i = 0; i < amp.size(); ++i) {
    allv.push_back(std::norm(amp[i]));
    if (i & bit) p1v.push_back(std::norm(amp[i]));
  }
  const double total = pairwise_sum(allv);
  if (total < 1e-14) throw Error(ErrorKind::DegenerateState, "measurement on a zero-weight state");
  const int outcome = rng.uniform() * total < pairwise_sum(p1v) ? 1 : 0;
  for (std::uint64_t i = 0; i < amp.size(); ++i)
    if (((i & bit) != 0) != (outcome == 1)) amp[i] = 0.0;
  s.normalize();
  return outcome;
}

inline void apply_gate(QuantumState& s, const Gate& g, RandomStream* rng = nullptr) {
  auto& amp = s.amplitudes();
  const auto t = g.targets();
  for (std::size_t q : t)
    if (q >= s.n_qubits()) throw Error(ErrorKind::Layout, "gate target outside state");
  for (const auto& c : g.controls)
    if (c.qubit >= s.n_qubits()) throw Error(ErrorKind::Layout, "control outside state");
  switch (g.kind) {
    case GateKind::PauliProduct: detail::apply_pauli_product(amp, g); return;
    case GateKind::Reset: {
      if (rng == nullptr) throw Error(ErrorKind::Layout, "reset needs a random stream");
      if (measure_qubit(s, g.target, *rng) == 1) detail::apply_single(amp, pauli_x(g.target));
      return;
    }
    default: detail::apply_single(amp, g); return;
  }
}

inline QuantumState apply_circuit(QuantumState s, const Circuit& c, RandomStream* rng = nullptr) {
  if (c.n_qubits() > s.n_qubits()) throw Error(ErrorKind::Layout, "circuit wider than state");
  for (const Gate& g : c.gates()) apply_gate(s, g, rng);
  return s;
}

/// Projects `reg` onto the computational outcome `outcome` (bit b of outcome
/// is qubit reg.first + b). Returns the unnormalized projection and its
/// weight, which is the exact postselection probability for a normalized input.
inline std::pair<QuantumState, double> postselect(QuantumState s, const Register& reg, std::uint64_t outcome) {
  if (reg.first + reg.count > s.n_qubits()) throw Error(ErrorKind::Layout, "register outside state");
  const std::uint64_t mask = ((std::uint64_t{1} << reg.count) - 1) << reg.first;
  const std::uint64_t want = outcome << reg.first;
  auto& amp = s.amplitudes();
  for (std::uint64_t i = 0; i < amp.size(); ++i)
    if ((i & mask) != want) amp[i] = 0.0;
  const double p = s.norm2();
  return {std::move(s), p};
}

/// Weight of each outcome of `reg`, indexed by outcome value.
inline std::vector<double> outcome_probabilities(const QuantumState& s, const Register& reg) {
  std::vector<std::vector<double>> parts(std::size_t{1} << reg.count);
  const auto& amp = s.amplitudes();
  for (std::uint64_t i = 0; i < amp.size(); ++i) parts[(i >> reg.first) & ((std::uint64_t{1} << reg.count) - 1)].push_back(std::norm(amp[i]));
  std::vector<double> p;
  for (const auto& v : parts) p.push_back(pairwise_sum(v));
  return p;
}

/// Born-rule sample of `reg`; the returned state is the normalized projection.
inline std::pair<std::uint64_t, QuantumState> measure_collapse(const QuantumState& s, const Register& reg,
                                                               RandomStream& rng) {
  const auto p = outcome_probabilities(s, reg);
  const double total = pairwise_sum(p);
  if (total < 1e-14) throw Error(ErrorKind::DegenerateState, "measurement on a zero-weight state");
  const std::uint64_t outcome = rng.categorical(p);
  auto [proj, w] = postselect(s, reg, outcome);
  proj.normalize();
  return {outcome, std::move(proj)};
}

/// <O> of the reduced state on the low `obs.n_sites()` qubits. Ancillas are
/// traced out, which matches the projected value when they are in a product
/// state with the system.
inline double expectation(const QuantumState& s, const PauliHamiltonian& obs) {
  if (obs.n_sites() > s.n_qubits()) throw Error(ErrorKind::Layout, "observable wider than state");
  const auto& amp = s.amplitudes();
  std::vector<double> parts;
  parts.reserve(obs.term_count());
  for (const auto& t : obs.terms()) {
    const PauliAction a(t.string);
    std::vector<double> acc(amp.size());
    for (std::uint64_t i = 0; i < amp.size(); ++i) acc[i] = (std::conj(amp[i ^ a.flip]) * a.phase(i) * amp[i]).real();
    parts.push_back(t.coefficient * pairwise_sum(acc));
  }
  return pairwise_sum(parts) / s.norm2();
}

inline double expectation(const QuantumState& s, const DenseOperator& obs) {
  require_hermitian(obs);
  const auto dim_s = static_cast<std::uint64_t>(obs.matrix.rows());
  if (dim_s == 0 || (dim_s & (dim_s - 1)) != 0 || dim_s > s.dimension())
    throw Error(ErrorKind::Layout, "observable dimension does not fit the state");
  const auto& amp = s.amplitudes();
  const std::uint64_t blocks = s.dimension() / dim_s;
  std::vector<double> parts(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    Eigen::Map<const Eigen::VectorXcd> v(amp.data() + b * dim_s, static_cast<Eigen::Index>(dim_s));
    parts[b] = v.dot(obs.matrix * v).real();
  }
  return pairwise_sum(parts) / s.norm2();
}

/// Shot-mode estimate of a probability: binomial frequency over `shots`.
inline double sample_probability(double p, std::uint64_t shots, RandomStream& rng) {
  if (shots == 0) return p;
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < shots; ++s) hits += rng.uniform() < p ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(shots);
}

}  // namespace spu
