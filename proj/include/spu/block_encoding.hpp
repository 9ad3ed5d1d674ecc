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

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spu/circuit.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/simulator.hpp"

namespace spu {

/// Exact: amplitudes sqrt(c_k/|c|_1) for every term count. Uniform: the
/// Hadamard-layer-plus-one-rotation form, which is exact only when N is a
/// power of two; kept for gate costing.
enum class PrepareVariant { Exact, Uniform };

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// True when the term list has the ring shape: N equal bond weights then N
/// equal field weights with N a power of two, so a Hadamard layer plus one
/// Y rotation prepares the amplitudes exactly.
inline bool has_two_block_shape(const PauliHamiltonian& h) {
  const std::size_t n = h.n_sites();
  if (h.term_count() != 2 * n || !is_power_of_two(n)) return false;
  const auto& t = h.terms();
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(t[k].coefficient - t[0].coefficient) > 1e-15) return false;
    if (std::abs(t[n + k].coefficient - t[n].coefficient) > 1e-15) return false;
  }
  return true;
}

inline void prepare_tree(Circuit& c, std::size_t first_qubit, const std::vector<double>& w, std::size_t level,
                         std::size_t lo, std::vector<Control>& prefix) {
  const std::size_t half = std::size_t{1} << level;
  double left = 0.0, right = 0.0;
  for (std::size_t k = lo; k < lo + half; ++k) left += w[k];
  for (std::size_t k = lo + half; k < lo + 2 * half; ++k) right += w[k];
  if (left + right <= 0.0) return;
  const std::size_t q = first_qubit + level;
  const double angle = 2.0 * std::atan2(std::sqrt(right), std::sqrt(left));
  if (angle != 0.0) c.add(with_controls(rotation(Axis::Y, q, angle), prefix));
  if (level == 0) return;
  prefix.push_back({q, false});
  prepare_tree(c, first_qubit, w, level - 1, lo, prefix);
  prefix.back().active_high = true;
  prepare_tree(c, first_qubit, w, level - 1, lo + half, prefix);
  prefix.pop_back();
}

}  // namespace detail

/// Binary tree of multi-controlled Y rotations mapping |0> on the `n_bits`
/// qubits starting at `first_qubit` to sum_k sqrt(w_k / sum w)|k>.
inline Circuit amplitude_preparation(std::vector<double> w, std::size_t first_qubit, std::size_t n_bits,
                                     std::size_t width) {
  if (w.size() > (std::size_t{1} << n_bits)) throw Error(ErrorKind::Layout, "too many amplitudes for the register");
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidModel, "negative preparation weight");
    total += v;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidModel, "preparation weights sum to zero");
  for (double& v : w) v /= total;
  w.resize(std::size_t{1} << n_bits, 0.0);
  Circuit c(width);
  std::vector<Control> prefix;
  detail::prepare_tree(c, first_qubit, w, n_bits - 1, 0, prefix);
  return c;
}

/// PREPARE on register A of `layout`: |0_A> -> sum_k sqrt(c_k/|c|_1)|k>_A.
inline Circuit build_prepare(const PauliHamiltonian& h, const RegisterLayout& layout,
                             PrepareVariant variant = PrepareVariant::Exact) {
  const std::size_t a = layout.prep_qubits();
  if ((std::size_t{1} << a) < h.term_count()) throw Error(ErrorKind::Layout, "PREPARE register too small");
  Circuit c(layout.total());
  const double norm = h.one_norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidModel, "Hamiltonian has zero 1-norm");

  if (variant == PrepareVariant::Uniform || detail::has_two_block_shape(h)) {
    // Hadamards on the low bits spread over the N terms of each block; the
    // top bit picks bond vs field block.
    const std::size_t n = h.n_sites();
    const std::size_t low_bits = RegisterLayout::ceil_log2(n);
    if (low_bits + 1 > a) throw Error(ErrorKind::Layout, "PREPARE register too small for the two-block form");
    double bond = 0.0;
    for (std::size_t k = 0; k < std::min(n, h.term_count()); ++k) bond += h.terms()[k].coefficient;
    const double field = norm - bond;
    for (std::size_t b = 0; b < low_bits; ++b) c.add(hadamard(layout.prep_qubit(b)));
    c.add(rotation(Axis::Y, layout.prep_qubit(low_bits),
                   2.0 * std::atan2(std::sqrt(std::max(field, 0.0)), std::sqrt(std::max(bond, 0.0)))));
    return c;
  }

  std::vector<double> w(h.term_count());
  for (std::size_t k = 0; k < h.term_count(); ++k) w[k] = h.terms()[k].coefficient;
  return amplitude_preparation(std::move(w), layout.prep_qubit(0), a, layout.total());
}

/// Controls that fire on |k>_A.
inline std::vector<Control> index_controls(const RegisterLayout& layout, std::uint64_t k) {
  std::vector<Control> ctl;
  for (std::size_t b = 0; b < layout.prep_qubits(); ++b) ctl.push_back({layout.prep_qubit(b), ((k >> b) & 1U) != 0});
  return ctl;
}

/// SELECT: term k's Pauli string on S, controlled on |k>_A.
inline Circuit build_select(const PauliHamiltonian& h, const RegisterLayout& layout) {
  if (layout.system_qubits() != h.n_sites()) throw Error(ErrorKind::Layout, "system register width differs from model");
  Circuit c(layout.total());
  for (std::size_t k = 0; k < h.term_count(); ++k)
    c.add(with_controls(pauli_product(h.terms()[k].string, layout.reg("S").first), index_controls(layout, k)));
  return c;
}

/// -I written as gates (XZXZ on one qubit) so that it survives being
/// controlled.
inline void append_minus_identity(Circuit& c, std::size_t q) {
  c.add(pauli_x(q)).add(pauli_z(q)).add(pauli_x(q)).add(pauli_z(q));
}

/// I - 2|0><0| on register A.
inline Circuit zero_reflection(const RegisterLayout& layout) {
  Circuit c(layout.total());
  const std::size_t q0 = layout.prep_qubit(0);
  std::vector<Control> others;
  for (std::size_t b = 1; b < layout.prep_qubits(); ++b) others.push_back({layout.prep_qubit(b), false});
  c.add(pauli_x(q0));
  c.add(with_controls(pauli_z(q0), others));
  c.add(pauli_x(q0));
  return c;
}

struct BlockEncoding {
  PauliHamiltonian hamiltonian;
  RegisterLayout layout;
  Circuit prepare;
  Circuit select;
  Circuit reflection;  // acts on A only; S_H = prepare * reflection * prepare^dagger
  Circuit walk;
  bool reflection_flipped = false;  // true when the global sign was flipped to reach T_k(-H)

  std::size_t term_count() const { return hamiltonian.term_count(); }
};

namespace detail {

inline BlockEncoding assemble(const PauliHamiltonian& h, const RegisterLayout& layout, PrepareVariant variant,
                              bool flip) {
  BlockEncoding be{h, layout, build_prepare(h, layout, variant), build_select(h, layout), {}, {}, flip};
  // Written form 2|0><0| - I = -(I - 2|0><0|); the flip drops the minus.
  be.reflection = zero_reflection(layout);
  if (!flip) append_minus_identity(be.reflection, layout.prep_qubit(0));
  be.walk = Circuit(layout.total());
  be.walk.append(be.select).append(be.prepare.inverse()).append(be.reflection).append(be.prepare);
  return be;
}

/// Postselected first walk power on |i>, compared against -H|i>/|c|_1.
/// Returns +1 when it equals -H, -1 when it equals +H, 0 otherwise.
inline int first_power_sign(const BlockEncoding& be) {
  const auto& h = be.hamiltonian;
  const double lambda = h.one_norm();
  for (std::uint64_t i = 0; i < h.dimension(); ++i) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.dimension()));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    const Eigen::VectorXcd target = h.apply(e) / lambda;
    if (target.norm() < 1e-6) continue;
    QuantumState s = QuantumState::embed(be.layout.total(), e);
    s = apply_circuit(std::move(s), be.prepare);
    s = apply_circuit(std::move(s), be.walk);
    s = apply_circuit(std::move(s), be.prepare.inverse());
    auto [proj, p] = postselect(std::move(s), be.layout.reg("A"), 0);
    const Eigen::VectorXcd got = proj.low_block(h.n_sites());
    if ((got + target).norm() < 1e-8) return 1;
    if ((got - target).norm() < 1e-8) return -1;
    return 0;
  }
  return 0;
}

inline constexpr std::size_t kCalibrationQubitLimit = 22;

}  // namespace detail

/// Builds PREPARE, SELECT, the reflection and the walk operator. The
/// reflection's global sign is checked against the dense action of the first
/// walk power and flipped when needed so that postselected walk powers give
/// T_k(-H). Models too wide to simulate inherit the sign found on a two-site
/// reference ring, since the sign depends only on the construction.
inline BlockEncoding build_block_encoding(const PauliHamiltonian& h, bool with_superposition = false,
                                          PrepareVariant variant = PrepareVariant::Exact) {
  const RegisterLayout layout = RegisterLayout::for_terms(h.n_sites(), h.term_count(), with_superposition);
  const bool simulable = h.n_sites() + layout.prep_qubits() <= detail::kCalibrationQubitLimit &&
                         !(variant == PrepareVariant::Uniform && !detail::has_two_block_shape(h));
  if (!simulable) {
    static const bool reference_flip = [] {
      const auto ref = build_tfi(2, 1.0471975511965976);
      const RegisterLayout l = RegisterLayout::for_terms(2, ref.term_count(), false);
      return detail::first_power_sign(detail::assemble(ref, l, PrepareVariant::Exact, false)) != 1;
    }();
    return detail::assemble(h, layout, variant, reference_flip);
  }
  // Calibration runs without the idle superposition qubit to keep it cheap.
  const RegisterLayout bare = RegisterLayout::for_terms(h.n_sites(), h.term_count(), false);
  const int sign = detail::first_power_sign(detail::assemble(h, bare, variant, false));
  bool flip = false;
  if (sign == -1) {
    flip = true;
  } else if (sign == 0) {
    throw Error(ErrorKind::InvalidModel, "walk operator does not block-encode the Hamiltonian");
  }
  BlockEncoding be = detail::assemble(h, layout, variant, flip);
  if (detail::first_power_sign(detail::assemble(h, bare, variant, flip)) != 1)
    throw Error(ErrorKind::InvalidModel, "walk operator sign calibration failed");
  return be;
}

inline Circuit build_walk(const BlockEncoding& be) { return be.walk; }

/// PREP, W^k, PREP^dagger on |0_A>|psi>, then postselect A = 0. The
/// returned system vector is T_k(-H/|c|_1)|psi> and its squared norm is the
/// success probability.
inline std::pair<Eigen::VectorXcd, double> chebyshev_apply(const BlockEncoding& be, std::size_t k,
                                                           const Eigen::VectorXcd& psi) {
  const std::size_t n = be.hamiltonian.n_sites();
  if (static_cast<std::uint64_t>(psi.size()) != be.hamiltonian.dimension())
    throw Error(ErrorKind::Layout, "state dimension differs from the system register");
  QuantumState s = QuantumState::embed(be.layout.total(), psi);
  s = apply_circuit(std::move(s), be.prepare);
  for (std::size_t r = 0; r < k; ++r) s = apply_circuit(std::move(s), be.walk);
  s = apply_circuit(std::move(s), be.prepare.inverse());
  auto [proj, p] = postselect(std::move(s), be.layout.reg("A"), 0);
  return {proj.low_block(n), p};
}

/// T_k(-H/|c|_1) by the three-term recurrence.
inline DenseOperator chebyshev_dense(std::size_t k, const PauliHamiltonian& h) {
  const Eigen::MatrixXcd x = -to_dense(h).matrix / h.one_norm();
  const auto dim = x.rows();
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Identity(dim, dim);
  if (k == 0) return {prev, "T_0(-H)"};
  Eigen::MatrixXcd cur = x;
  for (std::size_t j = 1; j < k; ++j) {
    Eigen::MatrixXcd next = 2.0 * x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {cur, "T_" + std::to_string(k) + "(-H)"};
}

/// All of T_0(-H)v ... T_kmax(-H)v by the vector recurrence.
inline std::vector<Eigen::VectorXcd> chebyshev_vectors(const PauliHamiltonian& h, std::size_t kmax,
                                                      const Eigen::VectorXcd& v) {
  const double lambda = h.one_norm();
  std::vector<Eigen::VectorXcd> out;
  out.reserve(kmax + 1);
  out.push_back(v);
  if (kmax == 0) return out;
  out.push_back(-h.apply(v) / lambda);
  for (std::size_t j = 1; j < kmax; ++j) out.push_back(-2.0 * h.apply(out[j]) / lambda - out[j - 1]);
  return out;
}

}  // namespace spu
