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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "spu/block_encoding.hpp"
#include "spu/circuit.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/qite.hpp"

namespace spu {

/// Clifford and non-Clifford rotation tallies. Doubles so that averages over
/// sampled circuits share the type; whole-circuit counts are exact integers.
struct GateCounts {
  double clifford = 0.0;
  double rotations = 0.0;
  double qubits = 0.0;

  GateCounts& operator+=(const GateCounts& o) {
    clifford += o.clifford;
    rotations += o.rotations;
    qubits = std::max(qubits, o.qubits);
    return *this;
  }
  friend GateCounts operator+(GateCounts a, const GateCounts& b) { return a += b; }
  friend GateCounts operator*(double s, GateCounts a) {
    a.clifford *= s;
    a.rotations *= s;
    return a;
  }
  bool operator==(const GateCounts&) const = default;
};

/// Rule table. A gate with Nc >= 2 controls becomes 2(Nc - 1) Toffolis
/// (compute and uncompute a ladder onto work qubits) plus the singly
/// controlled gate; each active-low control adds an X pair.
struct CostModel {
  double toffoli_rotations = 3.0;
  double toffoli_cliffords = 8.0;  // 6 CNOT + 2 H
  double active_low_cliffords = 2.0;
};

namespace detail {

inline bool is_multiple_of(double angle, double unit) {
  const double r = angle / unit;
  return std::abs(r - std::round(r)) < 1e-12;
}

inline bool is_zero_angle(double angle) { return is_multiple_of(angle, 2.0 * std::numbers::pi); }

}  // namespace detail

inline GateCounts count_gate(const Gate& g, const CostModel& model = {}) {
  if (g.kind == GateKind::Reset) throw Error(ErrorKind::CostModel, "reset is not in the rule table");
  const std::size_t nc = g.controls.size();
  const double w = g.kind == GateKind::PauliProduct ? static_cast<double>(g.paulis.size()) : 1.0;
  GateCounts c;
  if (nc == 0) {
    switch (g.kind) {
      case GateKind::Hadamard:
      case GateKind::PauliX:
      case GateKind::PauliY:
      case GateKind::PauliZ: c.clifford = 1; break;
      case GateKind::PauliProduct: c.clifford = w; break;
      case GateKind::Phase:
        if (detail::is_zero_angle(g.angle)) break;
        if (detail::is_multiple_of(g.angle, std::numbers::pi / 2.0)) c.clifford = 1;
        else c.rotations = 1;
        break;
      case GateKind::Rotation: c.rotations = 1; break;
      default: break;
    }
    return c;
  }
  // Singly controlled core.
  switch (g.kind) {
    case GateKind::PauliX:
    case GateKind::PauliY:
    case GateKind::PauliZ: c.clifford = 1; break;
    case GateKind::PauliProduct: c.clifford = w; break;
    case GateKind::Hadamard: c.rotations = 2; c.clifford = 1; break;
    case GateKind::Rotation: c.rotations = 2; c.clifford = 2; break;
    case GateKind::Phase:
      if (detail::is_zero_angle(g.angle)) break;
      if (detail::is_multiple_of(g.angle - std::numbers::pi, 2.0 * std::numbers::pi)) {
        c.clifford = 1;  // CZ
      } else {
        c.rotations = 3;
        c.clifford = 2;
      }
      break;
    default: break;
  }
  const double toffolis = 2.0 * static_cast<double>(nc - 1);
  c.rotations += toffolis * model.toffoli_rotations;
  c.clifford += toffolis * model.toffoli_cliffords;
  for (const auto& ctl : g.controls)
    if (!ctl.active_high) c.clifford += model.active_low_cliffords;
  return c;
}

inline GateCounts count_circuit(const Circuit& circuit, const CostModel& model = {}) {
  GateCounts c;
  for (const Gate& g : circuit.gates()) c += count_gate(g, model);
  c.qubits = static_cast<double>(circuit.n_qubits());
  return c;
}

/// Every gate of `circuit` with `extra` active-high controls added.
inline GateCounts count_with_extra_controls(const Circuit& circuit, std::size_t extra, const CostModel& model = {}) {
  GateCounts c;
  for (Gate g : circuit.gates()) {
    for (std::size_t e = 0; e < extra; ++e) g.controls.push_back({circuit.n_qubits() + e, true});
    c += count_gate(g, model);
  }
  return c;
}

enum class Method { Conventional, McmcSpu };

inline std::size_t coefficient_qubits(std::size_t d) { return RegisterLayout::ceil_log2(d + 1); }

/// System + PREPARE register + superposition ancilla; the conventional
/// method adds the coefficient register.
inline std::size_t qubit_count(std::size_t n_sites, Method method, std::size_t d) {
  if (n_sites < 2) throw Error(ErrorKind::InvalidModel, "need at least two sites");
  const std::size_t base = n_sites + RegisterLayout::ceil_log2(2 * n_sites) + 1;
  return method == Method::McmcSpu ? base : base + coefficient_qubits(d);
}

/// sum_n n p_n over the truncated expansion.
inline double average_order(const QiteExpansion& e) { return e.mean_order(); }

/// Closed-form bound on e^{-beta/2} sum_n 2 n I_n(beta/2):
/// (beta/2) e^{-beta/2} [I_0 + I_1 - I_d - I_{d+1}] at beta/2.
inline double average_order_bound(double beta, std::size_t d) {
  const double x = beta / 2.0;
  const auto di = static_cast<unsigned>(d);
  return x * std::exp(-x) * (bessel_i(0, x) + bessel_i(1, x) - bessel_i(di, x) - bessel_i(di + 1, x));
}

/// Left-hand side of that bound.
inline double average_order_scaled(double beta, std::size_t d) {
  const double x = beta / 2.0;
  double s = 0.0;
  for (std::size_t n = 1; n <= d; ++n) s += 2.0 * static_cast<double>(n) * bessel_i(static_cast<unsigned>(n), x);
  return std::exp(-x) * s;
}

struct CostRow {
  std::size_t n_sites = 0;
  std::size_t d = 0;
  double d_average = 0.0;
  std::size_t qubits_mcmc = 0;
  std::size_t qubits_conventional = 0;
  GateCounts conventional;
  GateCounts mcmc_max;
  GateCounts mcmc_average;
  GateCounts controlled_walk;  // one W step with the single superposition control

  double max_ratio() const { return conventional.rotations / mcmc_max.rotations; }
  double average_ratio() const { return conventional.rotations / mcmc_average.rotations; }
};

/// Gate totals for one ring size.
///  MCMC-SPU circuit: 2 H and 2 X on the superposition qubit, PREP and its
///  inverse, then m + n singly controlled walk steps (2d at most, 2 d_avg on
///  average).
///  Conventional LCU: coefficient preparation and its inverse (2^c rotations
///  and 2^c CNOTs each), PREP and its inverse, and for every k <= d the walk
///  applied k times under c controls, with X pairs around each block for the
///  zero bits of k.
inline CostRow compare_costs_at(std::size_t n_sites, const QiteExpansion& e,
                                PrepareVariant variant = PrepareVariant::Uniform, const CostModel& model = {}) {
  const PauliHamiltonian h = build_tfi(n_sites, std::numbers::pi / 3.0);
  const BlockEncoding be = build_block_encoding(h, true, variant);
  CostRow row;
  row.n_sites = n_sites;
  row.d = e.d;
  row.d_average = average_order(e);
  row.qubits_mcmc = qubit_count(n_sites, Method::McmcSpu, e.d);
  row.qubits_conventional = qubit_count(n_sites, Method::Conventional, e.d);

  const GateCounts prep = count_circuit(be.prepare, model);
  const GateCounts fixed = prep + prep + GateCounts{4.0, 0.0, 0.0};
  row.controlled_walk = count_with_extra_controls(be.walk, 1, model);
  row.mcmc_max = fixed + (2.0 * static_cast<double>(e.d)) * row.controlled_walk;
  row.mcmc_average = fixed + (2.0 * row.d_average) * row.controlled_walk;
  row.mcmc_max.qubits = row.mcmc_average.qubits = static_cast<double>(row.qubits_mcmc);

  const std::size_t c = coefficient_qubits(e.d);
  const double budget = std::ldexp(1.0, static_cast<int>(c));
  const GateCounts coeff{budget, budget, 0.0};
  const GateCounts walk_c = count_with_extra_controls(be.walk, c, model);
  GateCounts conv = coeff + coeff + prep + prep;
  for (std::size_t k = 1; k <= e.d; ++k) {
    const double zeros = static_cast<double>(c - static_cast<std::size_t>(std::popcount(k)));
    conv += static_cast<double>(k) * walk_c;
    conv.clifford += zeros * model.active_low_cliffords;
  }
  conv.qubits = static_cast<double>(row.qubits_conventional);
  row.conventional = conv;
  return row;
}

inline std::vector<CostRow> compare_costs(const std::vector<std::size_t>& sizes, double beta, double nu,
                                          PrepareVariant variant = PrepareVariant::Uniform) {
  const QiteExpansion e = build_expansion(beta, nu);
  std::vector<CostRow> rows;
  for (std::size_t n : sizes) {
    if (n < 2 || n > 256) throw Error(ErrorKind::Range, "ring size outside [2, 256]");
    rows.push_back(compare_costs_at(n, e, variant));
  }
  return rows;
}

/// Largest physical error rate with 2 N_rot (2p/15) <= 2.
inline double star_budget(double rotations) {
  if (!(rotations >= 1.0)) throw Error(ErrorKind::Range, "need at least one rotation");
  return 7.5 / rotations;
}

}  // namespace spu
