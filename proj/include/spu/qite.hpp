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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "spu/block_encoding.hpp"
#include "spu/circuit.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/simulator.hpp"

namespace spu {

/// Modified Bessel function of the first kind, I_k(x), by its power series.
/// The leading term comes from lgamma so large orders do not overflow
/// before the sum starts.
inline double bessel_i(unsigned k, double x) {
  if (k > 500 || !(x >= 0.0) || x > 500.0) throw Error(ErrorKind::Range, "bessel_i argument outside k<=500, 0<=x<=500");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const double half = x / 2.0;
  const double q = half * half;
  double term = std::exp(static_cast<double>(k) * std::log(half) - std::lgamma(static_cast<double>(k) + 1.0));
  double sum = term;
  for (unsigned j = 1; j < 100000; ++j) {
    term *= q / (static_cast<double>(j) * static_cast<double>(j + k));
    sum += term;
    // Terms grow until j ~ x/2, so only stop on the falling side.
    if (term < 1e-17 * sum && static_cast<double>(j) > half) break;
  }
  return sum;
}

/// Smallest order d with |sum_{n<=d} c_n T_n(x) - e^{-(beta/2)x}| <= nu on [-1, 1].
inline std::size_t truncation_order(double beta, double nu) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::Range, "beta must be finite and non-negative");
  if (!(nu > 0.0 && nu < 1.0)) throw Error(ErrorKind::Range, "nu must lie in (0, 1)");
  const double e2 = std::numbers::e * std::numbers::e;
  const double a = std::log(4.0 / nu) + beta / 2.0;  // ln(4 e^{beta/2} / nu)
  const double b = std::max(e2 * beta / 2.0, std::log(2.0 / nu) + beta / 2.0);
  return static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * a * b)));
}

/// Chebyshev expansion of e^{-(beta/2)H} truncated at order d.
struct QiteExpansion {
  double beta = 0.0;
  double nu = 0.0;
  std::size_t d = 0;
  std::vector<double> c;  // c_0 .. c_d
  std::vector<double> p;  // c_n / |c|_1
  double c_norm1 = 0.0;

  /// Mean sampled order sum_n n p_n.
  double mean_order() const {
    double s = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) s += static_cast<double>(n) * p[n];
    return s;
  }

  /// Truncated series evaluated at a scalar eigenvalue E of H.
  double evaluate(double energy) const {
    const double x = -energy;
    double prev = 1.0, cur = x, s = c[0];
    if (d >= 1) s += c[1] * x;
    for (std::size_t n = 2; n <= d; ++n) {
      const double next = 2.0 * x * cur - prev;
      prev = cur;
      cur = next;
      s += c[n] * cur;
    }
    return s;
  }
};

inline QiteExpansion build_expansion(double beta, double nu, std::size_t d) {
  QiteExpansion e;
  e.beta = beta;
  e.nu = nu;
  e.d = d;
  e.c.resize(d + 1);
  for (std::size_t n = 0; n <= d; ++n) e.c[n] = (n == 0 ? 1.0 : 2.0) * bessel_i(static_cast<unsigned>(n), beta / 2.0);
  for (double v : e.c) e.c_norm1 += v;
  e.p.resize(d + 1);
  for (std::size_t n = 0; n <= d; ++n) e.p[n] = e.c[n] / e.c_norm1;
  return e;
}

inline QiteExpansion build_expansion(double beta, double nu) {
  return build_expansion(beta, nu, truncation_order(beta, nu));
}

/// sum_n c_n T_n(-H) as a dense matrix.
inline Eigen::MatrixXcd truncated_operator(const QiteExpansion& e, const PauliHamiltonian& h) {
  const Spectrum s(h);
  const double lambda = h.one_norm();
  return s.apply_function([&](double en) { return e.evaluate(en / lambda); });
}

/// (sum_n c_n T_n(-H) / |c|_1)|psi> and its squared norm, which is the
/// success probability of the conventional LCU circuit's postselection.
inline std::pair<Eigen::VectorXcd, double> qite_apply_truncated(const QiteExpansion& e, const PauliHamiltonian& h,
                                                               const Eigen::VectorXcd& psi) {
  const auto t = chebyshev_vectors(h, e.d, psi);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (std::size_t n = 0; n <= e.d; ++n) out += e.p[n] * t[n];
  const double p = out.squaredNorm();
  return {std::move(out), p};
}

/// Conventional LCU circuit: a coefficient register B of ceil(log2(d+1))
/// qubits above S and A selects the walk power.
struct ConventionalLcu {
  RegisterLayout layout;  // S and A
  Register coefficient;   // B
  Circuit circuit;        // PREP_B PREP_A, sum_n |n><n|_B (x) W^n, PREP_A^dagger PREP_B^dagger
};

inline ConventionalLcu build_conventional_lcu(const QiteExpansion& e, const PauliHamiltonian& h) {
  const BlockEncoding be = build_block_encoding(h, false);
  const std::size_t base = be.layout.total();
  const std::size_t cbits = RegisterLayout::ceil_log2(e.d + 1);
  const std::size_t width = base + cbits;
  if (width > 24) throw Error(ErrorKind::OracleSize, "conventional LCU circuit too wide to simulate");

  const Circuit prep_b = amplitude_preparation(e.c, base, cbits, width);
  Circuit prep_a(width);
  prep_a.append(be.prepare);

  Circuit c(width);
  c.append(prep_b).append(prep_a);
  for (std::size_t n = 1; n <= e.d; ++n) {
    std::vector<Control> ctl;
    for (std::size_t b = 0; b < cbits; ++b) ctl.push_back({base + b, ((n >> b) & 1U) != 0});
    for (std::size_t r = 0; r < n; ++r)
      for (const Gate& g : be.walk.gates()) c.add(with_controls(g, ctl));
  }
  c.append(prep_a.inverse()).append(prep_b.inverse());
  return {be.layout, Register{"B", base, cbits}, std::move(c)};
}

/// Circuit-mode counterpart of qite_apply_truncated for small systems.
inline std::pair<Eigen::VectorXcd, double> qite_apply_circuit(const ConventionalLcu& lcu, std::size_t n_sites,
                                                             const Eigen::VectorXcd& psi) {
  QuantumState s = QuantumState::embed(lcu.circuit.n_qubits(), psi);
  s = apply_circuit(std::move(s), lcu.circuit);
  const Register anc{"AB", n_sites, lcu.circuit.n_qubits() - n_sites};
  auto [proj, p] = postselect(std::move(s), anc, 0);
  return {proj.low_block(n_sites), p};
}

}  // namespace spu
