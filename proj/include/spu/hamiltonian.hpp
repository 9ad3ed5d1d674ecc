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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "spu/error.hpp"

namespace spu {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/// Pauli product over sites 1..N. Site j lives on bit (j-1) of a basis
/// index, so |i> with i = sum_j b_j 2^(j-1).
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_sites) : ops_(n_sites, Pauli::I) {}
  explicit PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

  /// Builds a string from (1-based site, tag) pairs.
  static PauliString on_sites(std::size_t n_sites,
                              std::initializer_list<std::pair<std::size_t, Pauli>> sites) {
    PauliString s(n_sites);
    for (auto [site, p] : sites) {
      if (site < 1 || site > n_sites) throw Error(ErrorKind::InvalidModel, "site index out of range");
      s.ops_[site - 1] = p;
    }
    return s;
  }

  std::size_t size() const noexcept { return ops_.size(); }
  Pauli operator[](std::size_t q) const { return ops_[q]; }
  const std::vector<Pauli>& ops() const noexcept { return ops_; }

  std::size_t weight() const {
    return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [](Pauli p) { return p != Pauli::I; }));
  }

  bool is_identity() const { return weight() == 0; }

  /// Bits flipped by the string (X or Y sites).
  std::uint64_t x_mask() const {
    require_mask_width();
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < ops_.size(); ++q)
      if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
    return m;
  }

  /// Bits contributing a (-1)^b sign (Z or Y sites).
  std::uint64_t z_mask() const {
    require_mask_width();
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < ops_.size(); ++q)
      if (ops_[q] == Pauli::Z || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
    return m;
  }

  std::size_t y_count() const {
    return static_cast<std::size_t>(std::count(ops_.begin(), ops_.end(), Pauli::Y));
  }

  std::string label() const {
    std::string s;
    for (Pauli p : ops_) s.push_back(pauli_char(p));
    return s;
  }

  bool operator==(const PauliString&) const = default;

 private:
  void require_mask_width() const {
    if (ops_.size() > 63) throw Error(ErrorKind::OracleSize, "bit-mask form limited to 63 sites");
  }

  std::vector<Pauli> ops_;
};

/// i^k for integer k.
inline cplx i_power(std::size_t k) {
  switch (k & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Precomputed action P|i> = phase(i) |i ^ flip>.
struct PauliAction {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  cplx y_phase{1.0, 0.0};

  explicit PauliAction(const PauliString& p)
      : flip(p.x_mask()), sign(p.z_mask()), y_phase(i_power(p.y_count())) {}

  cplx phase(std::uint64_t i) const {
    return (std::popcount(i & sign) & 1U) ? -y_phase : y_phase;
  }
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Weighted Pauli sum. Coefficients are non-negative (signs belong in the
/// strings' phases for the LCU construction).
class PauliHamiltonian {
 public:
  PauliHamiltonian() = default;

  PauliHamiltonian(std::size_t n_sites, std::vector<PauliTerm> terms, double theta = 0.0)
      : n_sites_(n_sites), theta_(theta), terms_(std::move(terms)) {
    if (n_sites_ < 1) throw Error(ErrorKind::InvalidModel, "need at least one site");
    if (terms_.empty()) throw Error(ErrorKind::InvalidModel, "no terms");
    for (const auto& t : terms_) {
      if (t.string.size() != n_sites_) throw Error(ErrorKind::InvalidModel, "term length differs from site count");
      if (!(t.coefficient >= 0.0) || !std::isfinite(t.coefficient))
        throw Error(ErrorKind::InvalidModel, "coefficients must be finite and non-negative");
    }
  }

  std::size_t n_sites() const noexcept { return n_sites_; }
  double theta() const noexcept { return theta_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  std::uint64_t dimension() const { return std::uint64_t{1} << n_sites_; }

  double one_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient;
    return s;
  }

  /// out = H v over the full 2^N basis.
  void apply(const cplx* v, cplx* out) const {
    const std::uint64_t dim = dimension();
    std::fill(out, out + dim, cplx{});
    for (const auto& t : terms_) {
      const PauliAction a(t.string);
      for (std::uint64_t i = 0; i < dim; ++i) out[i ^ a.flip] += t.coefficient * a.phase(i) * v[i];
    }
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(v.size());
    apply(v.data(), out.data());
    return out;
  }

  /// <v|H|v> without forming a matrix.
  double expectation(const Eigen::VectorXcd& v) const { return v.dot(apply(v)).real(); }

 private:
  std::size_t n_sites_ = 0;
  double theta_ = 0.0;
  std::vector<PauliTerm> terms_;
};

/// Transverse-field Ising ring: J X_j X_{j+1} + h Y_j with J = cos^2(theta/2)/N,
/// h = sin^2(theta/2)/N. Term order: the N bond terms first (bond j couples
/// sites j and j+1, wrapping at N), then the N field terms.
inline PauliHamiltonian build_tfi(std::size_t n_sites, double theta) {
  if (n_sites < 2) throw Error(ErrorKind::InvalidModel, "ring needs at least two sites");
  if (!(theta >= 0.0 && theta <= 3.14159265358979323846 + 1e-12))
    throw Error(ErrorKind::InvalidModel, "theta outside [0, pi]");
  const double n = static_cast<double>(n_sites);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const double j_coupling = c * c / n, h_field = s * s / n;
  std::vector<PauliTerm> terms;
  terms.reserve(2 * n_sites);
  for (std::size_t j = 1; j <= n_sites; ++j) {
    const std::size_t next = j % n_sites + 1;
    // For N = 2 both bonds are X1X2; they stay separate terms.
    terms.push_back({j_coupling, PauliString::on_sites(n_sites, {{j, Pauli::X}, {next, Pauli::X}})});
  }
  for (std::size_t j = 1; j <= n_sites; ++j)
    terms.push_back({h_field, PauliString::on_sites(n_sites, {{j, Pauli::Y}})});
  return PauliHamiltonian(n_sites, std::move(terms), theta);
}

struct DenseOperator {
  Eigen::MatrixXcd matrix;
  std::string label;

  bool is_hermitian(double tol = 1e-10) const {
    if (matrix.rows() != matrix.cols()) return false;
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }
};

inline constexpr std::size_t kDenseSiteLimit = 14;

inline void require_dense(std::size_t n_sites) {
  if (n_sites > kDenseSiteLimit)
    throw Error(ErrorKind::OracleSize, "dense oracle limited to " + std::to_string(kDenseSiteLimit) + " sites");
}

inline Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  require_dense(p.size());
  const std::uint64_t dim = std::uint64_t{1} << p.size();
  const PauliAction a(p);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < dim; ++i)
    m(static_cast<Eigen::Index>(i ^ a.flip), static_cast<Eigen::Index>(i)) = a.phase(i);
  return m;
}

inline DenseOperator to_dense(const PauliHamiltonian& h, std::string label = "H") {
  require_dense(h.n_sites());
  const std::uint64_t dim = h.dimension();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : h.terms()) {
    const PauliAction a(t.string);
    for (std::uint64_t i = 0; i < dim; ++i)
      m(static_cast<Eigen::Index>(i ^ a.flip), static_cast<Eigen::Index>(i)) += t.coefficient * a.phase(i);
  }
  return {std::move(m), std::move(label)};
}

/// (1/N) sum_j Y_j, the field part of the ring without its coupling.
inline DenseOperator field_observable(std::size_t n_sites) {
  std::vector<PauliTerm> terms;
  for (std::size_t j = 1; j <= n_sites; ++j)
    terms.push_back({1.0 / static_cast<double>(n_sites), PauliString::on_sites(n_sites, {{j, Pauli::Y}})});
  return to_dense(PauliHamiltonian(n_sites, std::move(terms)), "field");
}

inline void require_hermitian(const DenseOperator& obs) {
  if (!obs.is_hermitian()) throw Error(ErrorKind::InvalidObservable, "observable '" + obs.label + "' is not Hermitian");
}

/// Full eigendecomposition of a dense Hamiltonian; reused across many beta
/// values and observables.
class Spectrum {
 public:
  explicit Spectrum(const PauliHamiltonian& h) : Spectrum(to_dense(h)) {}

  explicit Spectrum(const DenseOperator& h) {
    require_hermitian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
    values_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  const Eigen::MatrixXcd& vectors() const noexcept { return vectors_; }
  Eigen::Index dimension() const noexcept { return values_.size(); }

  /// f(H) for a scalar function f.
  template <class F>
  Eigen::MatrixXcd apply_function(F&& f) const {
    Eigen::VectorXd fv(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k) fv(k) = f(values_(k));
    return vectors_ * fv.asDiagonal() * vectors_.adjoint();
  }

  /// Tr[O e^{-beta H}] / Tr[e^{-beta H}]. Energies are shifted by the ground
  /// energy so large beta does not underflow.
  double canonical_average(const DenseOperator& obs, double beta) const {
    require_hermitian(obs);
    if (!std::isfinite(beta)) throw Error(ErrorKind::Range, "beta must be finite");
    if (obs.matrix.rows() != values_.size()) throw Error(ErrorKind::InvalidObservable, "observable dimension mismatch");
    const double e0 = values_.minCoeff();
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      const double w = std::exp(-beta * (values_(k) - e0));
      if (w == 0.0) continue;
      const Eigen::VectorXcd v = vectors_.col(k);
      num += w * v.dot(obs.matrix * v).real();
      den += w;
    }
    return num / den;
  }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

inline double exact_canonical_average(const PauliHamiltonian& h, const DenseOperator& obs, double beta) {
  require_hermitian(obs);
  return Spectrum(h).canonical_average(obs, beta);
}

inline constexpr double kBoltzmannEvPerK = 8.617333262e-5;

/// Physical temperature in kelvin and energy scale in eV to dimensionless beta.
inline double beta_from_temperature(double kelvin, double e_target_ev) {
  if (!(kelvin > 0.0) || !(e_target_ev > 0.0)) throw Error(ErrorKind::Range, "temperature and energy scale must be positive");
  return e_target_ev / (kBoltzmannEvPerK * kelvin);
}

struct RescaleReport {
  double e_max = 0.0;  // max |eigenvalue| of the unit-norm H
  double beta(double kelvin, double e_target_ev) const { return beta_from_temperature(kelvin, e_target_ev); }
};

inline RescaleReport rescale_report(const PauliHamiltonian& h) {
  const double norm = h.one_norm();
  const Spectrum s(h);
  return {std::max(std::abs(s.values().minCoeff()), std::abs(s.values().maxCoeff())) / norm};
}

}  // namespace spu
