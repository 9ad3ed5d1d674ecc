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
#include <span>
#include <utility>
#include <vector>

#include "spu/diagnostics.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/qite.hpp"
#include "spu/random.hpp"

namespace spu {

struct MettsRecord {
  double beta = 0.0;
  std::vector<std::uint64_t> labels;
  std::vector<double> values;
  std::size_t burn_in = 0;
  MeanError estimate;  // post-burn-in mean, jackknife error
  double tau = 0.5;
};

/// Imaginary-time operator used by the METTS chain. Columns are the
/// unnormalized typical states F|i>.
class MettsOperator {
 public:
  /// Truncated Chebyshev series (what the LCU circuit implements).
  MettsOperator(const PauliHamiltonian& h, const QiteExpansion& e) : f_(truncated_operator(e, h)), beta_(e.beta) {}

  /// Exact e^{-(beta/2)H}.
  MettsOperator(const PauliHamiltonian& h, double beta) : beta_(beta) {
    const Spectrum s(h);
    const double e0 = s.values().minCoeff();
    // Shifted by the ground energy; the chain only sees ratios.
    f_ = s.apply_function([&](double en) { return std::exp(-0.5 * beta * (en - e0)); });
  }

  const Eigen::MatrixXcd& matrix() const noexcept { return f_; }
  double beta() const noexcept { return beta_; }
  std::uint64_t dimension() const { return static_cast<std::uint64_t>(f_.rows()); }

  /// P_i = <i|F^dagger F|i>.
  Eigen::VectorXd weights() const { return f_.colwise().squaredNorm().transpose(); }

  /// p(i -> j) = |<j|F|i>|^2 / P_i.
  Eigen::MatrixXd transition_matrix() const {
    const Eigen::VectorXd w = weights();
    Eigen::MatrixXd p(f_.rows(), f_.cols());
    for (Eigen::Index i = 0; i < f_.cols(); ++i)
      for (Eigen::Index j = 0; j < f_.rows(); ++j) p(i, j) = std::norm(f_(j, i)) / w(i);
    return p;
  }

 private:
  Eigen::MatrixXcd f_;
  double beta_ = 0.0;
};

/// Plain METTS chain with computational-basis collapse. The start label is
/// drawn uniformly. At beta = 0 the typical state is the label itself, so
/// the chain stays where it starts.
inline MettsRecord qmetts_run(const MettsOperator& f, const DenseOperator& obs, std::size_t steps, std::size_t burn_in,
                              RandomStream& rng) {
  require_hermitian(obs);
  if (steps <= burn_in) throw Error(ErrorKind::Range, "steps must exceed burn-in");
  if (static_cast<std::uint64_t>(obs.matrix.rows()) != f.dimension())
    throw Error(ErrorKind::InvalidObservable, "observable dimension mismatch");
  const Eigen::MatrixXcd of = obs.matrix * f.matrix();
  MettsRecord r;
  r.beta = f.beta();
  r.burn_in = burn_in;
  r.labels.reserve(steps);
  r.values.reserve(steps);
  std::uint64_t i = rng.below(f.dimension());
  std::vector<double> prob(f.dimension());
  for (std::size_t s = 0; s < steps; ++s) {
    const auto col = static_cast<Eigen::Index>(i);
    const Eigen::VectorXcd phi = f.matrix().col(col);
    const double w = phi.squaredNorm();
    if (w < 1e-300) throw Error(ErrorKind::DegenerateState, "typical state vanishes");
    r.labels.push_back(i);
    r.values.push_back(phi.dot(of.col(col)).real() / w);
    for (Eigen::Index j = 0; j < phi.size(); ++j) prob[static_cast<std::size_t>(j)] = std::norm(phi(j));
    i = rng.categorical(prob);
  }
  const std::span<const double> kept(r.values.data() + burn_in, r.values.size() - burn_in);
  if (kept.size() >= 64) {
    const AutocorrelationReport a = autocorrelation_time(kept);
    r.tau = a.tau;
    r.estimate = jackknife(kept, a.s_bin);
  } else {
    r.estimate = mean_and_error(kept);
  }
  return r;
}

}  // namespace spu
