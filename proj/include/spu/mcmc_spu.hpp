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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "spu/block_encoding.hpp"
#include "spu/circuit.hpp"
#include "spu/diagnostics.hpp"
#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"
#include "spu/qite.hpp"
#include "spu/random.hpp"
#include "spu/simulator.hpp"

namespace spu {

struct PairSample {
  std::size_t m = 0;
  std::size_t n = 0;
  double probability = 0.0;
};

/// (m, n) drawn independently from p; (m, n) and (n, m) are distinct draws.
inline PairSample sample_pair(const QiteExpansion& e, RandomStream& rng) {
  const std::size_t m = rng.categorical(e.p);
  const std::size_t n = rng.categorical(e.p);
  return {m, n, e.p[m] * e.p[n]};
}

/// ceil(|c|_1^4 ln(2/delta) / (2 eps^2)) pairs.
inline std::uint64_t required_pairs(double eps, double delta, const QiteExpansion& e) {
  if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(ErrorKind::Range, "eps and delta must lie in (0, 1)");
  const double l4 = std::pow(e.c_norm1, 4.0);
  return static_cast<std::uint64_t>(std::ceil(l4 * std::log(2.0 / delta) / (2.0 * eps * eps)));
}

/// Postselected branch (Abar = k, A = 0) of U_mn on input |i>.
struct Branch {
  Eigen::VectorXcd phi;  // unnormalized, |phi|^2 = weight
  double weight = 0.0;   // W_mn^{ik}
  double observable = 0.0;  // <phi|O|phi> / weight, 0 when weight is 0
};

/// Evaluates branches of one (m, n, k) circuit. Implementations must be safe
/// to call concurrently.
class BranchKernel {
 public:
  virtual ~BranchKernel() = default;
  virtual Branch branch(std::uint64_t i) const = 0;
  virtual std::uint64_t dimension() const = 0;
};

/// Branches from precomputed dense Chebyshev matrices:
/// phi = (T_m + (-1)^k T_n)|i> / 2. Mathematically equal to the circuit.
class DenseSpuEngine {
 public:
  DenseSpuEngine(const PauliHamiltonian& h, const QiteExpansion& e, const DenseOperator& obs) {
    require_dense(h.n_sites());
    require_hermitian(obs);
    const Eigen::MatrixXcd x = -to_dense(h).matrix / h.one_norm();
    const auto dim = x.rows();
    if (obs.matrix.rows() != dim) throw Error(ErrorKind::InvalidObservable, "observable dimension mismatch");
    t_.reserve(e.d + 1);
    t_.push_back(Eigen::MatrixXcd::Identity(dim, dim));
    if (e.d >= 1) t_.push_back(x);
    for (std::size_t j = 2; j <= e.d; ++j) t_.push_back(2.0 * x * t_[j - 1] - t_[j - 2]);
    ot_.reserve(t_.size());
    for (const auto& t : t_) ot_.push_back(obs.matrix * t);
  }

  class Kernel : public BranchKernel {
   public:
    Kernel(const DenseSpuEngine& eng, std::size_t m, std::size_t n, int k) {
      const double s = k == 0 ? 1.0 : -1.0;
      a_ = 0.5 * (eng.t_.at(m) + s * eng.t_.at(n));
      oa_ = 0.5 * (eng.ot_.at(m) + s * eng.ot_.at(n));
    }
    Branch branch(std::uint64_t i) const override {
      const auto col = static_cast<Eigen::Index>(i);
      Branch b;
      b.phi = a_.col(col);
      b.weight = b.phi.squaredNorm();
      if (b.weight > 0.0) b.observable = b.phi.dot(oa_.col(col)).real() / b.weight;
      return b;
    }
    std::uint64_t dimension() const override { return static_cast<std::uint64_t>(a_.rows()); }

   private:
    Eigen::MatrixXcd a_, oa_;
  };

  std::unique_ptr<BranchKernel> kernel(std::size_t m, std::size_t n, int k) const {
    return std::make_unique<Kernel>(*this, m, n, k);
  }

  std::size_t max_order() const { return t_.size() - 1; }
  const Eigen::MatrixXcd& chebyshev(std::size_t k) const { return t_.at(k); }

 private:
  std::vector<Eigen::MatrixXcd> t_, ot_;
};

/// U_mn as a gate list on (S, A, Abar): H(Abar), PREP, W^m fired by Abar=0,
/// W^n fired by Abar=1, PREP^dagger, H(Abar). The Abar=0 control is an X
/// sandwich around an ordinary control.
inline Circuit build_umn(std::size_t m, std::size_t n, const BlockEncoding& be) {
  if (!be.layout.has("Abar")) throw Error(ErrorKind::Layout, "block encoding lacks the superposition ancilla");
  const std::size_t bar = be.layout.superposition_qubit();
  const Circuit cw = be.walk.controlled({bar, true});
  Circuit u(be.layout.total());
  u.add(hadamard(bar));
  u.append(be.prepare);
  u.add(pauli_x(bar));
  for (std::size_t r = 0; r < m; ++r) u.append(cw);
  u.add(pauli_x(bar));
  for (std::size_t r = 0; r < n; ++r) u.append(cw);
  u.append(be.prepare.inverse());
  u.add(hadamard(bar));
  return u;
}

/// Branches by full statevector simulation of U_mn.
class CircuitSpuEngine {
 public:
  CircuitSpuEngine(const PauliHamiltonian& h, const DenseOperator& obs)
      : be_(build_block_encoding(h, true)), obs_(obs) {
    require_hermitian(obs);
    if (static_cast<std::uint64_t>(obs.matrix.rows()) != h.dimension())
      throw Error(ErrorKind::InvalidObservable, "observable dimension mismatch");
  }

  class Kernel : public BranchKernel {
   public:
    Kernel(const CircuitSpuEngine& eng, std::size_t m, std::size_t n, int k)
        : eng_(eng), circuit_(build_umn(m, n, eng.be_)), k_(k) {}

    Branch branch(std::uint64_t i) const override {
      const auto& layout = eng_.be_.layout;
      const std::size_t ns = layout.system_qubits();
      QuantumState s(layout.total(), i);
      s = apply_circuit(std::move(s), circuit_);
      const Register anc{"A+Abar", ns, layout.prep_qubits() + 1};
      auto [proj, w] = postselect(std::move(s), anc, static_cast<std::uint64_t>(k_) << layout.prep_qubits());
      Branch b;
      b.phi = Eigen::VectorXcd(static_cast<Eigen::Index>(std::uint64_t{1} << ns));
      const std::uint64_t offset = (static_cast<std::uint64_t>(k_) << layout.prep_qubits()) << ns;
      for (Eigen::Index j = 0; j < b.phi.size(); ++j) b.phi(j) = proj[offset + static_cast<std::uint64_t>(j)];
      b.weight = w;
      if (w > 0.0) b.observable = b.phi.dot(eng_.obs_.matrix * b.phi).real() / w;
      return b;
    }
    std::uint64_t dimension() const override { return std::uint64_t{1} << eng_.be_.layout.system_qubits(); }

    /// Probabilities of every (Abar, A) outcome for input |i>.
    std::vector<double> outcome_distribution(std::uint64_t i) const {
      const auto& layout = eng_.be_.layout;
      QuantumState s(layout.total(), i);
      s = apply_circuit(std::move(s), circuit_);
      return outcome_probabilities(s, Register{"A+Abar", layout.system_qubits(), layout.prep_qubits() + 1});
    }

   private:
    const CircuitSpuEngine& eng_;
    Circuit circuit_;
    int k_;
  };

  std::unique_ptr<Kernel> circuit_kernel(std::size_t m, std::size_t n, int k) const {
    return std::make_unique<Kernel>(*this, m, n, k);
  }
  std::unique_ptr<BranchKernel> kernel(std::size_t m, std::size_t n, int k) const { return circuit_kernel(m, n, k); }

  const BlockEncoding& block_encoding() const { return be_; }

 private:
  BlockEncoding be_;
  DenseOperator obs_;
};

inline constexpr double kDeadWeight = 1e-14;

struct ChainTrace {
  std::vector<std::uint64_t> labels;
  std::vector<double> weights;
  std::vector<double> values;
};

/// Markov chain over computational labels: at label i take the branch
/// state, record <O>, collapse it to j with probability |<j|phi>|^2 / W.
inline ChainTrace chain_trace(const BranchKernel& kernel, std::uint64_t start, std::size_t steps, RandomStream& rng) {
  ChainTrace t;
  t.labels.reserve(steps);
  t.weights.reserve(steps);
  t.values.reserve(steps);
  std::uint64_t i = start;
  std::vector<double> prob(kernel.dimension());
  for (std::size_t s = 0; s < steps; ++s) {
    const Branch b = kernel.branch(i);
    if (b.weight < kDeadWeight) throw Error(ErrorKind::DeadBranch, "postselection weight vanishes at label " + std::to_string(i));
    t.labels.push_back(i);
    t.weights.push_back(b.weight);
    t.values.push_back(b.observable);
    for (Eigen::Index j = 0; j < b.phi.size(); ++j) prob[static_cast<std::size_t>(j)] = std::norm(b.phi(j));
    i = rng.categorical(prob);
  }
  return t;
}

/// Estimate of Z^k/2^N from uniformly drawn labels; W values are exact
/// unless `shots` > 0, in which case each is a binomial frequency.
struct WeightEstimate {
  MeanError z;
  std::vector<std::uint64_t> labels;
  std::vector<double> weights;
};

inline WeightEstimate estimate_weight(const BranchKernel& kernel, std::size_t samples, RandomStream& rng,
                                      std::uint64_t shots = 0) {
  if (samples == 0) throw Error(ErrorKind::InsufficientData, "need at least one weight sample");
  WeightEstimate w;
  w.labels.reserve(samples);
  w.weights.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::uint64_t i = rng.below(kernel.dimension());
    double v = kernel.branch(i).weight;
    if (shots > 0) v = sample_probability(v, shots, rng);
    w.labels.push_back(i);
    w.weights.push_back(v);
  }
  w.z = mean_and_error(w.weights);
  return w;
}

struct SpuOptions {
  std::size_t chain_steps = 200;  // including burn-in
  std::size_t burn_in = 100;
  std::size_t z_samples = 64;
  std::uint64_t shots = 0;
  bool keep_traces = false;
};

/// One (m, n, k) record.
struct BranchRecord {
  std::size_t m = 0, n = 0;
  int k = 0;
  MeanError z;    // Z^k / 2^N
  MeanError obs;  // chain mean of <O>
  bool has_chain = false;
  bool dead = false;  // no positive weight among the samples
  std::uint64_t start_label = 0;
  std::size_t chain_steps = 0;
  std::size_t burn_in = 0;
  double tau = 0.5;
  ChainTrace trace;  // filled when keep_traces
  std::vector<double> z_weights;  // filled when keep_traces

  double signed_numerator() const { return (k == 0 ? 1.0 : -1.0) * z.mean * (has_chain ? obs.mean : 0.0); }
  double signed_denominator() const { return (k == 0 ? 1.0 : -1.0) * z.mean; }
};

/// Mean and error of the post-burn-in part of a chain.
inline std::pair<MeanError, double> chain_statistics(std::span<const double> kept) {
  if (kept.size() >= 64) {
    const AutocorrelationReport a = autocorrelation_time(kept);
    return {jackknife(kept, a.s_bin), a.tau};
  }
  return {mean_and_error(kept), 0.5};
}

/// Runs the chain for one branch from a given start label.
inline BranchRecord run_chain(const BranchKernel& kernel, std::size_t m, std::size_t n, int k, std::uint64_t start,
                              const SpuOptions& opt, RandomStream& rng) {
  if (m == n && k == 1) throw Error(ErrorKind::DeadBranch, "(m, m, 1) carries no weight and has no chain");
  if (opt.chain_steps <= opt.burn_in) throw Error(ErrorKind::Range, "chain steps must exceed burn-in");
  BranchRecord r;
  r.m = m;
  r.n = n;
  r.k = k;
  r.start_label = start;
  r.chain_steps = opt.chain_steps;
  r.burn_in = opt.burn_in;
  ChainTrace t = chain_trace(kernel, start, opt.chain_steps, rng);
  const std::span<const double> kept(t.values.data() + opt.burn_in, t.values.size() - opt.burn_in);
  std::tie(r.obs, r.tau) = chain_statistics(kept);
  r.has_chain = true;
  if (opt.keep_traces) r.trace = std::move(t);
  return r;
}

/// Z estimate plus chain for one branch. The chain starts from a label
/// resampled from the weight samples in proportion to W, which never picks
/// a zero-weight label.
inline BranchRecord run_branch(const BranchKernel& kernel, std::size_t m, std::size_t n, int k, const SpuOptions& opt,
                               const RandomStream& stream) {
  BranchRecord r;
  r.m = m;
  r.n = n;
  r.k = k;
  if (m == n && k == 1) return r;  // identically zero
  RandomStream zrng = stream.substream({1});
  WeightEstimate w = estimate_weight(kernel, opt.z_samples, zrng, opt.shots);
  const bool any = std::any_of(w.weights.begin(), w.weights.end(), [](double v) { return v >= kDeadWeight; });
  if (!any) {
    r.z = w.z;
    r.dead = true;
    if (opt.keep_traces) r.z_weights = std::move(w.weights);
    return r;
  }
  RandomStream srng = stream.substream({2});
  std::vector<double> exact(w.labels.size());
  for (std::size_t s = 0; s < w.labels.size(); ++s) {
    const double v = opt.shots > 0 ? kernel.branch(w.labels[s]).weight : w.weights[s];
    exact[s] = v >= kDeadWeight ? v : 0.0;
  }
  if (std::all_of(exact.begin(), exact.end(), [](double v) { return v == 0.0; })) {
    r.z = w.z;
    r.dead = true;
    return r;
  }
  const std::uint64_t start = w.labels[srng.categorical(exact)];
  RandomStream crng = stream.substream({3});
  BranchRecord c = run_chain(kernel, m, n, k, start, opt, crng);
  c.z = w.z;
  if (opt.keep_traces) c.z_weights = std::move(w.weights);
  return c;
}

struct PairRecord {
  std::uint64_t index = 0;
  PairSample pair;
  BranchRecord branch[2];

  double numerator() const { return branch[0].signed_numerator() + branch[1].signed_numerator(); }
  double denominator() const { return branch[0].signed_denominator() + branch[1].signed_denominator(); }
};

/// Everything needed to recreate a pair from its seed keys.
struct SpuRun {
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
};

template <class Engine>
PairRecord run_pair(const Engine& engine, const QiteExpansion& e, const SpuOptions& opt, const SpuRun& run,
                    std::uint64_t index) {
  const RandomStream base(run.seed, {run.run_id, index});
  RandomStream prng = base.substream({0});
  PairRecord rec;
  rec.index = index;
  rec.pair = sample_pair(e, prng);
  for (int k = 0; k < 2; ++k) {
    if (rec.pair.m == rec.pair.n && k == 1) {
      rec.branch[1].m = rec.pair.m;
      rec.branch[1].n = rec.pair.n;
      rec.branch[1].k = 1;
      continue;
    }
    const auto kernel = engine.kernel(rec.pair.m, rec.pair.n, k);
    rec.branch[k] = run_branch(*kernel, rec.pair.m, rec.pair.n, k, opt, base.substream({10 + static_cast<std::uint64_t>(k)}));
  }
  return rec;
}

/// Runs `count` pairs on `workers` threads. Pair p always uses the stream
/// keyed by (seed, run_id, p), and results are stored by index, so output is
/// identical for any worker count.
template <class Engine>
std::vector<PairRecord> run_pairs(const Engine& engine, const QiteExpansion& e, const SpuOptions& opt,
                                  const SpuRun& run, std::uint64_t count, unsigned workers = 1) {
  std::vector<PairRecord> out(count);
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      const std::uint64_t p = next.fetch_add(1);
      if (p >= count) return;
      try {
        out[p] = run_pair(engine, e, opt, run, p);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  return out;
}

struct ThermalEstimate {
  double value = 0.0;
  MeanError numerator;
  MeanError denominator;
  double stat_error = 0.0;
  double truncation_band = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t dead_branches = 0;

  double combined_error(double sigmas = 1.0) const { return sigmas * stat_error + truncation_band; }
};

/// Truncation band of the ratio. With |f~ - f| <= nu, each trace moves by at
/// most nu(2|f| + nu) per basis state (times |O| for the numerator); the
/// ratio then moves by at most that times (|O| + |value|) over the
/// normalized denominator Tr[f~^2]/2^N.
inline double truncation_band(const QiteExpansion& e, double value, double denominator, double obs_norm,
                              double f_norm) {
  const double trace_den = denominator * e.c_norm1 * e.c_norm1;
  if (!(trace_den > 0.0)) return std::numeric_limits<double>::infinity();
  return e.nu * (2.0 * f_norm + e.nu) * (obs_norm + std::abs(value)) / trace_den;
}

/// Ratio of the pair-averaged numerator and denominator. `f_norm` defaults
/// to the bound e^{beta/2} on |e^{-(beta/2)H}| for |H| <= 1.
inline ThermalEstimate combine(const std::vector<PairRecord>& records, const QiteExpansion& e, double obs_norm = 1.0,
                               double f_norm = -1.0) {
  if (records.empty()) throw Error(ErrorKind::InsufficientData, "no pair records");
  std::vector<double> x, y;
  x.reserve(records.size());
  y.reserve(records.size());
  ThermalEstimate t;
  for (const auto& r : records) {
    x.push_back(r.numerator());
    y.push_back(r.denominator());
    t.dead_branches += (r.branch[0].dead ? 1 : 0) + (r.branch[1].dead ? 1 : 0);
  }
  t.pairs = records.size();
  t.numerator = mean_and_error(x);
  t.denominator = mean_and_error(y);
  if (!(t.denominator.mean > 0.0)) throw Error(ErrorKind::Indeterminate, "denominator estimate is not positive");
  const RatioEstimate r = ratio_error(t.numerator, t.denominator);
  if (r.indeterminate) throw Error(ErrorKind::Indeterminate, "denominator is consistent with zero");
  t.value = r.value;
  t.stat_error = r.stderr_;
  if (f_norm < 0.0) f_norm = std::exp(e.beta / 2.0);
  t.truncation_band = truncation_band(e, t.value, t.denominator.mean, obs_norm, f_norm);
  return t;
}

/// Exhaustive evaluation: every (m, n, k) and every label i, weighted by
/// p_m p_n. No sampling error.
template <class Engine>
ThermalEstimate exhaustive_estimate(const Engine& engine, const QiteExpansion& e, double obs_norm = 1.0,
                                    double f_norm = -1.0) {
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m <= e.d; ++m) {
    for (std::size_t n = 0; n <= e.d; ++n) {
      const double w = e.p[m] * e.p[n];
      for (int k = 0; k < 2; ++k) {
        if (m == n && k == 1) continue;
        const auto kernel = engine.kernel(m, n, k);
        const double sign = k == 0 ? 1.0 : -1.0;
        double zn = 0.0, zd = 0.0;
        for (std::uint64_t i = 0; i < kernel->dimension(); ++i) {
          const Branch b = kernel->branch(i);
          zd += b.weight;
          zn += b.weight * b.observable;
        }
        const double inv = 1.0 / static_cast<double>(kernel->dimension());
        num += w * sign * zn * inv;
        den += w * sign * zd * inv;
      }
    }
  }
  ThermalEstimate t;
  t.numerator = {num, 0.0};
  t.denominator = {den, 0.0};
  if (!(den > 0.0)) throw Error(ErrorKind::Indeterminate, "denominator is not positive");
  t.value = num / den;
  if (f_norm < 0.0) f_norm = std::exp(e.beta / 2.0);
  t.truncation_band = truncation_band(e, t.value, den, obs_norm, f_norm);
  return t;
}

/// Exact transition matrix of the (m, n, k) chain: P(i -> j) = |<j|phi_i>|^2 / W_i,
/// rows with W_i = 0 left empty.
inline Eigen::MatrixXd spu_transition_matrix(const BranchKernel& kernel) {
  const auto dim = static_cast<Eigen::Index>(kernel.dimension());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Branch b = kernel.branch(static_cast<std::uint64_t>(i));
    if (b.weight < kDeadWeight) continue;
    for (Eigen::Index j = 0; j < dim; ++j) p(i, j) = std::norm(b.phi(j)) / b.weight;
  }
  return p;
}

/// {W_i / Z} for the (m, n, k) chain.
inline Eigen::VectorXd spu_stationary_weights(const BranchKernel& kernel) {
  const auto dim = static_cast<Eigen::Index>(kernel.dimension());
  Eigen::VectorXd w(dim);
  for (Eigen::Index i = 0; i < dim; ++i) w(i) = kernel.branch(static_cast<std::uint64_t>(i)).weight;
  const double z = w.sum();
  if (z > 0.0) w /= z;
  return w;
}

struct SurveyRow {
  double beta = 0.0;
  std::size_t d = 0;
  double mean = 0.0;        // unweighted over valid (m, n, k)
  double stderr_ = 0.0;
  double weighted_mean = 0.0;  // weighted by p_m p_n
  std::size_t entries = 0;
  double max_equal_order_odd = 0.0;  // largest (m, m, 1) probability
};

/// Success probability of outcome (k, A = 0) for every (m, n, k), averaged
/// over computational inputs. With `inputs` = 0 the average is over all 2^N
/// labels through the trace Tr[T_m T_n]/2^N; otherwise `inputs` uniformly
/// drawn labels are pushed through the Chebyshev recurrence.
inline std::vector<SurveyRow> postselection_survey(const PauliHamiltonian& h, const std::vector<double>& betas,
                                                   double nu, std::size_t inputs = 0, std::uint64_t seed = 0) {
  if (h.n_sites() > 10) throw Error(ErrorKind::OracleSize, "survey limited to 10 sites");
  std::vector<SurveyRow> rows;
  const double lambda = h.one_norm();
  std::unique_ptr<Spectrum> spec;
  if (inputs == 0) spec = std::make_unique<Spectrum>(h);
  for (double beta : betas) {
    const QiteExpansion e = build_expansion(beta, nu);
    const std::size_t d = e.d;
    // gram(m, n) = average over inputs of <i|T_m T_n|i>, real for Hermitian T.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1));
    if (inputs == 0) {
      const auto& ev = spec->values();
      Eigen::MatrixXd tv(static_cast<Eigen::Index>(d + 1), ev.size());
      for (Eigen::Index q = 0; q < ev.size(); ++q) {
        const double x = -ev(q) / lambda;
        tv(0, q) = 1.0;
        if (d >= 1) tv(1, q) = x;
        for (std::size_t j = 2; j <= d; ++j)
          tv(static_cast<Eigen::Index>(j), q) = 2.0 * x * tv(static_cast<Eigen::Index>(j - 1), q) - tv(static_cast<Eigen::Index>(j - 2), q);
      }
      gram = tv * tv.transpose() / static_cast<double>(ev.size());
    } else {
      RandomStream rng(seed, {static_cast<std::uint64_t>(std::llround(beta * 1e6))});
      for (std::size_t s = 0; s < inputs; ++s) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.dimension()));
        v(static_cast<Eigen::Index>(rng.below(h.dimension()))) = 1.0;
        const auto t = chebyshev_vectors(h, d, v);
        for (std::size_t m = 0; m <= d; ++m)
          for (std::size_t n = 0; n <= d; ++n)
            gram(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) += t[m].dot(t[n]).real();
      }
      gram /= static_cast<double>(inputs);
    }
    SurveyRow row;
    row.beta = beta;
    row.d = d;
    std::vector<double> vals;
    double weight_sum = 0.0;
    for (std::size_t m = 0; m <= d; ++m) {
      for (std::size_t n = 0; n <= d; ++n) {
        const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);
        for (int k = 0; k < 2; ++k) {
          const double s = k == 0 ? 1.0 : -1.0;
          const double p = 0.25 * (gram(mi, mi) + gram(ni, ni) + 2.0 * s * gram(mi, ni));
          if (m == n && k == 1) {
            row.max_equal_order_odd = std::max(row.max_equal_order_odd, std::abs(p));
            continue;
          }
          vals.push_back(p);
          row.weighted_mean += e.p[m] * e.p[n] * p;
          weight_sum += e.p[m] * e.p[n];
        }
      }
    }
    row.weighted_mean /= weight_sum;
    const MeanError me = mean_and_error(vals);
    row.mean = me.mean;
    row.stderr_ = me.stderr_;
    row.entries = vals.size();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spu
