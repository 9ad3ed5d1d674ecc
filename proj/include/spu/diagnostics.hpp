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
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spu/error.hpp"

namespace spu {

struct MeanError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline double mean_of(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorKind::InsufficientData, "mean of an empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sample mean with the standard error of the mean (n-1 variance).
inline MeanError mean_and_error(std::span<const double> x) {
  const double m = mean_of(x);
  if (x.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()))};
}

struct GelmanRubin {
  double r_hat = 1.0;
  double within = 0.0;   // W
  double between = 0.0;  // B
  double v_hat = 0.0;
  bool degenerate = false;  // all chains constant; reported as converged
  bool converged() const { return degenerate || r_hat <= 1.1; }
};

inline constexpr double kGelmanRubinThreshold = 1.1;

/// Potential scale reduction over equal-length series. W carries the
/// 1/(N_step (N_series - 1)) normalization of the two-chain protocol, so for
/// more than two series it is not the textbook average within-chain variance.
inline GelmanRubin gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const std::size_t k = chains.size();
  if (k < 2) throw Error(ErrorKind::InsufficientData, "Gelman-Rubin needs at least two series");
  const std::size_t n = chains.front().size();
  if (n < 2) throw Error(ErrorKind::InsufficientData, "Gelman-Rubin needs at least two steps per series");
  for (const auto& c : chains)
    if (c.size() != n) throw Error(ErrorKind::InsufficientData, "series lengths differ");

  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  std::vector<double> means(k);
  for (std::size_t j = 0; j < k; ++j) means[j] = mean_of(chains[j]);
  const double grand = mean_of(means);
  double w = 0.0, b = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    for (double v : chains[j]) w += (v - means[j]) * (v - means[j]);
    b += (means[j] - grand) * (means[j] - grand);
  }
  w /= dn * (dk - 1.0);
  b *= dn / (dk - 1.0);
  GelmanRubin g;
  g.within = w;
  g.between = b;
  g.v_hat = (dn - 1.0) / dn * w + b / dn;
  if (w < 1e-14) {
    g.degenerate = true;
    g.r_hat = 1.0;
    return g;
  }
  g.r_hat = std::sqrt(g.v_hat / w);
  return g;
}

struct RelaxationReport {
  std::size_t n_relax = 0;
  bool converged = false;
  std::vector<std::pair<std::size_t, double>> r_hat_by_window;  // (N_step, R_hat)
};

/// Generates `steps` observable values of a chain started from `label`.
using ChainRunner = std::function<std::vector<double>(std::uint64_t label, std::size_t steps)>;

/// Every site up.
inline std::uint64_t ferro_label(std::size_t) { return 0; }

/// |0101...> read left to right from site 1, so even sites are set.
inline std::uint64_t antiferro_label(std::size_t n_sites) {
  std::uint64_t l = 0;
  for (std::size_t j = 2; j <= n_sites; j += 2) l |= std::uint64_t{1} << (j - 1);
  return l;
}

inline std::vector<std::size_t> default_relaxation_schedule(std::size_t n_max) {
  std::vector<std::size_t> s;
  for (std::size_t w = 4; w <= n_max; w += 4) s.push_back(w);
  if (s.empty() || s.back() != n_max) s.push_back(std::max<std::size_t>(n_max, 2));
  return s;
}

/// Runs two chains of 2*max(schedule) steps from the given starts. For each
/// window size N_step, the steps [N_step, 2 N_step) of both chains are
/// compared; n_relax is the first N_step whose R_hat passes.
inline RelaxationReport relaxation_scan(const ChainRunner& run, std::uint64_t start_a, std::uint64_t start_b,
                                        std::vector<std::size_t> schedule) {
  if (schedule.empty()) throw Error(ErrorKind::InsufficientData, "empty window schedule");
  std::sort(schedule.begin(), schedule.end());
  const std::size_t longest = 2 * schedule.back();
  const auto a = run(start_a, longest);
  const auto b = run(start_b, longest);
  if (a.size() < longest || b.size() < longest) throw Error(ErrorKind::InsufficientData, "chain runner returned too few steps");
  RelaxationReport rep;
  for (std::size_t w : schedule) {
    if (w < 2) continue;
    std::vector<std::vector<double>> win{{a.begin() + static_cast<std::ptrdiff_t>(w), a.begin() + static_cast<std::ptrdiff_t>(2 * w)},
                                         {b.begin() + static_cast<std::ptrdiff_t>(w), b.begin() + static_cast<std::ptrdiff_t>(2 * w)}};
    const GelmanRubin g = gelman_rubin(win);
    rep.r_hat_by_window.emplace_back(w, g.r_hat);
    if (g.converged()) {
      rep.n_relax = w;
      rep.converged = true;
      return rep;
    }
  }
  return rep;
}

/// relaxation_scan from the ferromagnetic and antiferromagnetic starts;
/// throws when no window passes.
inline RelaxationReport find_relaxation(const ChainRunner& run, std::size_t n_sites, std::size_t n_max,
                                        std::vector<std::size_t> schedule = {}) {
  if (schedule.empty()) schedule = default_relaxation_schedule(n_max);
  RelaxationReport rep = relaxation_scan(run, ferro_label(n_sites), antiferro_label(n_sites), std::move(schedule));
  if (!rep.converged) {
    std::string msg = "no window up to " + std::to_string(n_max) + " passed R_hat <= 1.1; last R_hat ";
    msg += rep.r_hat_by_window.empty() ? "n/a" : std::to_string(rep.r_hat_by_window.back().second);
    throw Error(ErrorKind::NonConverged, msg);
  }
  return rep;
}

/// Leave-one-bin-out jackknife of f(mean). The tail that does not fill a
/// whole bin is dropped.
inline MeanError jackknife(std::span<const double> series, std::size_t s_bin,
                           const std::function<double(double)>& f = [](double x) { return x; }) {
  if (s_bin == 0) throw Error(ErrorKind::InsufficientData, "bin size must be positive");
  const std::size_t m_b = series.size() / s_bin;
  if (m_b < 2) throw Error(ErrorKind::InsufficientData, "jackknife needs at least two bins");
  const std::size_t used = m_b * s_bin;
  std::vector<double> bin_sum(m_b, 0.0);
  double total = 0.0;
  for (std::size_t l = 0; l < used; ++l) {
    bin_sum[l / s_bin] += series[l];
    total += series[l];
  }
  const double denom = static_cast<double>(used - s_bin);
  double f1 = 0.0, f2 = 0.0;
  for (std::size_t b = 0; b < m_b; ++b) {
    const double fb = f((total - bin_sum[b]) / denom);
    f1 += fb;
    f2 += fb * fb;
  }
  f1 /= static_cast<double>(m_b);
  f2 /= static_cast<double>(m_b);
  const double var = std::max(0.0, f2 - f1 * f1);
  return {f1, std::sqrt(static_cast<double>(m_b - 1) * var)};
}

struct AutocorrelationReport {
  double tau = 0.5;
  std::size_t s_bin = 1;
  bool saturated = true;
  std::vector<std::pair<std::size_t, double>> stderr_by_bin;  // (s_bin, stderr)

  double n_eff(std::size_t n_sample) const { return static_cast<double>(n_sample) / (2.0 * tau); }
};

inline constexpr double kSaturationTolerance = 0.10;

/// Doubles the jackknife bin size until the standard error stops moving by
/// more than 10% across two successive doublings; tau = s_bin / 2 at the
/// first bin size of that flat stretch. Without saturation by length/4 the
/// result is flagged and tau is a lower bound.
inline AutocorrelationReport autocorrelation_time(std::span<const double> series) {
  if (series.size() < 64) throw Error(ErrorKind::InsufficientData, "autocorrelation needs at least 64 values");
  AutocorrelationReport rep;
  const std::size_t s_max = series.size() / 4;
  for (std::size_t s = 1; s <= s_max; s *= 2) rep.stderr_by_bin.emplace_back(s, jackknife(series, s).stderr_);
  auto flat = [](double from, double to) {
    if (from == 0.0) return to == 0.0;
    return std::abs(to - from) / from < kSaturationTolerance;
  };
  const auto& c = rep.stderr_by_bin;
  for (std::size_t i = 0; i + 2 < c.size(); ++i) {
    if (flat(c[i].second, c[i + 1].second) && flat(c[i + 1].second, c[i + 2].second)) {
      rep.s_bin = c[i].first;
      rep.tau = static_cast<double>(rep.s_bin) / 2.0;
      rep.saturated = true;
      return rep;
    }
  }
  rep.saturated = false;
  rep.s_bin = c.back().first;
  rep.tau = static_cast<double>(rep.s_bin) / 2.0;
  return rep;
}

/// Median of the means of n_block equal blocks; leftover samples are dropped.
inline double median_of_means(std::span<const double> samples, std::size_t n_block) {
  if (n_block == 0 || n_block > samples.size()) throw Error(ErrorKind::InvalidPartition, "block count must lie in [1, sample count]");
  const std::size_t size = samples.size() / n_block;
  std::vector<double> means(n_block);
  for (std::size_t b = 0; b < n_block; ++b) means[b] = mean_of(samples.subspan(b * size, size));
  std::sort(means.begin(), means.end());
  if (n_block % 2 == 1) return means[n_block / 2];
  return 0.5 * (means[n_block / 2 - 1] + means[n_block / 2]);
}

/// Upper bound on P(|MoM - mu| > eps) for blocks of n_size samples with
/// variance sigma2. Only meaningful when sigma2 / (n_size eps^2) < 1/2.
inline double median_of_means_bound(std::size_t n_block, std::size_t n_size, double sigma2, double eps) {
  const double gap = 0.5 - sigma2 / (static_cast<double>(n_size) * eps * eps);
  if (gap <= 0.0) return 1.0;
  return std::exp(-2.0 * static_cast<double>(n_block) * gap * gap);
}

struct RatioEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  bool indeterminate = false;  // |den| < 3 sigma_den
};

/// First-order propagation for num/den, ignoring their covariance.
inline RatioEstimate ratio_error(MeanError num, MeanError den) {
  if (den.mean == 0.0) throw Error(ErrorKind::Indeterminate, "denominator is zero");
  RatioEstimate r;
  r.value = num.mean / den.mean;
  const double rel_d = den.stderr_ / den.mean;
  if (num.mean == 0.0) {
    r.stderr_ = std::abs(num.stderr_ / den.mean);
  } else {
    const double rel_n = num.stderr_ / num.mean;
    r.stderr_ = std::abs(r.value) * std::sqrt(rel_n * rel_n + rel_d * rel_d);
  }
  r.indeterminate = std::abs(den.mean) < 3.0 * den.stderr_;
  return r;
}

}  // namespace spu
