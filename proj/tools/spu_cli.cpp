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

// Batch front-end: exact | resources | qmetts | mcmc-spu | diagnose.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "spu/spu.hpp"

namespace {

using namespace spu;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;
constexpr int kExitNonConverged = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::OracleSize: return kExitOracle;
    case ErrorKind::NonConverged: return kExitNonConverged;
    default: return kExitFailure;
  }
}

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::uint64_t> shots;
  bool exhaustive = false;
  std::string ledger;
};

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.out) c.output_dir = *o.out;
  if (o.shots) c.shots = *o.shots;
  c.validate();
  return c;
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  const auto path = std::filesystem::path(c.output_dir) / name;
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
  std::cerr << "writing " << path.string() << "\n";
  return f;
}

DenseOperator observable_for(const RunConfig& c, const PauliHamiltonian& h) {
  return c.observable == "field" ? field_observable(c.sites) : to_dense(h);
}

// Temperature column when the grid came from kelvin values, else 0.
double kelvin_at(const RunConfig& c, std::size_t i) { return c.temperatures_k.empty() ? 0.0 : c.temperatures_k[i]; }

// Energy unit of the dimensionless values: e_max_ev when set, else 1.
double unit_of(const RunConfig& c) { return c.e_max_ev > 0.0 ? c.e_max_ev : 1.0; }

int cmd_exact(const RunConfig& c) {
  const PauliHamiltonian h = build_tfi(c.sites, c.theta);
  const Spectrum s(h);
  const DenseOperator obs = observable_for(c, h);
  const auto betas = c.beta_grid();
  auto f = open_output(c, "exact.csv");
  CsvWriter w(f, {"beta", "temperature_k", "value", "value_scaled"}, c.echo());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double v = s.canonical_average(obs, betas[i]);
    w.row() << betas[i] << kelvin_at(c, i) << v << v * unit_of(c);
    std::printf("beta=%-10.6g value=%.12g\n", betas[i], v);
  }
  return kExitOk;
}

int cmd_resources(const RunConfig& c) {
  const QiteExpansion e = build_expansion(c.resource_beta, c.resource_nu);
  std::printf("d=%zu (beta=%.6g, nu=%.6g)\n", e.d, c.resource_beta, c.resource_nu);
  auto f = open_output(c, "resources.csv");
  CsvWriter w(f,
              {"n_sites", "d", "d_average", "qubits_mcmc_spu", "qubits_conventional", "clifford_conventional",
               "rotations_conventional", "clifford_mcmc_max", "rotations_mcmc_max", "clifford_mcmc_average",
               "rotations_mcmc_average", "ratio_max", "ratio_average", "star_conventional", "star_mcmc_max",
               "star_mcmc_average"},
              c.echo() + "; d=" + std::to_string(e.d));
  for (std::size_t n : c.resource_sizes) {
    const CostRow r = compare_costs_at(n, e);
    w.row() << r.n_sites << r.d << r.d_average << r.qubits_mcmc << r.qubits_conventional << r.conventional.clifford
            << r.conventional.rotations << r.mcmc_max.clifford << r.mcmc_max.rotations << r.mcmc_average.clifford
            << r.mcmc_average.rotations << r.max_ratio() << r.average_ratio() << star_budget(r.conventional.rotations)
            << star_budget(r.mcmc_max.rotations) << star_budget(r.mcmc_average.rotations);
    std::printf("N=%-4zu rotations conv=%.4g max=%.4g avg=%.4g  ratio max=%.1f avg=%.1f\n", n, r.conventional.rotations,
                r.mcmc_max.rotations, r.mcmc_average.rotations, r.max_ratio(), r.average_ratio());
  }
  return kExitOk;
}

int cmd_qmetts(const RunConfig& c) {
  require_dense(c.sites);
  const PauliHamiltonian h = build_tfi(c.sites, c.theta);
  const DenseOperator obs = observable_for(c, h);
  const Spectrum s(h);
  const auto betas = c.beta_grid();
  auto fe = open_output(c, "qmetts.csv");
  auto fl = open_output(c, "qmetts_ledger.csv");
  CsvWriter we(fe, {"beta", "temperature_k", "value", "stderr", "tau", "exact", "value_scaled"}, c.echo());
  CsvWriter wl(fl, {"beta_index", "step", "label", "value", "seed"}, c.echo());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const MettsOperator f = c.qmetts_exact_operator ? MettsOperator(h, betas[b])
                                                    : MettsOperator(h, build_expansion(betas[b], c.nu));
    RandomStream rng(c.seed, {c.run_id, 0x4d455454ULL, b});
    const MettsRecord r = qmetts_run(f, obs, c.qmetts_steps, c.qmetts_burn_in, rng);
    const double exact = s.canonical_average(obs, betas[b]);
    we.row() << betas[b] << kelvin_at(c, b) << r.estimate.mean << r.estimate.stderr_ << r.tau << exact
             << r.estimate.mean * unit_of(c);
    for (std::size_t t = 0; t < r.values.size(); ++t) wl.row() << b << t << r.labels[t] << r.values[t] << c.seed;
    std::printf("beta=%-10.6g qmetts=%.8g +- %.2g  exact=%.8g  tau=%.1f\n", betas[b], r.estimate.mean,
                r.estimate.stderr_, exact, r.tau);
  }
  return kExitOk;
}

std::uint64_t effective_run_id(const RunConfig& c, std::size_t beta_index) { return (c.run_id << 16) | beta_index; }

SpuOptions spu_options(const RunConfig& c) {
  SpuOptions o;
  o.chain_steps = c.chain_steps;
  o.burn_in = c.burn_in;
  o.z_samples = c.z_samples;
  o.shots = c.shots;
  return o;
}

const std::vector<std::string> kLedgerColumns{"run_id", "beta", "pair", "m", "n", "k", "z_estimate", "z_stderr",
                                              "obs_mean", "obs_stderr", "chain_length", "relaxation", "tau",
                                              "start_label", "dead", "seed"};

int cmd_mcmcspu(const RunConfig& c, bool exhaustive) {
  require_dense(c.sites);
  const PauliHamiltonian h = build_tfi(c.sites, c.theta);
  const DenseOperator obs = observable_for(c, h);
  const Spectrum s(h);
  const auto betas = c.beta_grid();
  auto fe = open_output(c, "mcmc_spu.csv");
  CsvWriter we(fe,
               {"beta", "temperature_k", "value", "stat_error", "truncation_band", "combined_error", "numerator",
                "denominator", "pairs", "dead_branches", "exact", "value_scaled"},
               c.echo() + (exhaustive ? "; mode=exhaustive" : "; mode=sampled"));
  std::optional<std::ofstream> fl;
  std::optional<CsvWriter> wl;
  if (!exhaustive) {
    fl.emplace(open_output(c, "mcmc_spu_ledger.csv"));
    wl.emplace(*fl, kLedgerColumns, c.echo());
  }
  for (std::size_t b = 0; b < betas.size(); ++b) {
    const QiteExpansion e = build_expansion(betas[b], c.nu);
    const DenseSpuEngine engine(h, e, obs);
    const double exact = s.canonical_average(obs, betas[b]);
    ThermalEstimate t;
    if (exhaustive) {
      t = exhaustive_estimate(engine, e);
    } else {
      const std::uint64_t count = c.pairs > 0 ? c.pairs : required_pairs(c.epsilon, c.delta, e);
      std::fprintf(stderr, "beta=%.6g d=%zu pairs=%llu\n", betas[b], e.d, static_cast<unsigned long long>(count));
      const SpuRun run{c.seed, effective_run_id(c, b)};
      const auto records = run_pairs(engine, e, spu_options(c), run, count, c.workers);
      t = combine(records, e);
      // Writer order is (m, n, k, pair), independent of completion order.
      std::vector<std::tuple<std::size_t, std::size_t, int, std::uint64_t>> order;
      for (const auto& r : records)
        for (int k = 0; k < 2; ++k)
          if (!(r.pair.m == r.pair.n && k == 1)) order.emplace_back(r.pair.m, r.pair.n, k, r.index);
      std::sort(order.begin(), order.end());
      for (const auto& [m, n, k, idx] : order) {
        const BranchRecord& br = records[idx].branch[k];
        wl->row() << run.run_id << betas[b] << idx << m << n << k << br.z.mean << br.z.stderr_ << br.obs.mean
                  << br.obs.stderr_ << br.chain_steps << br.burn_in << br.tau << br.start_label << (br.dead ? 1 : 0)
                  << c.seed;
      }
    }
    we.row() << betas[b] << kelvin_at(c, b) << t.value << t.stat_error << t.truncation_band << t.combined_error()
             << t.numerator.mean << t.denominator.mean << t.pairs << t.dead_branches << exact << t.value * unit_of(c);
    std::printf("beta=%-10.6g mcmc-spu=%.8g +- %.2g (band %.2g)  exact=%.8g\n", betas[b], t.value, t.stat_error,
                t.truncation_band, exact);
  }
  return kExitOk;
}

// Relaxation from ferro and antiferro starts for every distinct (m, n, k)
// in a ledger, plus the mean recorded tau.
int cmd_diagnose(const RunConfig& c, const std::string& ledger_path) {
  require_dense(c.sites);
  const std::string path =
      ledger_path.empty() ? (std::filesystem::path(c.output_dir) / "mcmc_spu_ledger.csv").string() : ledger_path;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open ledger '" + path + "'");
  const CsvTable t = read_csv(in);
  const std::size_t cb = t.column("beta"), cm = t.column("m"), cn = t.column("n"), ck = t.column("k"),
                    ctau = t.column("tau"), cdead = t.column("dead");
  struct Acc {
    double tau_sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::tuple<double, std::size_t, std::size_t, int>, Acc> groups;
  for (const auto& row : t.rows) {
    if (row[cdead] == "1") continue;
    auto& a = groups[{std::stod(row[cb]), std::stoul(row[cm]), std::stoul(row[cn]), std::stoi(row[ck])}];
    a.tau_sum += std::stod(row[ctau]);
    ++a.count;
  }
  const PauliHamiltonian h = build_tfi(c.sites, c.theta);
  const DenseOperator obs = observable_for(c, h);
  std::map<double, std::unique_ptr<DenseSpuEngine>> engines;
  std::map<double, QiteExpansion> expansions;
  auto f = open_output(c, "diagnose.csv");
  CsvWriter w(f, {"beta", "m", "n", "k", "records", "tau_mean", "n_relax", "converged", "r_hat_last"}, c.echo());
  bool all_converged = true;
  std::uint64_t group_index = 0;
  for (const auto& [key, acc] : groups) {
    const auto& [beta, m, n, k] = key;
    if (!engines.count(beta)) {
      expansions.emplace(beta, build_expansion(beta, c.nu));
      engines.emplace(beta, std::make_unique<DenseSpuEngine>(h, expansions.at(beta), obs));
    }
    const auto kernel = engines.at(beta)->kernel(m, n, k);
    RandomStream rng(c.seed, {c.run_id, 0x44494147ULL, group_index++});
    const ChainRunner run = [&](std::uint64_t label, std::size_t steps) {
      RandomStream r = rng.substream({label});
      return chain_trace(*kernel, label, steps, r).values;
    };
    RelaxationReport rep;
    bool ok = true;
    try {
      rep = relaxation_scan(run, ferro_label(c.sites), antiferro_label(c.sites), default_relaxation_schedule(c.relax_max));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::DeadBranch) throw;
      ok = false;  // a reference start has zero weight in this branch
    }
    const bool conv = ok && rep.converged;
    all_converged = all_converged && (conv || !ok);
    const double last = rep.r_hat_by_window.empty() ? 0.0 : rep.r_hat_by_window.back().second;
    w.row() << beta << m << n << k << acc.count << acc.tau_sum / static_cast<double>(acc.count) << rep.n_relax
            << (ok ? (conv ? "yes" : "no") : "dead-start") << last;
  }
  std::printf("%zu branch groups diagnosed%s\n", groups.size(), all_converged ? "" : "; some did not converge");
  return all_converged ? kExitOk : kExitNonConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal expectation values by sampled Chebyshev pairs"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "flat key = value config file");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--workers", o.workers, "worker threads");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--shots", o.shots, "estimate weights from this many shots");
  };
  auto* exact = app.add_subcommand("exact", "exact canonical averages over the beta grid");
  auto* resources = app.add_subcommand("resources", "qubit and gate counts");
  auto* qmetts = app.add_subcommand("qmetts", "METTS baseline");
  auto* spu = app.add_subcommand("mcmc-spu", "sampled Chebyshev-pair estimator");
  auto* diagnose = app.add_subcommand("diagnose", "relaxation and autocorrelation report for a ledger");
  for (auto* s : {exact, resources, qmetts, spu, diagnose}) add_common(s);
  spu->add_flag("--exhaustive", o.exhaustive, "evaluate every (m, n, k, i) instead of sampling");
  diagnose->add_option("--ledger", o.ledger, "ledger CSV (default: <out>/mcmc_spu_ledger.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig c = resolve(o);
    if (*exact) return cmd_exact(c);
    if (*resources) return cmd_resources(c);
    if (*qmetts) return cmd_qmetts(c);
    if (*spu) return cmd_mcmcspu(c, o.exhaustive);
    if (*diagnose) return cmd_diagnose(c, o.ledger);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
