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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"

namespace spu {

inline constexpr std::string_view kConfigSchema = "spu-config/1";
inline constexpr std::string_view kCsvSchema = "spu-csv/1";

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Run parameters. Physical temperatures, when given, replace `betas` at
/// load time through beta_from_temperature.
struct RunConfig {
  std::size_t sites = 4;
  double theta = 0.39269908169872414;  // pi/8
  std::string observable = "energy";
  std::vector<double> betas{1.0};
  std::vector<double> temperatures_k;
  double e_max_ev = 0.0;
  double nu = 0.002;
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t pairs = 0;  // 0: Hoeffding planner
  std::size_t chain_steps = 200;
  std::size_t burn_in = 100;
  std::size_t z_samples = 64;
  std::uint64_t shots = 0;
  std::size_t qmetts_steps = 20000;
  std::size_t qmetts_burn_in = 100;
  bool qmetts_exact_operator = false;
  std::size_t relax_max = 200;
  std::vector<std::size_t> resource_sizes{8, 10, 16, 32, 50, 64, 100};
  double resource_beta = 38.68222;
  double resource_nu = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t run_id = 0;
  unsigned workers = 1;
  std::string output_dir = "out";

  /// Dimensionless beta grid after unit conversion.
  std::vector<double> beta_grid() const {
    if (temperatures_k.empty()) return betas;
    std::vector<double> b;
    for (double t : temperatures_k) b.push_back(beta_from_temperature(t, e_max_ev));
    return b;
  }

  void validate() const;
  std::map<std::string, std::string> to_map() const;
  std::string serialize() const;
  /// One-line "key=value; ..." echo for file headers.
  std::string echo() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "'" + key + "' expects a number, got '" + v + "'");
  }
  if (pos != v.size()) throw Error(ErrorKind::Config, "'" + key + "' has trailing characters: '" + v + "'");
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw Error(ErrorKind::Config, "'" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Error(ErrorKind::Config, "'" + key + "' expects true or false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw Error(ErrorKind::Config, "'" + key + "' expects a list like [a, b]");
  std::vector<std::string> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string join_list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += format_double(v[i]);
    else s += std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace detail

inline void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, m); };
  if (sites < 2 || sites > 256) fail("sites must lie in [2, 256]");
  if (!(theta >= 0.0 && theta <= 3.14159265358979323846 + 1e-12)) fail("theta must lie in [0, pi]");
  if (observable != "energy" && observable != "field") fail("observable must be 'energy' or 'field'");
  if (temperatures_k.empty() && betas.empty()) fail("give betas or temperatures_k");
  for (double b : betas)
    if (!(b >= 0.0) || !std::isfinite(b)) fail("betas must be finite and non-negative");
  if (!temperatures_k.empty()) {
    if (!(e_max_ev > 0.0)) fail("temperatures_k needs a positive e_max_ev");
    for (double t : temperatures_k)
      if (!(t > 0.0) || !std::isfinite(t)) fail("temperatures_k must be positive");
  }
  if (!(nu > 0.0 && nu < 1.0)) fail("nu must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (chain_steps <= burn_in) fail("chain_steps must exceed burn_in");
  if (z_samples == 0) fail("z_samples must be positive");
  if (qmetts_steps <= qmetts_burn_in) fail("qmetts_steps must exceed qmetts_burn_in");
  if (relax_max < 2) fail("relax_max must be at least 2");
  for (std::size_t n : resource_sizes)
    if (n < 2 || n > 256) fail("resource_sizes entries must lie in [2, 256]");
  if (!(resource_beta >= 0.0) || !(resource_nu > 0.0 && resource_nu < 1.0)) fail("resource_beta/resource_nu out of range");
  if (workers == 0 || workers > 256) fail("workers must lie in [1, 256]");
  if (output_dir.empty()) fail("output_dir must not be empty");
}

inline std::map<std::string, std::string> RunConfig::to_map() const {
  using detail::join_list;
  return {
      {"schema", std::string(kConfigSchema)},
      {"sites", std::to_string(sites)},
      {"theta", format_double(theta)},
      {"observable", observable},
      {"betas", join_list(betas)},
      {"temperatures_k", join_list(temperatures_k)},
      {"e_max_ev", format_double(e_max_ev)},
      {"nu", format_double(nu)},
      {"epsilon", format_double(epsilon)},
      {"delta", format_double(delta)},
      {"pairs", std::to_string(pairs)},
      {"chain_steps", std::to_string(chain_steps)},
      {"burn_in", std::to_string(burn_in)},
      {"z_samples", std::to_string(z_samples)},
      {"shots", std::to_string(shots)},
      {"qmetts_steps", std::to_string(qmetts_steps)},
      {"qmetts_burn_in", std::to_string(qmetts_burn_in)},
      {"qmetts_exact_operator", qmetts_exact_operator ? "true" : "false"},
      {"relax_max", std::to_string(relax_max)},
      {"resource_sizes", join_list(resource_sizes)},
      {"resource_beta", format_double(resource_beta)},
      {"resource_nu", format_double(resource_nu)},
      {"seed", std::to_string(seed)},
      {"run_id", std::to_string(run_id)},
      {"workers", std::to_string(workers)},
      {"output_dir", output_dir},
  };
}

inline std::string RunConfig::serialize() const {
  std::string s;
  for (const auto& [k, v] : to_map()) {
    const bool quote = k == "schema" || k == "observable" || k == "output_dir";
    s += k + " = " + (quote ? "\"" + v + "\"" : v) + "\n";
  }
  return s;
}

inline std::string RunConfig::echo() const {
  std::string s;
  for (const auto& [k, v] : to_map()) {
    if (!s.empty()) s += "; ";
    s += k + "=" + v;
  }
  return s;
}

/// Parses the flat "key = value" format; '#' starts a comment. Unknown keys
/// and malformed values are config errors. Missing keys keep defaults.
inline RunConfig parse_config(const std::string& text) {
  using namespace detail;
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = unquote(trim(line.substr(eq + 1)));
    auto doubles = [&] {
      std::vector<double> v;
      for (const auto& s : split_list(key, val)) v.push_back(parse_double(key, s));
      return v;
    };
    if (key == "schema") {
      if (val != kConfigSchema) throw Error(ErrorKind::Config, "unsupported schema '" + val + "'");
    } else if (key == "sites") c.sites = parse_uint(key, val);
    else if (key == "theta") c.theta = parse_double(key, val);
    else if (key == "observable") c.observable = val;
    else if (key == "betas") c.betas = doubles();
    else if (key == "temperatures_k") c.temperatures_k = doubles();
    else if (key == "e_max_ev") c.e_max_ev = parse_double(key, val);
    else if (key == "nu") c.nu = parse_double(key, val);
    else if (key == "epsilon") c.epsilon = parse_double(key, val);
    else if (key == "delta") c.delta = parse_double(key, val);
    else if (key == "pairs") c.pairs = parse_uint(key, val);
    else if (key == "chain_steps") c.chain_steps = parse_uint(key, val);
    else if (key == "burn_in") c.burn_in = parse_uint(key, val);
    else if (key == "z_samples") c.z_samples = parse_uint(key, val);
    else if (key == "shots") c.shots = parse_uint(key, val);
    else if (key == "qmetts_steps") c.qmetts_steps = parse_uint(key, val);
    else if (key == "qmetts_burn_in") c.qmetts_burn_in = parse_uint(key, val);
    else if (key == "qmetts_exact_operator") c.qmetts_exact_operator = parse_bool(key, val);
    else if (key == "relax_max") c.relax_max = parse_uint(key, val);
    else if (key == "resource_sizes") {
      c.resource_sizes.clear();
      for (const auto& s : split_list(key, val)) c.resource_sizes.push_back(parse_uint(key, s));
    } else if (key == "resource_beta") c.resource_beta = parse_double(key, val);
    else if (key == "resource_nu") c.resource_nu = parse_double(key, val);
    else if (key == "seed") c.seed = parse_uint(key, val);
    else if (key == "run_id") c.run_id = parse_uint(key, val);
    else if (key == "workers") c.workers = static_cast<unsigned>(parse_uint(key, val));
    else if (key == "output_dir") c.output_dir = val;
    else throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// CSV with a schema line and a config echo as '#' comments, then a fixed
/// header. Doubles are written with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns, const std::string& config_echo = {})
      : out_(out), width_(columns.size()) {
    out_ << "# schema: " << kCsvSchema << "\n";
    if (!config_echo.empty()) out_ << "# config: " << config_echo << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row(const Row&) = delete;
    ~Row() noexcept(false) {
      if (n_ != w_.width_) throw Error(ErrorKind::Config, "CSV row width does not match header");
      w_.out_ << "\n";
    }
    Row& operator<<(double v) { return cell(format_double(v)); }
    Row& operator<<(const std::string& v) { return cell(v); }
    Row& operator<<(const char* v) { return cell(v); }
    template <class I>
      requires std::is_integral_v<I>
    Row& operator<<(I v) { return cell(std::to_string(v)); }

   private:
    Row& cell(const std::string& s) {
      w_.out_ << (n_++ ? "," : "") << s;
      return *this;
    }
    CsvWriter& w_;
    std::size_t n_ = 0;
  };

  Row row() { return Row(*this); }

 private:
  std::ostream& out_;
  std::size_t width_;
};

/// Reads rows of a CSV written by CsvWriter: '#' lines skipped, first other
/// line is the header.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error(ErrorKind::Config, "CSV lacks column '" + name + "'");
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (t.columns.empty()) t.columns = split(line);
    else t.rows.push_back(split(line));
  }
  if (t.columns.empty()) throw Error(ErrorKind::Config, "CSV has no header");
  return t;
}

}  // namespace spu
