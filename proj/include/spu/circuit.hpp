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
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spu/error.hpp"
#include "spu/hamiltonian.hpp"

namespace spu {

enum class GateKind { Hadamard, PauliX, PauliY, PauliZ, Phase, Rotation, PauliProduct, Reset };
enum class Axis { X, Y, Z };

struct Control {
  std::size_t qubit = 0;
  bool active_high = true;
};

/// One gate of the circuit IR. Any kind except Reset may carry controls;
/// an active-low control fires on |0>.
struct Gate {
  GateKind kind = GateKind::Hadamard;
  std::size_t target = 0;                          // single-qubit kinds
  double angle = 0.0;                              // Phase and Rotation
  Axis axis = Axis::Y;                             // Rotation
  std::vector<std::pair<std::size_t, Pauli>> paulis;  // PauliProduct, non-identity factors only
  std::vector<Control> controls;

  /// Qubits acted on (not counting controls).
  std::vector<std::size_t> targets() const {
    if (kind != GateKind::PauliProduct) return {target};
    std::vector<std::size_t> t;
    for (const auto& [q, p] : paulis) t.push_back(q);
    return t;
  }
};

inline Gate hadamard(std::size_t q) { return Gate{GateKind::Hadamard, q}; }
inline Gate pauli_x(std::size_t q) { return Gate{GateKind::PauliX, q}; }
inline Gate pauli_y(std::size_t q) { return Gate{GateKind::PauliY, q}; }
inline Gate pauli_z(std::size_t q) { return Gate{GateKind::PauliZ, q}; }
inline Gate phase(std::size_t q, double phi) { return Gate{GateKind::Phase, q, phi}; }
inline Gate rotation(Axis axis, std::size_t q, double angle) { return Gate{GateKind::Rotation, q, angle, axis}; }
inline Gate reset(std::size_t q) { return Gate{GateKind::Reset, q}; }

/// Pauli string on the qubits first_qubit + (site - 1).
inline Gate pauli_product(const PauliString& s, std::size_t first_qubit) {
  Gate g{GateKind::PauliProduct};
  for (std::size_t q = 0; q < s.size(); ++q)
    if (s[q] != Pauli::I) g.paulis.emplace_back(first_qubit + q, s[q]);
  return g;
}

inline Gate with_controls(Gate g, std::vector<Control> controls) {
  g.controls.insert(g.controls.end(), controls.begin(), controls.end());
  return g;
}

struct Register {
  std::string name;
  std::size_t first = 0;
  std::size_t count = 0;
};

/// System register S on the low qubits (site j on qubit j-1), the PREPARE
/// register A above it, then the single superposition ancilla when present.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  RegisterLayout(std::size_t n_system, std::size_t n_prep, bool with_superposition) {
    registers_.push_back({"S", 0, n_system});
    registers_.push_back({"A", n_system, n_prep});
    if (with_superposition) registers_.push_back({"Abar", n_system + n_prep, 1});
  }

  /// Layout for an LCU over `n_terms` unitaries acting on `n_system` qubits.
  static RegisterLayout for_terms(std::size_t n_system, std::size_t n_terms, bool with_superposition) {
    return RegisterLayout(n_system, ceil_log2(n_terms), with_superposition);
  }

  static std::size_t ceil_log2(std::size_t n) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return std::max<std::size_t>(bits, 1);
  }

  const Register& reg(const std::string& name) const {
    for (const auto& r : registers_)
      if (r.name == name) return r;
    throw Error(ErrorKind::Layout, "no register named '" + name + "'");
  }

  bool has(const std::string& name) const {
    return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.name == name; });
  }

  std::size_t system_qubits() const { return reg("S").count; }
  std::size_t prep_qubits() const { return reg("A").count; }
  std::size_t prep_qubit(std::size_t bit) const { return reg("A").first + bit; }
  std::size_t superposition_qubit() const { return reg("Abar").first; }

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& r : registers_) t += r.count;
    return t;
  }

  const std::vector<Register>& registers() const noexcept { return registers_; }

 private:
  std::vector<Register> registers_;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.n_qubits_ > n_qubits_) throw Error(ErrorKind::Layout, "appended circuit is wider than the target");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
  }

  Circuit inverse() const {
    Circuit inv(n_qubits_);
    inv.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      Gate g = *it;
      switch (g.kind) {
        case GateKind::Phase:
        case GateKind::Rotation: g.angle = -g.angle; break;
        case GateKind::Reset: throw Error(ErrorKind::Layout, "reset has no inverse");
        default: break;
      }
      inv.gates_.push_back(std::move(g));
    }
    return inv;
  }

  /// Every gate gains the extra control, which yields the controlled version
  /// of the whole unitary (including any global phase expressed as gates).
  Circuit controlled(Control c) const {
    Circuit out(n_qubits_);
    out.gates_.reserve(gates_.size());
    for (const Gate& g : gates_) {
      if (g.kind == GateKind::Reset) throw Error(ErrorKind::Layout, "cannot control a reset");
      Gate h = g;
      h.controls.push_back(c);
      out.add(std::move(h));
    }
    return out;
  }

  Circuit power(std::size_t k) const {
    Circuit out(n_qubits_);
    out.gates_.reserve(gates_.size() * k);
    for (std::size_t r = 0; r < k; ++r) out.append(*this);
    return out;
  }

 private:
  void validate(const Gate& g) const {
    auto check = [&](std::size_t q) {
      if (q >= n_qubits_) throw Error(ErrorKind::Layout, "qubit index " + std::to_string(q) + " outside circuit");
    };
    const auto t = g.targets();
    if (g.kind == GateKind::PauliProduct && t.empty() && g.controls.empty())
      return;  // identity string; kept so term indices stay aligned
    for (std::size_t q : t) check(q);
    for (const auto& c : g.controls) {
      check(c.qubit);
      if (std::find(t.begin(), t.end(), c.qubit) != t.end())
        throw Error(ErrorKind::Layout, "control overlaps target");
    }
    for (std::size_t a = 0; a < g.controls.size(); ++a)
      for (std::size_t b = a + 1; b < g.controls.size(); ++b)
        if (g.controls[a].qubit == g.controls[b].qubit) throw Error(ErrorKind::Layout, "duplicate control qubit");
  }

  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
};

}  // namespace spu
