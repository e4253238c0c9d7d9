// Copyright 2026 The logdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logdepth {

using Qubit = std::uint32_t;
using cplx = std::complex<double>;

/// Base error for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The fixed gate basis. `I` is the explicit no-op used when padding a
/// circuit to a common gate count; it occupies one piece like any other gate.
enum class GateKind : std::uint8_t { I, H, X, Z, S, T, CNOT, CZ, SWAP2, FANOUT };

inline constexpr std::array<GateKind, 10> kAllGateKinds = {
    GateKind::I, GateKind::H,    GateKind::X,  GateKind::Z,     GateKind::S,
    GateKind::T, GateKind::CNOT, GateKind::CZ, GateKind::SWAP2, GateKind::FANOUT};

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP2: return "SWAP2";
    case GateKind::FANOUT: return "FANOUT";
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_string(std::string_view s) {
  for (GateKind k : kAllGateKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Operand count for fixed-arity kinds; FANOUT returns nullopt (1 + k).
inline std::optional<std::size_t> fixed_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP2: return 2;
    case GateKind::FANOUT: return std::nullopt;
    default: return 1;
  }
}

using Mat2 = std::array<cplx, 4>;  // row-major {u00, u01, u10, u11}

/// Single-qubit matrix of the non-entangling kinds.
inline Mat2 single_qubit_matrix(GateKind k) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (k) {
    case GateKind::I: return {1, 0, 0, 1};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::S: return {1, 0, 0, cplx(0, 1)};
    case GateKind::T: return {1, 0, 0, std::polar(1.0, M_PI / 4)};
    default: throw Error("single_qubit_matrix: not a one-qubit kind");
  }
}

/// A gate application. `operands` follow the kind's convention
/// (CNOT/CZ: {control, target}; FANOUT: {control, t1..tk}); `controls` are
/// additional controls introduced by lowering, all of which must be |1>.
struct Gate {
  GateKind kind = GateKind::I;
  std::vector<Qubit> operands;
  std::vector<Qubit> controls;

  /// Target count of a FANOUT gate.
  std::size_t fanout_k() const { return kind == GateKind::FANOUT ? operands.size() - 1 : 0; }

  /// Every wire the gate touches.
  std::vector<Qubit> support() const {
    std::vector<Qubit> s = operands;
    s.insert(s.end(), controls.begin(), controls.end());
    return s;
  }

  bool operator==(const Gate&) const = default;
};

namespace gates {
inline Gate I(Qubit q) { return {GateKind::I, {q}, {}}; }
inline Gate H(Qubit q) { return {GateKind::H, {q}, {}}; }
inline Gate X(Qubit q) { return {GateKind::X, {q}, {}}; }
inline Gate Z(Qubit q) { return {GateKind::Z, {q}, {}}; }
inline Gate S(Qubit q) { return {GateKind::S, {q}, {}}; }
inline Gate T(Qubit q) { return {GateKind::T, {q}, {}}; }
inline Gate CNOT(Qubit c, Qubit t) { return {GateKind::CNOT, {c, t}, {}}; }
inline Gate CZ(Qubit a, Qubit b) { return {GateKind::CZ, {a, b}, {}}; }
inline Gate SWAP2(Qubit a, Qubit b) { return {GateKind::SWAP2, {a, b}, {}}; }
inline Gate FANOUT(Qubit c, std::vector<Qubit> targets) {
  Gate g{GateKind::FANOUT, {c}, {}};
  g.operands.insert(g.operands.end(), targets.begin(), targets.end());
  return g;
}
}  // namespace gates

/// Layers a gate occupies under a cost model. With unit fan-out cost a FANOUT
/// is one layer; otherwise it is charged as a CNOT copy tree.
inline std::size_t gate_duration(const Gate& g, bool fanout_unit_cost) {
  if (g.kind != GateKind::FANOUT || fanout_unit_cost) return 1;
  std::size_t k = g.fanout_k() + 1, d = 0;
  while ((std::size_t{1} << d) < k) ++d;
  return d == 0 ? 1 : d;
}

}  // namespace logdepth
