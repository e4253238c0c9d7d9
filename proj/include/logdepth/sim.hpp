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

/**
 * @file sim.hpp
 * @brief Dense pure-state and density-matrix application of circuits.
 *
 * Pure states are amplitude vectors indexed with wire 0 as the least
 * significant bit. Density matrices use Eigen's column-major storage, so the
 * raw buffer of a width-w density is a 2w-bit vector whose low w bits are the
 * row index and whose high w bits are the column index; a gate U acts as U on
 * the low bits and conj(U) on the high bits.
 */

#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <span>
#include <vector>

#include "logdepth/circuit.hpp"
#include "logdepth/state.hpp"

namespace logdepth {

/// Widest circuit evolved as a full density matrix; wider circuits go
/// through their pure-state isometry instead.
inline constexpr std::size_t kMaxDensityWidth = 10;
/// Widest dense pure-state vector the simulator will allocate.
inline constexpr std::size_t kMaxPureWidth = 26;

namespace detail {

inline std::uint64_t mask_of(std::span<const Qubit> bits) {
  std::uint64_t m = 0;
  for (Qubit b : bits) m |= std::uint64_t{1} << b;
  return m;
}

inline void apply_1q(cplx* d, std::size_t nbits, Qubit target, const Mat2& u, std::uint64_t ctrl) {
  const std::uint64_t n = std::uint64_t{1} << nbits, tb = std::uint64_t{1} << target;
  const bool diagonal = u[1] == cplx(0) && u[2] == cplx(0);
  for (std::uint64_t i = 0; i < n; ++i) {
    if ((i & tb) || (i & ctrl) != ctrl) continue;
    const std::uint64_t j = i | tb;
    if (diagonal) {
      d[i] *= u[0];
      d[j] *= u[3];
    } else {
      const cplx a = d[i], b = d[j];
      d[i] = u[0] * a + u[1] * b;
      d[j] = u[2] * a + u[3] * b;
    }
  }
}

inline void apply_swap(cplx* d, std::size_t nbits, Qubit a, Qubit b, std::uint64_t ctrl) {
  const std::uint64_t n = std::uint64_t{1} << nbits, ab = std::uint64_t{1} << a, bb = std::uint64_t{1} << b;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!(i & ab) || (i & bb) || (i & ctrl) != ctrl) continue;
    std::swap(d[i], d[i ^ ab ^ bb]);
  }
}

inline Mat2 conj2(Mat2 u) {
  for (auto& z : u) z = std::conj(z);
  return u;
}

/// Applies a gate whose wire indices are bit positions of `d`, each shifted
/// by `shift`. With `conjugate` the entrywise conjugate matrix is used.
inline void apply_gate_bits(cplx* d, std::size_t nbits, const Gate& g, Qubit shift = 0, bool conjugate = false) {
  auto bit = [shift](Qubit q) { return q + shift; };
  std::uint64_t ctrl = 0;
  for (Qubit q : g.controls) ctrl |= std::uint64_t{1} << bit(q);
  switch (g.kind) {
    case GateKind::I: return;
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::S:
    case GateKind::T: {
      Mat2 u = single_qubit_matrix(g.kind);
      apply_1q(d, nbits, bit(g.operands[0]), conjugate ? conj2(u) : u, ctrl);
      return;
    }
    case GateKind::CNOT:
    case GateKind::CZ: {
      const Mat2 u = single_qubit_matrix(g.kind == GateKind::CNOT ? GateKind::X : GateKind::Z);
      apply_1q(d, nbits, bit(g.operands[1]), u, ctrl | (std::uint64_t{1} << bit(g.operands[0])));
      return;
    }
    case GateKind::SWAP2: apply_swap(d, nbits, bit(g.operands[0]), bit(g.operands[1]), ctrl); return;
    case GateKind::FANOUT: {
      const Mat2 x = single_qubit_matrix(GateKind::X);
      const std::uint64_t c = ctrl | (std::uint64_t{1} << bit(g.operands[0]));
      for (std::size_t t = 1; t < g.operands.size(); ++t) apply_1q(d, nbits, bit(g.operands[t]), x, c);
      return;
    }
  }
}

/// Places subsystem index `x` (over `wires`, first wire least significant)
/// into a full-width basis index.
inline std::uint64_t scatter(std::uint64_t x, std::span<const Qubit> wires) {
  std::uint64_t full = 0;
  for (std::size_t j = 0; j < wires.size(); ++j) full |= ((x >> j) & 1u) << wires[j];
  return full;
}

inline std::uint64_t gather(std::uint64_t full, std::span<const Qubit> wires) {
  std::uint64_t x = 0;
  for (std::size_t j = 0; j < wires.size(); ++j) x |= ((full >> wires[j]) & 1u) << j;
  return x;
}

inline std::vector<Qubit> complement(std::span<const Qubit> keep, std::size_t width) {
  std::set<Qubit> k(keep.begin(), keep.end());
  std::vector<Qubit> rest;
  for (Qubit q = 0; q < width; ++q) {
    if (!k.count(q)) rest.push_back(q);
  }
  return rest;
}

inline void check_keep(std::span<const Qubit> keep, std::size_t width, std::string_view op) {
  if (keep.empty()) throw Error(std::string(op) + ": keep set is empty");
  std::set<Qubit> seen;
  for (Qubit q : keep) {
    if (q >= width) throw Error(std::string(op) + ": wire " + std::to_string(q) + " out of range");
    if (!seen.insert(q).second) throw Error(std::string(op) + ": duplicate wire " + std::to_string(q));
  }
}

inline void require_simulable(const Circuit& c, std::string_view op) {
  require_valid(c, op);
  if (!c.is_normalized()) throw Error(std::string(op) + ": circuit is not in normalized form");
}

}  // namespace detail

/// Amplitudes viewed as a matrix with `keep` as rows (first wire least
/// significant) and the remaining wires, ascending, as columns.
inline Matrix split_amplitudes(const PureState& s, std::span<const Qubit> keep) {
  const auto rest = detail::complement(keep, s.width);
  const std::uint64_t rows = std::uint64_t{1} << keep.size(), cols = std::uint64_t{1} << rest.size();
  Matrix m(rows, cols);
  for (std::uint64_t c = 0; c < cols; ++c) {
    const std::uint64_t base = detail::scatter(c, rest);
    for (std::uint64_t r = 0; r < rows; ++r) m(r, c) = s.amps(base | detail::scatter(r, keep));
  }
  return m;
}

/// Reduced density of a pure state on the ordered wires `keep`.
inline DensityMatrix reduced_density(const PureState& s, std::span<const Qubit> keep) {
  detail::check_keep(keep, s.width, "reduced_density");
  Matrix m = split_amplitudes(s, keep);
  return {keep.size(), m * m.adjoint()};
}

/// Partial trace over every wire not in `keep`; the result is ordered as
/// `keep`.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Qubit> keep) {
  detail::check_keep(keep, rho.width, "partial_trace");
  const auto rest = detail::complement(keep, rho.width);
  const std::uint64_t k = std::uint64_t{1} << keep.size(), e = std::uint64_t{1} << rest.size();
  std::vector<std::uint64_t> kidx(k);
  for (std::uint64_t a = 0; a < k; ++a) kidx[a] = detail::scatter(a, keep);
  Matrix out = Matrix::Zero(k, k);
  for (std::uint64_t x = 0; x < e; ++x) {
    const std::uint64_t base = detail::scatter(x, rest);
    for (std::uint64_t b = 0; b < k; ++b) {
      for (std::uint64_t a = 0; a < k; ++a) out(a, b) += rho.m(base | kidx[a], base | kidx[b]);
    }
  }
  return {keep.size(), out};
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Qubit> keep) {
  std::vector<Qubit> k(keep);
  return partial_trace(rho, std::span<const Qubit>(k));
}

/// U (psi (x) |0...0>) on the full width, before any trace-out.
inline PureState apply_circuit_pure(const Circuit& c, const PureState& psi) {
  detail::require_simulable(c, "apply_circuit_pure");
  if (psi.width != c.inputs().size()) {
    throw Error("apply_circuit_pure: state has " + std::to_string(psi.width) + " qubits, circuit expects " +
                std::to_string(c.inputs().size()));
  }
  if (c.width() > kMaxPureWidth) throw Error("apply_circuit_pure: circuit too wide for dense simulation");
  PureState out{c.width(), Vector::Zero(Eigen::Index{1} << c.width())};
  for (std::uint64_t x = 0; x < psi.dim(); ++x) out.amps(detail::scatter(x, c.inputs())) = psi.amps(x);
  for (const Gate& g : c.gates()) detail::apply_gate_bits(out.amps.data(), c.width(), g);
  return out;
}

/// Columns are the full-width images of the input basis states.
inline Matrix circuit_isometry(const Circuit& c) {
  const std::size_t h = c.inputs().size();
  Matrix v(Eigen::Index{1} << c.width(), Eigen::Index{1} << h);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << h); ++x) {
    v.col(x) = apply_circuit_pure(c, PureState::basis(h, x)).amps;
  }
  return v;
}

/// Unitary of the gate list on every wire, ignoring the input/ancilla split.
inline Matrix full_unitary(const Circuit& c) {
  require_valid(c, "full_unitary");
  const std::uint64_t d = std::uint64_t{1} << c.width();
  Matrix u = Matrix::Identity(d, d);
  for (std::uint64_t j = 0; j < d; ++j) {
    for (const Gate& g : c.gates()) detail::apply_gate_bits(u.col(j).data(), c.width(), g);
  }
  return u;
}

/// Evolves a full-width density matrix through the gate list.
inline void evolve_density_inplace(Matrix& full, std::size_t width, std::span<const Gate> gates) {
  for (const Gate& g : gates) {
    detail::apply_gate_bits(full.data(), 2 * width, g, 0, false);
    detail::apply_gate_bits(full.data(), 2 * width, g, static_cast<Qubit>(width), true);
  }
}

/// tr_traced(U (rho (x) |0><0|) U^*) on the circuit's outputs.
inline DensityMatrix apply_circuit_density(const Circuit& c, const DensityMatrix& rho) {
  detail::require_simulable(c, "apply_circuit_density");
  if (rho.width != c.inputs().size()) {
    throw Error("apply_circuit_density: state has " + std::to_string(rho.width) + " qubits, circuit expects " +
                std::to_string(c.inputs().size()));
  }
  if (c.outputs().empty()) throw Error("apply_circuit_density: circuit has no outputs");
  if (c.width() <= kMaxDensityWidth) {
    const std::uint64_t d = std::uint64_t{1} << c.width();
    Matrix full = Matrix::Zero(d, d);
    std::vector<std::uint64_t> idx(rho.dim());
    for (std::uint64_t a = 0; a < rho.dim(); ++a) idx[a] = detail::scatter(a, c.inputs());
    for (std::uint64_t b = 0; b < rho.dim(); ++b) {
      for (std::uint64_t a = 0; a < rho.dim(); ++a) full(idx[a], idx[b]) = rho.m(a, b);
    }
    evolve_density_inplace(full, c.width(), c.gates());
    return partial_trace(DensityMatrix{c.width(), std::move(full)}, c.outputs());
  }
  // Spectral route: push each eigenvector through the pure simulator.
  auto e = eig_hermitian(rho.m);
  Matrix out = Matrix::Zero(c.output_dim(), c.output_dim());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) <= 0.0) continue;
    PureState v{rho.width, e.vectors.col(k)};
    out += e.values(k) * reduced_density(apply_circuit_pure(c, v), c.outputs()).m;
  }
  return {c.outputs().size(), out};
}

/// Purification on doubled width: the purifier occupies the high wires and
/// the dominant eigenvector is paired with purifier state |0>.
inline PureState purify(const DensityMatrix& rho, double tol = Tolerances{}.state) {
  auto e = eig_hermitian(rho.m);
  if (e.values(0) < -tol) throw Error("purify: input is not positive semidefinite");
  const Eigen::Index d = rho.m.rows();
  PureState out{2 * rho.width, Vector::Zero(d * d)};
  for (Eigen::Index r = 0; r < d; ++r) {
    const Eigen::Index k = d - 1 - r;  // descending eigenvalue order
    const double lam = std::max(e.values(k), 0.0);
    if (lam == 0.0) continue;
    Vector v = e.vectors.col(k);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));  // fix the phase
    out.amps.segment(r * d, d) = std::sqrt(lam) * v;
  }
  out.amps /= out.amps.norm();
  return out;
}

struct MeasurementBranch {
  double probability = 0.0;
  int outcome = 0;
  PureState post;
};

/// Computational-basis measurement of one wire; zero-probability branches
/// (below 1e-14) are dropped.
inline std::vector<MeasurementBranch> measure_qubit(const PureState& s, Qubit q) {
  if (q >= s.width) throw Error("measure_qubit: wire out of range");
  const std::uint64_t b = std::uint64_t{1} << q;
  std::vector<MeasurementBranch> out;
  for (int outcome : {0, 1}) {
    PureState post{s.width, s.amps};
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
      if (((i & b) != 0) != (outcome == 1)) post.amps(i) = 0;
    }
    const double p = post.amps.squaredNorm();
    if (p < 1e-14) continue;
    post.amps /= std::sqrt(p);
    out.push_back({p, outcome, std::move(post)});
  }
  return out;
}

struct DensityBranch {
  double probability = 0.0;
  int outcome = 0;
  DensityMatrix post;
};

/// Two-projector measurement channel on a density matrix.
inline std::vector<DensityBranch> measure_qubit(const DensityMatrix& rho, Qubit q) {
  if (q >= rho.width) throw Error("measure_qubit: wire out of range");
  const std::uint64_t b = std::uint64_t{1} << q;
  std::vector<DensityBranch> out;
  for (int outcome : {0, 1}) {
    Matrix post = rho.m;
    for (std::uint64_t i = 0; i < rho.dim(); ++i) {
      const bool row_in = ((i & b) != 0) == (outcome == 1);
      for (std::uint64_t j = 0; j < rho.dim(); ++j) {
        if (!row_in || ((j & b) != 0) != (outcome == 1)) post(i, j) = 0;
      }
    }
    const double p = post.trace().real();
    if (p < 1e-14) continue;
    out.push_back({p, outcome, {rho.width, post / p}});
  }
  return out;
}

/// Probability that every listed wire of the state reads 0.
inline double probability_all_zero(const DensityMatrix& rho, std::span<const Qubit> wires) {
  const std::uint64_t m = detail::mask_of(wires);
  double p = 0.0;
  for (std::uint64_t i = 0; i < rho.dim(); ++i) {
    if ((i & m) == 0) p += rho.m(i, i).real();
  }
  return p;
}

inline double probability_all_zero(const PureState& s, std::span<const Qubit> wires) {
  const std::uint64_t m = detail::mask_of(wires);
  double p = 0.0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if ((i & m) == 0) p += std::norm(s.amps(i));
  }
  return p;
}

/// Product state from per-register pure states; wires not covered are |0>.
inline PureState product_state(std::size_t width, std::span<const std::pair<std::vector<Qubit>, PureState>> parts) {
  PureState out = PureState::basis(width, 0);
  std::vector<Qubit> covered;
  for (const auto& [wires, st] : parts) {
    if (wires.size() != st.width) throw Error("product_state: register and state widths differ");
    covered.insert(covered.end(), wires.begin(), wires.end());
  }
  std::set<Qubit> seen(covered.begin(), covered.end());
  if (seen.size() != covered.size()) throw Error("product_state: registers overlap");
  for (const auto& [wires, st] : parts) {
    Vector next = Vector::Zero(out.amps.size());
    const std::uint64_t m = detail::mask_of(wires);
    for (std::uint64_t i = 0; i < out.dim(); ++i) {
      if (out.amps(i) == cplx(0) || (i & m)) continue;
      for (std::uint64_t x = 0; x < st.dim(); ++x) next(i | detail::scatter(x, wires)) += out.amps(i) * st.amps(x);
    }
    out.amps = std::move(next);
  }
  return out;
}

}  // namespace logdepth
