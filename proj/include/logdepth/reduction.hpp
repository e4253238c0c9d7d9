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
 * @file reduction.hpp
 * @brief Log-depth Close Images construction and controlled dispatch.
 *
 * A circuit Q of n gates g_1..g_n on w wires becomes n blocks run side by
 * side, block j holding the input of g_j. Between blocks i and i+1 sit an
 * auxiliary register AUX_i (w wires) and a control CTRL_i. The control is put
 * in |+>; on |1> the first test compares AUX_i with the input of block i+1,
 * then X flips the control and the second test compares the output of block i
 * with AUX_i. So exactly one test runs in each branch. The unperformed test
 * leaves its result wire at |0>.
 *
 * Wire allocation (identical for both circuits of an instance):
 *
 *   H_1 (h) | blocks 2..n (w each) | AUX_1..AUX_{n-1} (w each)   <- inputs
 *   A_1 (w-h) | CTRL_i | TEST_i (2) | DUMMY_i (2) | ANC_i (2w-2) <- ancillas
 *
 * C1 outputs [K_n, TEST_1.., DUMMY_1..]; C2 outputs [K_n, DUMMY_1.., TEST_1..].
 * Everything else, the controls included, is traced.
 */

#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "logdepth/circuit_io.hpp"
#include "logdepth/factored.hpp"
#include "logdepth/gadgets.hpp"

namespace logdepth {

namespace detail {

inline void check_same_shape(const Circuit& a, const Circuit& b, std::string_view op) {
  require_valid(a, op);
  require_valid(b, op);
  if (!a.is_normalized() || !b.is_normalized()) throw Error(std::string(op) + ": circuits must be normalized");
  if (a.inputs().size() != b.inputs().size()) throw Error(std::string(op) + ": input dimensions differ");
  if (a.outputs().size() != b.outputs().size()) throw Error(std::string(op) + ": output dimensions differ");
}

}  // namespace detail

struct CIInstance {
  Circuit q1, q2;
  double a = 1.0, b = 0.5;

  void check() const {
    if (!(0.0 < b && b < a && a <= 1.0)) throw Error("CIInstance: thresholds must satisfy 0 < b < a <= 1");
    detail::check_same_shape(q1, q2, "CIInstance");
  }
};

struct QCDInstance {
  Circuit q1, q2;
  double a = 2.0, b = 0.0;

  void check() const {
    if (!(0.0 <= b && b < a && a <= 2.0)) throw Error("QCDInstance: thresholds must satisfy 0 <= b < a <= 2");
    detail::check_same_shape(q1, q2, "QCDInstance");
  }
};

enum class TestSelection { Coherent, FirstOnly, SecondOnly };

struct ReductionOptions {
  bool use_fanout = false;
  std::size_t repetitions = 1;
  /// With tests off, only the sliced pieces are emitted.
  bool include_tests = true;
  /// FirstOnly and SecondOnly fix the control classically; averaging the two
  /// must equal the coherent circuit.
  TestSelection selection = TestSelection::Coherent;
  /// Per-boundary override of `selection`; empty or one entry per boundary.
  /// Every boundary has its own coin, so the coherent circuit equals the
  /// uniform average over all assignments.
  std::vector<TestSelection> boundary_selection;
};

/// depth <= A * ceil(log2 s) + B, or <= D with fan-out.
struct DepthBound {
  std::size_t a = 0, b = 0;
  std::optional<std::size_t> d;
  std::size_t s = 1;

  std::size_t value() const { return d ? *d : a * ceil_log2(s) + b; }
};

struct ConstructionManifest {
  std::size_t n = 0;  // blocks (= gate count after padding)
  std::size_t w = 0;  // block width, the size of every compared register
  std::size_t h = 0;  // input wires of the original circuits
  bool degenerate = false;
  bool use_fanout = false;
  std::size_t repetitions = 1;
  DepthBound depth_bound;
  RegisterLayout registers;  // layout of C1 (C2 differs only in gates and output order)
  std::vector<Qubit> test_wires, dummy_wires, k_wires;

  std::size_t test_count() const { return test_wires.size(); }
};

inline json manifest_to_json(const ConstructionManifest& m) {
  json j;
  j["n"] = m.n;
  j["block_width"] = m.w;
  j["input_width"] = m.h;
  j["degenerate"] = m.degenerate;
  j["use_fanout"] = m.use_fanout;
  j["repetitions"] = m.repetitions;
  json db;
  db["A"] = m.depth_bound.a;
  db["B"] = m.depth_bound.b;
  if (m.depth_bound.d) db["D"] = *m.depth_bound.d;
  db["s"] = m.depth_bound.s;
  db["value"] = m.depth_bound.value();
  j["depth_bound"] = db;
  j["registers"] = json::array();
  for (const auto& r : m.registers.registers) j["registers"].push_back(register_to_json(r));
  j["test_wires"] = m.test_wires;
  j["dummy_wires"] = m.dummy_wires;
  j["k_wires"] = m.k_wires;
  return j;
}

struct CIConstruction {
  Circuit c1, c2;
  ConstructionManifest manifest;
};

/// Pads both circuits to a common width (idle traced ancillas) and a common
/// gate count (no-op I gates on wire 0). Layouts are dropped.
inline CIInstance pad(const CIInstance& inst) {
  inst.check();
  const std::size_t w = std::max(inst.q1.width(), inst.q2.width());
  const std::size_t n = std::max<std::size_t>({inst.q1.gate_count(), inst.q2.gate_count(), 1});
  auto grow = [&](const Circuit& c) {
    CircuitBuilder b(w);
    std::vector<Qubit> anc = c.ancillas(), tr = c.traced();
    for (Qubit q = static_cast<Qubit>(c.width()); q < w; ++q) {
      anc.push_back(q);
      tr.push_back(q);
    }
    b.set_inputs(c.inputs()).set_ancillas(anc).set_outputs(c.outputs()).set_traced(tr);
    b.add_all(c.gates());
    while (b.gates().size() < n) b.add(gates::I(0));
    return b.build();
  };
  return {grow(inst.q1), grow(inst.q2), inst.a, inst.b};
}

namespace detail {

struct BlockWires {
  std::size_t n = 0, w = 0, h = 0;
  std::vector<Qubit> h1, a1;
  std::vector<std::vector<Qubit>> block;  // block[j] for j = 2..n (index j)
  std::vector<std::vector<Qubit>> aux, anc;  // index i = 1..n-1
  std::vector<Qubit> ctrl;
  std::vector<std::array<Qubit, 2>> test, dummy;
  std::size_t width = 0;
  std::vector<Qubit> inputs, ancillas;
};

inline BlockWires allocate(std::size_t n, std::size_t w, std::size_t h) {
  BlockWires a;
  a.n = n;
  a.w = w;
  a.h = h;
  Qubit next = 0;
  auto take = [&](std::size_t k) {
    std::vector<Qubit> v(k);
    std::iota(v.begin(), v.end(), next);
    next += static_cast<Qubit>(k);
    return v;
  };
  a.h1 = take(h);
  a.block.resize(n + 1);
  for (std::size_t j = 2; j <= n; ++j) a.block[j] = take(w);
  a.aux.resize(n);
  for (std::size_t i = 1; i < n; ++i) a.aux[i] = take(w);
  a.inputs.resize(next);
  std::iota(a.inputs.begin(), a.inputs.end(), Qubit{0});
  a.a1 = take(w - h);
  a.ctrl.resize(n);
  a.test.resize(n);
  a.dummy.resize(n);
  a.anc.resize(n);
  for (std::size_t i = 1; i < n; ++i) {
    a.ctrl[i] = take(1)[0];
    auto t = take(2), d = take(2);
    a.test[i] = {t[0], t[1]};
    a.dummy[i] = {d[0], d[1]};
    a.anc[i] = take(2 * (w - 1));
  }
  a.width = next;
  a.ancillas.resize(a.width - a.inputs.size());
  std::iota(a.ancillas.begin(), a.ancillas.end(), static_cast<Qubit>(a.inputs.size()));
  return a;
}

/// Map from Q's wires to the wires of block j.
inline std::vector<Qubit> block_map(const BlockWires& a, const Circuit& q, std::size_t j) {
  std::vector<Qubit> m(a.w);
  if (j == 1) {
    for (std::size_t k = 0; k < q.inputs().size(); ++k) m[q.inputs()[k]] = a.h1[k];
    for (std::size_t k = 0; k < q.ancillas().size(); ++k) m[q.ancillas()[k]] = a.a1[k];
  } else {
    m = a.block[j];
  }
  return m;
}

inline Gate remap(Gate g, const std::vector<Qubit>& m) {
  for (auto& q : g.operands) q = m[q];
  for (auto& q : g.controls) q = m[q];
  return g;
}

inline std::vector<Qubit> mapped(const std::vector<Qubit>& qs, const std::vector<Qubit>& m) {
  std::vector<Qubit> out;
  for (Qubit q : qs) out.push_back(m[q]);
  return out;
}

/// Controlled swap test of `lhs` against `rhs` into `result`, controlled by
/// `control`, using `anc` as copy workspace.
inline std::vector<Gate> controlled_test(const std::vector<Qubit>& lhs, const std::vector<Qubit>& rhs, Qubit result,
                                         Qubit control, const std::vector<Qubit>& anc, bool use_fanout) {
  const std::size_t w = lhs.size();
  const Circuit lowered = lower_controlled(swap_test_gadget(w, use_fanout), static_cast<Qubit>(3 * w), use_fanout);
  std::vector<Qubit> m(lowered.width());
  for (std::size_t k = 0; k < w; ++k) {
    m[k] = lhs[k];
    m[w + k] = rhs[k];
  }
  m[2 * w] = result;
  std::size_t next_anc = 0;
  for (std::size_t k = 2 * w + 1; k < 3 * w; ++k) m[k] = anc.at(next_anc++);
  m[3 * w] = control;
  for (std::size_t k = 3 * w + 1; k < lowered.width(); ++k) m[k] = anc.at(next_anc++);
  std::vector<Gate> out;
  for (const Gate& g : lowered.gates()) out.push_back(remap(g, m));
  return out;
}

inline Circuit build_one(const BlockWires& a, const Circuit& q, bool first_circuit, const ReductionOptions& opts) {
  const std::size_t n = a.n;
  std::vector<std::vector<Qubit>> maps(n + 1);
  for (std::size_t j = 1; j <= n; ++j) maps[j] = block_map(a, q, j);

  CircuitBuilder b(a.width);
  b.add(remap(q.gates()[0], maps[1]));
  for (std::size_t i = 1; i < n; ++i) {
    if (opts.include_tests) {
      const TestSelection sel = opts.boundary_selection.empty() ? opts.selection : opts.boundary_selection[i - 1];
      if (sel == TestSelection::Coherent) b.add(gates::H(a.ctrl[i]));
      if (sel == TestSelection::FirstOnly) b.add(gates::X(a.ctrl[i]));
      b.add_all(controlled_test(a.aux[i], maps[i + 1], a.test[i][0], a.ctrl[i], a.anc[i], opts.use_fanout));
    }
    b.add(remap(q.gates()[i], maps[i + 1]));
    if (opts.include_tests) {
      b.add(gates::X(a.ctrl[i]));
      b.add_all(controlled_test(maps[i], a.aux[i], a.test[i][1], a.ctrl[i], a.anc[i], opts.use_fanout));
    }
  }

  // Registers.
  b.add_register("H_1", Role::H, 1, a.h1);
  if (!a.a1.empty()) b.add_register("A_1", Role::A, 1, a.a1);
  for (std::size_t j = 2; j <= n; ++j) {
    auto hj = mapped(q.inputs(), maps[j]), aj = mapped(q.ancillas(), maps[j]);
    b.add_register("H_" + std::to_string(j), Role::H, static_cast<int>(j), hj);
    if (!aj.empty()) b.add_register("A_" + std::to_string(j), Role::A, static_cast<int>(j), aj);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto s = std::to_string(i);
    const int blk = static_cast<int>(i);
    b.add_register("AUX_" + s, Role::AUX, blk, a.aux[i]);
    b.add_register("CTRL_" + s, Role::CTRL, blk, {a.ctrl[i]});
    b.add_register("TEST_" + s, Role::TEST, blk, {a.test[i][0], a.test[i][1]});
    b.add_register("DUMMY_" + s, Role::DUMMY, blk, {a.dummy[i][0], a.dummy[i][1]});
    if (!a.anc[i].empty()) b.add_register("ANC_" + s, Role::ANC, blk, a.anc[i]);
  }
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Qubit> all(a.w);
    std::iota(all.begin(), all.end(), Qubit{0});
    b.add_register("B_" + std::to_string(j), Role::B, static_cast<int>(j), mapped(all, maps[j]));
  }
  const auto kn = mapped(q.outputs(), maps[n]);
  if (!q.traced().empty()) b.add_register("B_" + std::to_string(n), Role::B, static_cast<int>(n), mapped(q.traced(), maps[n]));
  b.add_register("K_" + std::to_string(n), Role::K, static_cast<int>(n), kn);

  std::vector<Qubit> tests, dummies;
  for (std::size_t i = 1; i < n; ++i) {
    tests.insert(tests.end(), a.test[i].begin(), a.test[i].end());
    dummies.insert(dummies.end(), a.dummy[i].begin(), a.dummy[i].end());
  }
  std::vector<Qubit> out = kn;
  const auto& first = first_circuit ? tests : dummies;
  const auto& second = first_circuit ? dummies : tests;
  out.insert(out.end(), first.begin(), first.end());
  out.insert(out.end(), second.begin(), second.end());
  std::set<Qubit> keep(out.begin(), out.end());
  std::vector<Qubit> traced;
  for (Qubit x = 0; x < a.width; ++x) {
    if (!keep.count(x)) traced.push_back(x);
  }
  b.set_inputs(a.inputs).set_ancillas(a.ancillas).set_outputs(out).set_traced(traced);
  return b.build();
}

}  // namespace detail

/// Constants of the depth bound. Each controlled test lowers a swap test on
/// s-wire registers under one more control: depth 4 ceil(log2 s) + 3 with CNOT
/// trees, 7 with fan-out. The critical path is selection gate, one test,
/// one piece of duration p, one test.
inline DepthBound construction_depth_bound(std::size_t s, std::size_t piece_duration, bool use_fanout, bool degenerate) {
  DepthBound db;
  db.s = s;
  if (degenerate) {
    db.a = 0;
    db.b = piece_duration;
    if (use_fanout) db.d = piece_duration;
    return db;
  }
  db.a = 8;
  db.b = 7 + piece_duration;
  if (use_fanout) db.d = 2 * 7 + 1 + piece_duration;
  return db;
}

/// r parallel copies of each circuit.
inline std::pair<Circuit, Circuit> amplify(const Circuit& c1, const Circuit& c2, std::size_t r) {
  if (r < 1) throw Error("amplify: r must be at least 1");
  if (r == 1) return {c1, c2};
  std::vector<Circuit> a(r, c1), b(r, c2);
  return {tensor_parallel(std::span<const Circuit>(a)), tensor_parallel(std::span<const Circuit>(b))};
}

inline CIConstruction build_log_depth_ci(const CIInstance& instance, const ReductionOptions& opts = {}) {
  if (opts.repetitions < 1) throw Error("build_log_depth_ci: repetitions must be at least 1");
  const CIInstance inst = pad(instance);
  const std::size_t n = inst.q1.gate_count(), w = inst.q1.width(), h = inst.q1.inputs().size();
  if (!opts.boundary_selection.empty() && opts.boundary_selection.size() != n - 1) {
    throw Error("build_log_depth_ci: boundary_selection needs " + std::to_string(n - 1) + " entries");
  }
  const auto wires = detail::allocate(n, w, h);

  CIConstruction out;
  out.c1 = detail::build_one(wires, inst.q1, true, opts);
  out.c2 = detail::build_one(wires, inst.q2, false, opts);

  auto& m = out.manifest;
  m.n = n;
  m.w = w;
  m.h = h;
  m.degenerate = (n == 1);
  m.use_fanout = opts.use_fanout;
  m.repetitions = opts.repetitions;
  std::size_t p = 1;
  for (const Circuit* q : {&inst.q1, &inst.q2}) {
    for (const Gate& g : q->gates()) p = std::max(p, gate_duration(g, opts.use_fanout));
  }
  m.depth_bound = construction_depth_bound(w, p, opts.use_fanout, m.degenerate);
  m.registers = out.c1.layout();
  for (std::size_t i = 1; i < n; ++i) {
    m.test_wires.insert(m.test_wires.end(), wires.test[i].begin(), wires.test[i].end());
    m.dummy_wires.insert(m.dummy_wires.end(), wires.dummy[i].begin(), wires.dummy[i].end());
  }
  m.k_wires = out.c1.layout().qubits_of(Role::K);
  if (opts.repetitions > 1) std::tie(out.c1, out.c2) = amplify(out.c1, out.c2, opts.repetitions);
  return out;
}

// ---------------------------------------------------------------------------
// Witness inputs

struct WitnessFactor {
  std::vector<std::size_t> positions;  // indices into the constructed circuit's input list
  PureState state;
};

/// Product input psi (x) U_1 psi (x) ... for the blocks, and a copy of the
/// matching block state in every auxiliary register.
struct WitnessState {
  std::size_t input_width = 0;
  std::vector<WitnessFactor> factors;

  /// The factors placed on the input wires of `c`.
  std::vector<StateFactor> wire_factors(const Circuit& c) const {
    if (c.inputs().size() != input_width) throw Error("WitnessState: circuit input does not match");
    std::vector<StateFactor> out;
    for (const auto& f : factors) {
      StateFactor sf;
      for (std::size_t p : f.positions) sf.wires.push_back(c.inputs()[p]);
      sf.amps = f.state.amps;
      out.push_back(std::move(sf));
    }
    return out;
  }

  /// Dense product over the whole input; only for small inputs.
  PureState state() const {
    std::vector<std::pair<std::vector<Qubit>, PureState>> parts;
    for (const auto& f : factors) parts.push_back({{f.positions.begin(), f.positions.end()}, f.state});
    return product_state(input_width, parts);
  }
};

/// Adds k idle wires to Q's inputs and outputs, as a purifying reference.
inline Circuit with_purifier(const Circuit& q, std::size_t k) {
  CircuitBuilder b = CircuitBuilder::from(q);
  const Qubit first = b.add_wires(k);
  std::vector<Qubit> in = q.inputs(), out = q.outputs();
  for (Qubit r = first; r < first + k; ++r) {
    in.push_back(r);
    out.push_back(r);
  }
  b.set_inputs(in).set_outputs(out).set_layout({});
  return b.build();
}

/// Witness for the construction built from Q (already padded).
inline WitnessState witness_input(const Circuit& q, const PureState& psi) {
  detail::require_simulable(q, "witness_input");
  if (psi.width != q.inputs().size()) throw Error("witness_input: state does not match the circuit's input");
  if (q.gate_count() == 0) throw Error("witness_input: circuit has no gates");
  const std::size_t n = q.gate_count(), w = q.width(), h = q.inputs().size();
  Vector phi = Vector::Zero(Eigen::Index{1} << w);
  for (std::uint64_t x = 0; x < psi.dim(); ++x) phi(detail::scatter(x, q.inputs())) = psi.amps(x);
  std::vector<Vector> stages{phi};  // stages[j] = U_j .. U_1 phi_0
  for (std::size_t j = 1; j < n; ++j) {
    detail::apply_gate_bits(phi.data(), w, q.gates()[j - 1]);
    stages.push_back(phi);
  }
  WitnessState ws;
  ws.input_width = h + 2 * (n - 1) * w;
  std::vector<std::size_t> pos(h);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  ws.factors.push_back({pos, psi});
  for (std::size_t j = 2; j <= n; ++j) {
    std::vector<std::size_t> p(w);
    std::iota(p.begin(), p.end(), h + (j - 2) * w);
    ws.factors.push_back({p, {w, stages[j - 1]}});
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> p(w);
    std::iota(p.begin(), p.end(), h + (n - 1) * w + (i - 1) * w);
    ws.factors.push_back({p, {w, stages[i]}});
  }
  return ws;
}

// ---------------------------------------------------------------------------
// Controlled dispatch

struct DispatchCircuit {
  Circuit circuit;
  Qubit control = 0;
  std::size_t copies = 0;
  /// depth <= body_depth + overhead: two X layers plus the copy and uncopy
  /// steps of both bodies, 4 ceil(log2 m) + 2 with CNOT trees and 6 with
  /// fan-out. body_depth adds the depths of the two bodies.
  std::size_t body_depth = 0;
  std::size_t overhead = 0;
  std::size_t bound() const { return body_depth + overhead; }
};

namespace detail {

/// Two layers of parallel SWAP2 realizing the wire permutation dest[k] <-
/// src[k] (content on src[k] ends on dest[k]). Wires outside src must be
/// fixed by the permutation.
inline std::vector<Gate> permutation_swaps(const std::vector<Qubit>& src, const std::vector<Qubit>& dest,
                                           std::size_t width) {
  std::vector<Qubit> to(width);
  std::iota(to.begin(), to.end(), Qubit{0});
  std::vector<bool> is_src(width, false), is_dest(width, false);
  for (std::size_t k = 0; k < src.size(); ++k) {
    to[src[k]] = dest[k];
    is_src[src[k]] = true;
    is_dest[dest[k]] = true;
  }
  // Complete to a bijection: wires that lose content feed wires that gain none.
  std::vector<Qubit> free_dest, free_src;
  for (Qubit q = 0; q < width; ++q) {
    if (is_dest[q] && !is_src[q]) free_src.push_back(q);
    if (is_src[q] && !is_dest[q]) free_dest.push_back(q);
  }
  for (std::size_t k = 0; k < free_src.size(); ++k) to[free_src[k]] = free_dest[k];

  std::vector<Gate> first, second;
  std::vector<bool> seen(width, false);
  for (Qubit start = 0; start < width; ++start) {
    if (seen[start] || to[start] == start) continue;
    std::vector<Qubit> cyc;
    for (Qubit q = start; !seen[q]; q = to[q]) {
      seen[q] = true;
      cyc.push_back(q);
    }
    const std::size_t k = cyc.size();
    // Shift a_i -> a_{i+1} as r2 after r1, with r1(a_i) = a_{-i}, r2(a_i) = a_{1-i}.
    for (std::size_t i = 1; i < k - i; ++i) first.push_back(gates::SWAP2(cyc[i], cyc[k - i]));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = (k + 1 - i) % k;
      if (i < j) second.push_back(gates::SWAP2(cyc[i], cyc[j]));
    }
  }
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

}  // namespace detail

/// One circuit running Q1 when the control reads 0 and Q2 when it reads 1.
/// Wires [0, w) are shared; the control is wire w and copies follow. Inputs
/// are Q1's inputs then the control; outputs are Q1's outputs then the
/// control. Q2's wire roles are routed onto Q1's by controlled swaps.
inline DispatchCircuit build_controlled_dispatch(const QCDInstance& instance, bool use_fanout = false) {
  instance.check();
  const std::size_t w = std::max(instance.q1.width(), instance.q2.width());
  auto widen = [w](const Circuit& c) {
    std::vector<Qubit> anc = c.ancillas(), tr = c.traced();
    for (Qubit q = static_cast<Qubit>(c.width()); q < w; ++q) {
      anc.push_back(q);
      tr.push_back(q);
    }
    return std::make_pair(anc, tr);
  };
  const auto [anc1, tr1] = widen(instance.q1);
  const auto& q1 = instance.q1;
  const auto& q2 = instance.q2;
  // Route Q1's input and ancilla roles onto Q2's before Q2, and Q2's output
  // and traced roles back onto Q1's after.
  const auto [anc2, tr2] = widen(q2);
  std::vector<Qubit> src_in = q1.inputs(), dst_in = q2.inputs();
  src_in.insert(src_in.end(), anc1.begin(), anc1.end());
  dst_in.insert(dst_in.end(), anc2.begin(), anc2.end());
  std::vector<Qubit> src_out = q2.outputs(), dst_out = q1.outputs();
  src_out.insert(src_out.end(), tr2.begin(), tr2.end());
  dst_out.insert(dst_out.end(), tr1.begin(), tr1.end());

  std::vector<Gate> body2 = detail::permutation_swaps(src_in, dst_in, w);
  body2.insert(body2.end(), q2.gates().begin(), q2.gates().end());
  auto post = detail::permutation_swaps(src_out, dst_out, w);
  body2.insert(body2.end(), post.begin(), post.end());

  const auto control = static_cast<Qubit>(w);
  const std::size_t need = std::max(detail::copies_needed(q1.gates()), detail::copies_needed(body2));
  CircuitBuilder b(w + 1);
  const Qubit first = b.add_wires(need);
  std::vector<Qubit> copies(need);
  std::iota(copies.begin(), copies.end(), first);

  b.add(gates::X(control));
  b.add_all(detail::controlled_gates(q1.gates(), control, copies, use_fanout));
  b.add(gates::X(control));
  b.add_all(detail::controlled_gates(body2, control, copies, use_fanout));

  std::vector<Qubit> in = q1.inputs(), out = q1.outputs(), anc = anc1, tr = tr1;
  in.push_back(control);
  out.push_back(control);
  anc.insert(anc.end(), copies.begin(), copies.end());
  tr.insert(tr.end(), copies.begin(), copies.end());
  b.set_inputs(in).set_ancillas(anc).set_outputs(out).set_traced(tr);

  DispatchCircuit d;
  d.circuit = b.build();
  d.control = control;
  d.copies = need;
  auto body_depth = [w](std::span<const Gate> gs) {
    CircuitBuilder t(w);
    t.add_all(gs);
    return pack_layers(t.build(), CostModel{true}).second;
  };
  d.body_depth = body_depth(q1.gates()) + body_depth(body2);
  d.overhead = use_fanout ? 6 : 4 * ceil_log2(need + 1) + 2;
  return d;
}

}  // namespace logdepth
