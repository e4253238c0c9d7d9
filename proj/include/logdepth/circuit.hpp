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
 * @file circuit.hpp
 * @brief Mixed-state circuits in normalized form.
 *
 * A circuit prepares its ancilla wires in |0>, applies a program-ordered list
 * of unitary gates, and finally discards its traced wires. Layering is never
 * stored: it is recomputed by greedy earliest-layer packing whenever depth is
 * needed, so the program order is the only source of truth.
 *
 * Qubit 0 is the least significant tensor factor everywhere. Ordered wire
 * lists (inputs, outputs, register qubits) put their first element in the
 * least significant position of the corresponding subsystem index.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logdepth/gates.hpp"

namespace logdepth {

enum class Role : std::uint8_t { H, A, B, K, AUX, CTRL, TEST, DUMMY, ANC };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::H: return "H";
    case Role::A: return "A";
    case Role::B: return "B";
    case Role::K: return "K";
    case Role::AUX: return "AUX";
    case Role::CTRL: return "CTRL";
    case Role::TEST: return "TEST";
    case Role::DUMMY: return "DUMMY";
    case Role::ANC: return "ANC";
  }
  return "?";
}

/// Output-side roles relabel wires that already carry an input-side role.
inline bool is_output_side(Role r) { return r == Role::B || r == Role::K; }

/// A named register. `block` is the piece index (0 when not block-scoped);
/// `group` separates parallel copies after tensor composition.
struct Register {
  std::string name;
  Role role = Role::H;
  int block = 0;
  int group = 0;
  std::vector<Qubit> qubits;

  /// Tag such as "H_2" or "CTRL_1"; block 0 yields the bare role name.
  std::string tag() const {
    std::string t(to_string(role));
    if (block > 0) t += "_" + std::to_string(block);
    return t;
  }

  bool operator==(const Register&) const = default;
};

/// Parses a role tag ("TEST_3", "K") into role and block.
inline std::optional<std::pair<Role, int>> parse_role_tag(std::string_view tag) {
  std::string_view head = tag;
  int block = 0;
  if (auto us = tag.rfind('_'); us != std::string_view::npos) {
    head = tag.substr(0, us);
    auto tail = tag.substr(us + 1);
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), block);
    if (ec != std::errc{} || p != tail.data() + tail.size() || block < 1) return std::nullopt;
  }
  for (Role r : {Role::H, Role::A, Role::B, Role::K, Role::AUX, Role::CTRL, Role::TEST,
                 Role::DUMMY, Role::ANC}) {
    if (to_string(r) == head) return std::make_pair(r, block);
  }
  return std::nullopt;
}

struct RegisterLayout {
  std::vector<Register> registers;

  bool empty() const { return registers.empty(); }

  std::vector<const Register*> find(Role role, int block = -1, int group = -1) const {
    std::vector<const Register*> out;
    for (const auto& r : registers) {
      if (r.role == role && (block < 0 || r.block == block) && (group < 0 || r.group == group)) {
        out.push_back(&r);
      }
    }
    return out;
  }

  /// Concatenated qubits of every register with this role, in layout order.
  std::vector<Qubit> qubits_of(Role role, int group = -1) const {
    std::vector<Qubit> out;
    for (const auto* r : find(role, -1, group)) out.insert(out.end(), r->qubits.begin(), r->qubits.end());
    return out;
  }

  bool operator==(const RegisterLayout&) const = default;
};

/// Placement of a preparation or discard that is not at the circuit boundary.
/// Only non-normalized circuits carry markers.
struct Marker {
  enum class Kind : std::uint8_t { Prep, Trace };
  Kind kind = Kind::Prep;
  Qubit qubit = 0;
  std::size_t position = 0;  // number of gates preceding the marker
  bool operator==(const Marker&) const = default;
};

class CircuitBuilder;

class Circuit {
 public:
  Circuit() = default;

  std::size_t width() const { return width_; }
  const std::vector<Qubit>& inputs() const { return inputs_; }
  const std::vector<Qubit>& ancillas() const { return ancillas_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Qubit>& traced() const { return traced_; }
  const std::vector<Qubit>& outputs() const { return outputs_; }
  const RegisterLayout& layout() const { return layout_; }
  const std::vector<Marker>& markers() const { return markers_; }

  std::size_t gate_count() const { return gates_.size(); }
  bool is_normalized() const { return markers_.empty(); }
  std::size_t input_dim() const { return std::size_t{1} << inputs_.size(); }
  std::size_t output_dim() const { return std::size_t{1} << outputs_.size(); }

  bool operator==(const Circuit&) const = default;

 private:
  friend class CircuitBuilder;
  std::size_t width_ = 0;
  std::vector<Qubit> inputs_, ancillas_;
  std::vector<Gate> gates_;
  std::vector<Qubit> traced_, outputs_;
  RegisterLayout layout_;
  std::vector<Marker> markers_;
};

/// Mutable staging area for a Circuit. Until any io list is set explicitly,
/// every wire is an input that is kept as an output.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t width = 0) : width_(width) {}

  static CircuitBuilder from(const Circuit& c) {
    CircuitBuilder b(c.width_);
    b.inputs_ = c.inputs_;
    b.ancillas_ = c.ancillas_;
    b.gates_ = c.gates_;
    b.traced_ = c.traced_;
    b.outputs_ = c.outputs_;
    b.layout_ = c.layout_;
    b.markers_ = c.markers_;
    b.explicit_io_ = true;
    return b;
  }

  std::size_t width() const { return width_; }

  /// Appends `count` fresh wires and returns the first index.
  Qubit add_wires(std::size_t count) {
    Qubit first = static_cast<Qubit>(width_);
    width_ += count;
    return first;
  }

  CircuitBuilder& set_inputs(std::vector<Qubit> q) { inputs_ = std::move(q); explicit_io_ = true; return *this; }
  CircuitBuilder& set_ancillas(std::vector<Qubit> q) { ancillas_ = std::move(q); explicit_io_ = true; return *this; }
  CircuitBuilder& set_outputs(std::vector<Qubit> q) { outputs_ = std::move(q); explicit_io_ = true; return *this; }
  CircuitBuilder& set_traced(std::vector<Qubit> q) { traced_ = std::move(q); explicit_io_ = true; return *this; }
  CircuitBuilder& set_layout(RegisterLayout l) { layout_ = std::move(l); return *this; }

  CircuitBuilder& add(Gate g) { gates_.push_back(std::move(g)); return *this; }
  CircuitBuilder& add_all(std::span<const Gate> gs) {
    gates_.insert(gates_.end(), gs.begin(), gs.end());
    return *this;
  }
  CircuitBuilder& add_register(std::string name, Role role, int block, std::vector<Qubit> qubits,
                               int group = 0) {
    layout_.registers.push_back({std::move(name), role, block, group, std::move(qubits)});
    return *this;
  }
  /// Records a preparation at the current program position (non-normalized
  /// unless no gate precedes it).
  CircuitBuilder& prep_here(Qubit q) {
    if (!gates_.empty()) markers_.push_back({Marker::Kind::Prep, q, gates_.size()});
    return *this;
  }
  CircuitBuilder& trace_here(Qubit q) {
    markers_.push_back({Marker::Kind::Trace, q, gates_.size()});
    return *this;
  }
  CircuitBuilder& set_markers(std::vector<Marker> m) { markers_ = std::move(m); return *this; }

  std::vector<Gate>& gates() { return gates_; }
  RegisterLayout& layout() { return layout_; }

  Circuit build() const {
    Circuit c;
    c.width_ = width_;
    c.gates_ = gates_;
    c.layout_ = layout_;
    c.markers_ = markers_;
    if (explicit_io_) {
      c.inputs_ = inputs_;
      c.ancillas_ = ancillas_;
      c.outputs_ = outputs_;
      c.traced_ = traced_;
    } else {
      c.inputs_.resize(width_);
      std::iota(c.inputs_.begin(), c.inputs_.end(), Qubit{0});
      c.outputs_ = c.inputs_;
    }
    return c;
  }

 private:
  std::size_t width_ = 0;
  std::vector<Qubit> inputs_, ancillas_;
  std::vector<Gate> gates_;
  std::vector<Qubit> traced_, outputs_;
  RegisterLayout layout_;
  std::vector<Marker> markers_;
  bool explicit_io_ = false;
};

/// Convenience: a circuit of `width` wires where `ancillas` start in |0>,
/// everything else is input, and every wire not in `traced` is an output.
/// Input and output orders are ascending wire index.
inline Circuit make_circuit(std::size_t width, std::vector<Gate> gates,
                            std::vector<Qubit> ancillas = {}, std::vector<Qubit> traced = {}) {
  std::set<Qubit> anc(ancillas.begin(), ancillas.end()), tr(traced.begin(), traced.end());
  std::vector<Qubit> in, out;
  for (Qubit q = 0; q < width; ++q) {
    if (!anc.count(q)) in.push_back(q);
    if (!tr.count(q)) out.push_back(q);
  }
  CircuitBuilder b(width);
  b.set_inputs(in).set_ancillas({anc.begin(), anc.end()}).set_outputs(out).set_traced({tr.begin(), tr.end()});
  for (auto& g : gates) b.add(std::move(g));
  return b.build();
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
  }
  std::string summary() const {
    std::string s;
    for (const auto& v : violations) s += v.code + ": " + v.detail + "\n";
    return s;
  }
};

namespace detail {

inline void check_partition(const std::vector<Qubit>& a, const std::vector<Qubit>& b, std::size_t width,
                            std::string_view what, ValidationReport& rep) {
  std::vector<int> seen(width, 0);
  bool bad = false;
  for (const auto* list : {&a, &b}) {
    for (Qubit q : *list) {
      if (q >= width) {
        rep.violations.push_back({"out-of-range wire", std::string(what) + " lists wire " + std::to_string(q)});
        bad = true;
        continue;
      }
      ++seen[q];
    }
  }
  for (std::size_t q = 0; q < width && !bad; ++q) {
    if (seen[q] != 1) {
      rep.violations.push_back({"partition", std::string(what) + " do not partition the width at wire " +
                                                 std::to_string(q)});
      return;
    }
  }
}

}  // namespace detail

/// Reports every invariant violation; never throws.
inline ValidationReport validate(const Circuit& c) {
  ValidationReport rep;
  const std::size_t w = c.width();
  detail::check_partition(c.inputs(), c.ancillas(), w, "inputs and ancillas", rep);
  detail::check_partition(c.traced(), c.outputs(), w, "traced and outputs", rep);

  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    const std::string where = "gate " + std::to_string(i) + " (" + std::string(to_string(g.kind)) + ")";
    auto ar = fixed_arity(g.kind);
    if ((ar && g.operands.size() != *ar) || (!ar && g.operands.size() < 2)) {
      rep.violations.push_back({"bad arity", where + " has " + std::to_string(g.operands.size()) + " operands"});
    }
    std::set<Qubit> seen;
    for (Qubit q : g.operands) {
      if (q >= w) rep.violations.push_back({"out-of-range operand", where + " uses wire " + std::to_string(q)});
      if (!seen.insert(q).second) rep.violations.push_back({"duplicate operand", where});
    }
    for (Qubit q : g.controls) {
      if (q >= w) rep.violations.push_back({"out-of-range operand", where + " control " + std::to_string(q)});
      if (!seen.insert(q).second) rep.violations.push_back({"control overlaps operand", where});
    }
  }

  for (const Marker& m : c.markers()) {
    if (m.kind == Marker::Kind::Prep && m.position > 0) {
      rep.violations.push_back({"non-normalized prep order", "wire " + std::to_string(m.qubit) +
                                                                 " prepared after gate " + std::to_string(m.position - 1)});
    }
    if (m.kind == Marker::Kind::Trace && m.position < c.gates().size()) {
      rep.violations.push_back({"non-normalized trace order", "wire " + std::to_string(m.qubit) +
                                                                  " traced before gate " + std::to_string(m.position)});
    }
  }

  const auto& regs = c.layout().registers;
  if (!regs.empty()) {
    std::vector<int> in_side(w, 0), out_side(w, 0);
    bool range_ok = true;
    for (const auto& r : regs) {
      for (Qubit q : r.qubits) {
        if (q >= w) {
          rep.violations.push_back({"out-of-range register", r.name + " lists wire " + std::to_string(q)});
          range_ok = false;
          continue;
        }
        auto& side = is_output_side(r.role) ? out_side : in_side;
        if (++side[q] == 2) {
          rep.violations.push_back({"overlapping registers", r.name + " reuses wire " + std::to_string(q)});
        }
      }
    }
    if (range_ok && std::count(in_side.begin(), in_side.end(), 0) > 0) {
      rep.violations.push_back({"registers do not cover width", "some wire carries no input-side role"});
    }
    // H_i (x) A_i must match B_i (x) K_i in size for every block that has both.
    std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> sizes;
    std::set<std::pair<int, int>> has_in, has_out;
    for (const auto& r : regs) {
      auto key = std::make_pair(r.group, r.block);
      if (r.role == Role::H || r.role == Role::A) { sizes[key].first += r.qubits.size(); has_in.insert(key); }
      if (r.role == Role::B || r.role == Role::K) { sizes[key].second += r.qubits.size(); has_out.insert(key); }
    }
    for (const auto& [key, sz] : sizes) {
      if (has_in.count(key) && has_out.count(key) && sz.first != sz.second) {
        rep.violations.push_back({"register isomorphism", "block " + std::to_string(key.second) +
                                                              " has |H||A| != |B||K|"});
      }
    }
  }
  return rep;
}

inline void require_valid(const Circuit& c, std::string_view op) {
  auto rep = validate(c);
  if (!rep.ok()) throw Error(std::string(op) + ": invalid circuit\n" + rep.summary());
}

// ---------------------------------------------------------------------------
// Depth

struct CostModel {
  bool fanout_unit_cost = true;
};

struct RegisterDepth {
  std::size_t gate_count = 0;
  std::size_t active_layers = 0;
};

struct DepthReport {
  std::size_t layer_count = 0;
  std::size_t gate_count = 0;
  CostModel cost_model;
  std::map<std::string, RegisterDepth> per_register;  // keyed by register name
};

/// Greedy earliest-layer packing: each gate starts at the first layer after
/// the latest layer used on any of its wires. Returns the start layer of
/// every gate and the layer count.
inline std::pair<std::vector<std::size_t>, std::size_t> pack_layers(const Circuit& c, CostModel cm = {}) {
  std::vector<std::size_t> free_at(c.width(), 0), start(c.gates().size(), 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    std::size_t s = 0;
    for (Qubit q : g.operands) s = std::max(s, free_at[q]);
    for (Qubit q : g.controls) s = std::max(s, free_at[q]);
    const std::size_t end = s + gate_duration(g, cm.fanout_unit_cost);
    for (Qubit q : g.operands) free_at[q] = end;
    for (Qubit q : g.controls) free_at[q] = end;
    start[i] = s;
    total = std::max(total, end);
  }
  return {start, total};
}

/// Gate indices grouped by packed layer (unit fan-out cost).
inline std::vector<std::vector<std::size_t>> layers(const Circuit& c) {
  auto [start, total] = pack_layers(c);
  std::vector<std::vector<std::size_t>> out(total);
  for (std::size_t i = 0; i < start.size(); ++i) out[start[i]].push_back(i);
  return out;
}

inline DepthReport depth(const Circuit& c, CostModel cm = {}) {
  require_valid(c, "depth");
  DepthReport rep;
  rep.cost_model = cm;
  rep.gate_count = c.gate_count();
  auto [start, total] = pack_layers(c, cm);
  rep.layer_count = total;
  for (const auto& r : c.layout().registers) {
    std::set<Qubit> wires(r.qubits.begin(), r.qubits.end());
    std::set<std::size_t> active;
    RegisterDepth rd;
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
      const Gate& g = c.gates()[i];
      auto sup = g.support();
      if (std::none_of(sup.begin(), sup.end(), [&](Qubit q) { return wires.count(q) > 0; })) continue;
      ++rd.gate_count;
      for (std::size_t l = 0; l < gate_duration(g, cm.fanout_unit_cost); ++l) active.insert(start[i] + l);
    }
    rd.active_layers = active.size();
    auto& slot = rep.per_register[r.name];
    slot.gate_count += rd.gate_count;
    slot.active_layers = std::max(slot.active_layers, rd.active_layers);
  }
  return rep;
}

/// Length of the longest chain of gates that pairwise share a wire in
/// program order; a lower bound for any layering.
inline std::size_t longest_dependency_chain(const Circuit& c) {
  std::vector<std::size_t> chain_at(c.width(), 0);
  std::size_t best = 0;
  for (const Gate& g : c.gates()) {
    std::size_t m = 0;
    for (Qubit q : g.support()) m = std::max(m, chain_at[q]);
    for (Qubit q : g.support()) chain_at[q] = m + 1;
    best = std::max(best, m + 1);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Slicing and composition

/// One piece per gate. The first piece prepares the ancillas, the last piece
/// performs the original trace-out; intermediate interfaces carry every wire
/// in ascending order. A single-gate circuit comes back unchanged.
inline std::vector<Circuit> slice(const Circuit& c) {
  require_valid(c, "slice");
  if (!c.is_normalized()) throw Error("slice: circuit is not in normalized form");
  const std::size_t n = c.gate_count();
  if (n == 0) throw Error("slice: circuit has no gates");
  if (n == 1) return {c};

  std::vector<Qubit> all(c.width());
  std::iota(all.begin(), all.end(), Qubit{0});
  std::vector<Circuit> pieces;
  pieces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CircuitBuilder b(c.width());
    b.set_inputs(i == 0 ? c.inputs() : all);
    b.set_ancillas(i == 0 ? c.ancillas() : std::vector<Qubit>{});
    b.set_outputs(i + 1 == n ? c.outputs() : all);
    b.set_traced(i + 1 == n ? c.traced() : std::vector<Qubit>{});
    b.set_layout(c.layout());
    b.add(c.gates()[i]);
    pieces.push_back(b.build());
  }
  return pieces;
}

/// Runs the circuits side by side on disjoint wires. The first circuit
/// occupies the lowest wires; inputs and outputs concatenate in list order.
inline Circuit tensor_parallel(std::span<const Circuit> circuits) {
  CircuitBuilder b(0);
  std::vector<Qubit> in, anc, tr, out;
  std::vector<Marker> markers;
  int group_offset = 0;
  for (const Circuit& c : circuits) {
    const Qubit off = b.add_wires(c.width());
    const std::size_t gate_off = b.gates().size();
    auto shift = [off](std::vector<Qubit> v) {
      for (auto& q : v) q += off;
      return v;
    };
    for (auto& v : {std::pair{&in, &c.inputs()}, {&anc, &c.ancillas()}, {&tr, &c.traced()}, {&out, &c.outputs()}}) {
      auto s = shift(*v.second);
      v.first->insert(v.first->end(), s.begin(), s.end());
    }
    for (Gate g : c.gates()) {
      g.operands = shift(std::move(g.operands));
      g.controls = shift(std::move(g.controls));
      b.add(std::move(g));
    }
    int max_group = 0;
    for (Register r : c.layout().registers) {
      r.qubits = shift(std::move(r.qubits));
      max_group = std::max(max_group, r.group);
      r.group += group_offset;
      b.layout().registers.push_back(std::move(r));
    }
    for (Marker m : c.markers()) {
      m.qubit += off;
      m.position += gate_off;
      markers.push_back(m);
    }
    group_offset += max_group + 1;
  }
  b.set_inputs(in).set_ancillas(anc).set_traced(tr).set_outputs(out).set_markers(markers);
  return b.build();
}

inline Circuit tensor_parallel(std::initializer_list<Circuit> cs) {
  std::vector<Circuit> v(cs);
  return tensor_parallel(std::span<const Circuit>(v));
}

}  // namespace logdepth
