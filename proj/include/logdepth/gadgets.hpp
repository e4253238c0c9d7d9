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

// Swap operator, swap test and controlled-operation lowering.
//
// Lowering a gate list under one control: the control is copied into m - 1
// fresh |0> wires (a CNOT doubling tree, or one FANOUT), every gate of a
// packed layer takes a distinct copy as an extra control, and the copies are
// uncomputed in reverse. Here m is the widest layer of the list.

#pragma once

#include <vector>

#include "logdepth/circuit.hpp"

namespace logdepth {

inline std::size_t ceil_log2(std::size_t x) {
  std::size_t l = 0;
  while ((std::size_t{1} << l) < x) ++l;
  return l;
}

namespace detail {

inline std::size_t span_width(std::span<const Gate> gates) {
  std::size_t w = 0;
  for (const Gate& g : gates) {
    for (Qubit q : g.support()) w = std::max<std::size_t>(w, q + 1);
  }
  return w;
}

/// Gate indices of `gates` grouped by greedy layer.
inline std::vector<std::vector<std::size_t>> gate_layers(std::span<const Gate> gates) {
  CircuitBuilder b(span_width(gates));
  b.add_all(gates);
  return layers(b.build());
}

/// Copies needed to control every gate of `gates` in parallel.
inline std::size_t copies_needed(std::span<const Gate> gates) {
  std::size_t m = 0;
  for (const auto& l : gate_layers(gates)) m = std::max(m, l.size());
  return m > 0 ? m - 1 : 0;
}

/// CNOT doubling tree copying `src` into `dst` (all |0>).
inline std::vector<Gate> copy_tree(Qubit src, std::span<const Qubit> dst) {
  std::vector<Qubit> have{src};
  std::vector<Gate> out;
  std::size_t next = 0;
  while (next < dst.size()) {
    const std::size_t round = have.size();
    for (std::size_t j = 0; j < round && next < dst.size(); ++j) {
      out.push_back(gates::CNOT(have[j], dst[next]));
      have.push_back(dst[next++]);
    }
  }
  return out;
}

/// Controlled version of `body` on `control`, using `copies` as clean
/// workspace that is returned to |0>.
inline std::vector<Gate> controlled_gates(std::span<const Gate> body, Qubit control, std::span<const Qubit> copies,
                                          bool use_fanout) {
  const std::size_t need = copies_needed(body);
  if (copies.size() < need) throw Error("lower_controlled: not enough copy wires");
  std::vector<Qubit> used(copies.begin(), copies.begin() + static_cast<std::ptrdiff_t>(need));
  std::vector<Gate> fan;
  if (!used.empty()) fan = use_fanout ? std::vector<Gate>{gates::FANOUT(control, used)} : copy_tree(control, used);
  std::vector<Gate> out(fan);
  for (const auto& layer : gate_layers(body)) {
    for (std::size_t t = 0; t < layer.size(); ++t) {
      Gate g = body[layer[t]];
      g.controls.push_back(t == 0 ? control : used[t - 1]);
      out.push_back(std::move(g));
    }
  }
  out.insert(out.end(), fan.rbegin(), fan.rend());
  return out;
}

}  // namespace detail

/// W on wires [0, n) and [n, 2n): n SWAP2 gates in one layer.
inline Circuit swap_operator_gadget(std::size_t n) {
  if (n < 1) throw Error("swap_operator_gadget: n must be at least 1");
  CircuitBuilder b(2 * n);
  for (Qubit i = 0; i < n; ++i) b.add(gates::SWAP2(i, static_cast<Qubit>(n + i)));
  return b.build();
}

/// Swap test on registers A = [0, n) and B = [n, 2n). Wire 2n is the result
/// (reads 1 on the antisymmetric outcome); wires 2n+1.. hold the n - 1 copies
/// of the result used to control W in parallel and are traced.
inline Circuit swap_test_gadget(std::size_t n, bool use_fanout = false) {
  if (n < 1) throw Error("swap_test_gadget: n must be at least 1");
  const auto res = static_cast<Qubit>(2 * n);
  const Circuit w = swap_operator_gadget(n);
  std::vector<Qubit> copies;
  for (std::size_t k = 0; k + 1 < n; ++k) copies.push_back(static_cast<Qubit>(2 * n + 1 + k));
  CircuitBuilder b(3 * n);
  std::vector<Qubit> in(2 * n), out(2 * n + 1);
  std::iota(in.begin(), in.end(), Qubit{0});
  std::iota(out.begin(), out.end(), Qubit{0});
  std::vector<Qubit> anc{res};
  anc.insert(anc.end(), copies.begin(), copies.end());
  b.set_inputs(in).set_ancillas(anc).set_outputs(out).set_traced(copies);
  b.add(gates::H(res));
  b.add_all(detail::controlled_gates(w.gates(), res, copies, use_fanout));
  b.add(gates::H(res));
  return b.build();
}

/// |0><0| (x) I + |1><1| (x) U_target. `control` must lie outside the
/// target's wires; wires between the target and the control are idle
/// inputs, and copy wires are appended after the control and traced.
inline Circuit lower_controlled(const Circuit& target, Qubit control, bool use_fanout = false) {
  require_valid(target, "lower_controlled");
  if (!target.is_normalized()) throw Error("lower_controlled: target is not in normalized form");
  if (control < target.width()) {
    throw Error("lower_controlled: control wire " + std::to_string(control) + " collides with the target");
  }
  const std::size_t need = detail::copies_needed(target.gates());
  CircuitBuilder b(static_cast<std::size_t>(control) + 1);
  const Qubit first_copy = b.add_wires(need);
  std::vector<Qubit> copies(need);
  std::iota(copies.begin(), copies.end(), first_copy);

  std::vector<Qubit> in = target.inputs(), out = target.outputs(), idle;
  for (Qubit q = static_cast<Qubit>(target.width()); q <= control; ++q) idle.push_back(q);
  in.insert(in.end(), idle.begin(), idle.end());
  out.insert(out.end(), idle.begin(), idle.end());
  std::vector<Qubit> anc = target.ancillas(), tr = target.traced();
  anc.insert(anc.end(), copies.begin(), copies.end());
  tr.insert(tr.end(), copies.begin(), copies.end());
  b.set_inputs(in).set_ancillas(anc).set_outputs(out).set_traced(tr);
  if (!target.layout().empty()) {
    b.set_layout(target.layout());
    b.add_register("control", Role::CTRL, 0, {control});
    if (idle.size() > 1) b.add_register("idle", Role::AUX, 0, {idle.begin(), idle.end() - 1});
    if (!copies.empty()) b.add_register("copies", Role::ANC, 0, copies);
  }
  b.add_all(detail::controlled_gates(target.gates(), control, copies, use_fanout));
  return b.build();
}

}  // namespace logdepth
