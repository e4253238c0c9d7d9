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

// Pure-state simulation of wide circuits whose state stays close to a
// product. Wires join the dense active block on first use and leave it after
// their last use whenever the leaving set is in a product state with the
// rest. Exact: nothing is dropped unless it factors to within `tol`.

#pragma once

#include <map>
#include <vector>

#include "logdepth/sim.hpp"

namespace logdepth {

/// A pure factor of the full state on an ordered list of wires.
struct StateFactor {
  std::vector<Qubit> wires;
  Vector amps;
};

class FactoredState {
 public:
  /// `inputs` are pure factors on disjoint wires; every other wire is |0>.
  FactoredState(std::size_t width, std::vector<StateFactor> inputs, double tol = 1e-13)
      : width_(width), owner_(width, -1), tol_(tol) {
    for (auto& f : inputs) {
      if (f.amps.size() != (Eigen::Index{1} << f.wires.size())) throw Error("FactoredState: factor size mismatch");
      for (Qubit q : f.wires) {
        if (q >= width) throw Error("FactoredState: wire out of range");
        if (owner_[q] != -1) throw Error("FactoredState: input factors overlap");
        owner_[q] = static_cast<int>(factors_.size());
      }
      factors_.push_back(std::move(f));
      live_.push_back(true);
    }
  }

  /// Runs `c`'s gates. Groups in `hints` are tried as a unit when releasing.
  void run(const Circuit& c, const std::vector<std::vector<Qubit>>& hints = {}) {
    if (c.width() != width_) throw Error("FactoredState: circuit width mismatch");
    std::vector<std::size_t> last(width_, 0);
    std::vector<bool> used(width_, false);
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
      for (Qubit q : c.gates()[i].support()) {
        last[q] = i;
        used[q] = true;
      }
    }
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
      const Gate& g = c.gates()[i];
      for (Qubit q : g.support()) activate(q);
      Gate local = g;
      for (auto& q : local.operands) q = pos_[q];
      for (auto& q : local.controls) q = pos_[q];
      detail::apply_gate_bits(active_.data(), active_wires_.size(), local);
      peak_ = std::max(peak_, active_wires_.size());
      std::vector<Qubit> dead;
      for (Qubit q : active_wires_) {
        if (!used[q] || last[q] <= i) dead.push_back(q);
      }
      if (!dead.empty()) release(dead, hints);
    }
  }

  std::size_t peak_active() const { return peak_; }
  std::size_t active_count() const { return active_wires_.size(); }

  /// Reduced density on the ordered wires `keep`.
  Matrix reduced_density(std::span<const Qubit> keep) const {
    detail::check_keep(keep, width_, "FactoredState::reduced_density");
    // Group the kept wires by the factor that holds them.
    std::map<int, std::vector<std::size_t>> by_factor;  // factor -> positions in keep
    for (std::size_t k = 0; k < keep.size(); ++k) by_factor[holder(keep[k])].push_back(k);
    const std::uint64_t dk = std::uint64_t{1} << keep.size();
    Matrix out = Matrix::Ones(dk, dk);
    for (const auto& [f, positions] : by_factor) {
      std::vector<Qubit> local;
      for (std::size_t p : positions) local.push_back(local_index(f, keep[p]));
      Matrix part;
      if (f == kZero) {
        part = Matrix::Zero(std::int64_t{1} << local.size(), std::int64_t{1} << local.size());
        part(0, 0) = 1.0;
      } else {
        const auto& [wires, amps] = factor_view(f);
        part = logdepth::reduced_density(PureState{wires.size(), amps}, local).m;
      }
      for (std::uint64_t a = 0; a < dk; ++a) {
        for (std::uint64_t b = 0; b < dk; ++b) {
          std::uint64_t la = 0, lb = 0;
          for (std::size_t j = 0; j < positions.size(); ++j) {
            la |= ((a >> positions[j]) & 1u) << j;
            lb |= ((b >> positions[j]) & 1u) << j;
          }
          out(a, b) *= part(la, lb);
        }
      }
    }
    return out;
  }

  double probability_all_zero(std::span<const Qubit> wires) const {
    Matrix r = reduced_density(wires);
    return r(0, 0).real();
  }

 private:
  static constexpr int kZero = -2;
  static constexpr int kActive = -3;

  int holder(Qubit q) const {
    if (pos_.count(q)) return kActive;
    return owner_[q] >= 0 ? owner_[q] : kZero;
  }

  Qubit local_index(int f, Qubit q) const {
    if (f == kActive) return pos_.at(q);
    if (f == kZero) return 0;
    const auto& w = factors_[f].wires;
    return static_cast<Qubit>(std::find(w.begin(), w.end(), q) - w.begin());
  }

  std::pair<const std::vector<Qubit>&, const Vector&> factor_view(int f) const {
    if (f == kActive) return {active_wires_, active_};
    return {factors_[f].wires, factors_[f].amps};
  }

  void activate(Qubit q) {
    if (pos_.count(q)) return;
    Vector add;
    std::vector<Qubit> wires;
    if (owner_[q] >= 0) {
      const int f = owner_[q];
      wires = factors_[f].wires;
      add = factors_[f].amps;
      live_[f] = false;
      for (Qubit w : wires) owner_[w] = -1;
    } else {
      wires = {q};
      add = Vector::Zero(2);
      add(0) = 1.0;
    }
    if (active_wires_.size() + wires.size() > kMaxPureWidth) throw Error("FactoredState: active block too wide");
    active_ = active_wires_.empty() ? add : kron(add, active_);
    for (Qubit w : wires) {
      pos_[w] = static_cast<Qubit>(active_wires_.size());
      active_wires_.push_back(w);
    }
  }

  /// Tries to split `group` (active wires) off as a pure factor.
  bool try_split(const std::vector<Qubit>& group) {
    if (group.empty()) return false;
    if (group.size() == active_wires_.size()) {
      factors_.push_back({active_wires_, active_});
      live_.push_back(true);
      for (Qubit q : active_wires_) owner_[q] = static_cast<int>(factors_.size() - 1);
      pos_.clear();
      active_wires_.clear();
      active_ = Vector();
      return true;
    }
    std::vector<Qubit> local;
    for (Qubit q : group) local.push_back(pos_.at(q));
    PureState st{active_wires_.size(), active_};
    Matrix m = split_amplitudes(st, local);
    if (m.rows() > 1024) return false;
    auto e = eig_hermitian(m * m.adjoint());
    const Eigen::Index top = e.values.size() - 1;
    if (1.0 - e.values(top) > tol_) return false;
    Vector v = e.vectors.col(top);
    Vector rest = (v.adjoint() * m).transpose();
    rest /= rest.norm();
    // New active block holds the remaining wires in their current order.
    std::vector<Qubit> rest_wires;
    for (Qubit q : active_wires_) {
      if (std::find(group.begin(), group.end(), q) == group.end()) rest_wires.push_back(q);
    }
    factors_.push_back({group, v});
    live_.push_back(true);
    for (Qubit q : group) {
      owner_[q] = static_cast<int>(factors_.size() - 1);
      pos_.erase(q);
    }
    active_ = rest;
    active_wires_ = rest_wires;
    for (std::size_t k = 0; k < active_wires_.size(); ++k) pos_[active_wires_[k]] = static_cast<Qubit>(k);
    return true;
  }

  void release(std::vector<Qubit> dead, const std::vector<std::vector<Qubit>>& hints) {
    auto is_dead = [&](Qubit q) { return std::find(dead.begin(), dead.end(), q) != dead.end(); };
    for (const auto& h : hints) {
      if (!h.empty() && std::all_of(h.begin(), h.end(), [&](Qubit q) { return pos_.count(q) && is_dead(q); })) {
        if (try_split(h)) std::erase_if(dead, [&](Qubit q) { return !pos_.count(q); });
      }
    }
    for (Qubit q : std::vector<Qubit>(dead)) {
      if (pos_.count(q) && try_split({q})) std::erase(dead, q);
    }
    if (dead.size() > 1) try_split(dead);
  }

  std::size_t width_;
  std::vector<int> owner_;  // factor index, or -1 when active or untouched |0>
  std::vector<StateFactor> factors_;
  std::vector<bool> live_;
  std::vector<Qubit> active_wires_;
  std::map<Qubit, Qubit> pos_;
  Vector active_;
  std::size_t peak_ = 0;
  double tol_;
};

}  // namespace logdepth
