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

#include <vector>

#include "logdepth/sim.hpp"

namespace logdepth {

/// A linear map on operators stored as its natural representation: with
/// column-major vec, vec(out) = S vec(in).
class Channel {
 public:
  Channel() = default;
  Channel(std::size_t din, std::size_t dout, Matrix s) : din_(din), dout_(dout), s_(std::move(s)) {
    if (s_.rows() != static_cast<Eigen::Index>(dout * dout) || s_.cols() != static_cast<Eigen::Index>(din * din)) {
      throw Error("Channel: superoperator shape does not match dimensions");
    }
  }

  /// The channel of a normalized circuit: inputs to outputs, tracing the
  /// traced wires.
  static Channel from_circuit(const Circuit& c) {
    detail::require_simulable(c, "Channel::from_circuit");
    const Matrix v = circuit_isometry(c);
    const std::size_t din = c.input_dim(), dk = c.output_dim();
    const std::size_t de = std::size_t{1} << c.traced().size();
    // Column e of `a` is vec of the Kraus operator for environment state e.
    Matrix a = Matrix::Zero(dk * din, de);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const auto k = detail::gather(i, c.outputs()), e = detail::gather(i, c.traced());
      for (std::size_t j = 0; j < din; ++j) a(k + dk * j, e) = v(i, j);
    }
    std::vector<Eigen::Index> live;
    for (Eigen::Index e = 0; e < a.cols(); ++e) {
      if (a.col(e).squaredNorm() > 0.0) live.push_back(e);
    }
    Matrix packed(a.rows(), static_cast<Eigen::Index>(live.size()));
    for (std::size_t t = 0; t < live.size(); ++t) packed.col(t) = a.col(live[t]);
    return from_stacked_kraus(din, dk, packed);
  }

  static Channel from_kraus(const std::vector<Matrix>& ks) {
    if (ks.empty()) throw Error("Channel::from_kraus: no operators");
    const auto dk = static_cast<std::size_t>(ks[0].rows()), din = static_cast<std::size_t>(ks[0].cols());
    Matrix a(dk * din, static_cast<Eigen::Index>(ks.size()));
    for (std::size_t e = 0; e < ks.size(); ++e) {
      if (ks[e].rows() != ks[0].rows() || ks[e].cols() != ks[0].cols()) throw Error("Channel::from_kraus: shape mismatch");
      a.col(e) = Eigen::Map<const Vector>(ks[e].data(), ks[e].size());
    }
    return from_stacked_kraus(din, dk, a);
  }

  static Channel identity(std::size_t dim) {
    return from_kraus({Matrix::Identity(dim, dim)});
  }

  std::size_t din() const { return din_; }
  std::size_t dout() const { return dout_; }
  const Matrix& superoperator() const { return s_; }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != static_cast<Eigen::Index>(din_) || rho.cols() != rho.rows()) {
      throw Error("Channel::apply: input dimension mismatch");
    }
    Vector out = s_ * Eigen::Map<const Vector>(rho.data(), rho.size());
    return Eigen::Map<const Matrix>(out.data(), dout_, dout_);
  }

  /// The Hilbert-Schmidt adjoint map.
  Matrix adjoint_apply(const Matrix& y) const {
    if (y.rows() != static_cast<Eigen::Index>(dout_) || y.cols() != y.rows()) {
      throw Error("Channel::adjoint_apply: dimension mismatch");
    }
    Vector out = s_.adjoint() * Eigen::Map<const Vector>(y.data(), y.size());
    return Eigen::Map<const Matrix>(out.data(), din_, din_);
  }

  /// (this (x) id_R) on an operator over system (x) reference, with the system
  /// as the less significant factor.
  Matrix apply_with_reference(const Matrix& rho, std::size_t dref) const {
    return blockwise(rho, dref, din_, dout_, [this](const Matrix& b) { return apply(b); });
  }

  Matrix adjoint_with_reference(const Matrix& y, std::size_t dref) const {
    return blockwise(y, dref, dout_, din_, [this](const Matrix& b) { return adjoint_apply(b); });
  }

  Channel operator-(const Channel& o) const {
    check_same(o);
    return {din_, dout_, s_ - o.s_};
  }

  Channel operator+(const Channel& o) const {
    check_same(o);
    return {din_, dout_, s_ + o.s_};
  }

  /// Trace preservation defect: max entry of Phi^*(I) - I.
  double trace_preservation_error() const {
    Matrix t = adjoint_apply(Matrix::Identity(dout_, dout_)) - Matrix::Identity(din_, din_);
    return t.cwiseAbs().maxCoeff();
  }

 private:
  static Channel from_stacked_kraus(std::size_t din, std::size_t dk, const Matrix& a) {
    const Matrix g = a * a.adjoint();
    Matrix s(dk * dk, din * din);
    for (std::size_t jp = 0; jp < din; ++jp) {
      for (std::size_t j = 0; j < din; ++j) {
        for (std::size_t kp = 0; kp < dk; ++kp) {
          for (std::size_t k = 0; k < dk; ++k) s(k + dk * kp, j + din * jp) = g(k + dk * j, kp + dk * jp);
        }
      }
    }
    return {din, dk, std::move(s)};
  }

  template <class F>
  static Matrix blockwise(const Matrix& m, std::size_t dref, std::size_t din, std::size_t dout, F&& f) {
    if (m.rows() != static_cast<Eigen::Index>(din * dref) || m.cols() != m.rows()) {
      throw Error("Channel: operator does not match system and reference dimensions");
    }
    Matrix out(dout * dref, dout * dref);
    for (std::size_t r = 0; r < dref; ++r) {
      for (std::size_t rp = 0; rp < dref; ++rp) {
        out.block(r * dout, rp * dout, dout, dout) = f(Matrix(m.block(r * din, rp * din, din, din)));
      }
    }
    return out;
  }

  void check_same(const Channel& o) const {
    if (din_ != o.din_ || dout_ != o.dout_) throw Error("Channel: dimension mismatch");
  }

  std::size_t din_ = 0, dout_ = 0;
  Matrix s_;
};

}  // namespace logdepth
