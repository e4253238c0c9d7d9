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

#include <utility>

#include "logdepth/state.hpp"

namespace logdepth {

/// Sum of singular values.
inline double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("trace_norm: matrix is not square");
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

namespace detail {

inline void check_psd_pair(const Matrix& x, const Matrix& y, double tol, const char* op) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols()) {
    throw Error(std::string(op) + ": dimension mismatch");
  }
  if (min_eigenvalue(x) < -tol || min_eigenvalue(y) < -tol) {
    throw Error(std::string(op) + ": operator is not positive semidefinite");
  }
}

}  // namespace detail

/// tr sqrt(sqrt(X) Y sqrt(X)), evaluated as the trace norm of sqrt(X) sqrt(Y).
inline double fidelity(const Matrix& x, const Matrix& y, double tol = Tolerances{}.state) {
  detail::check_psd_pair(x, y, tol, "fidelity");
  return trace_norm(psd_sqrt(x) * psd_sqrt(y));
}

inline double fidelity(const DensityMatrix& x, const DensityMatrix& y) { return fidelity(x.m, y.m); }

struct FvdgSlack {
  double lower = 0.0;  // half trace distance minus (1 - F)
  double upper = 0.0;  // sqrt(1 - F^2) minus half trace distance
};

/// Slack in both Fuchs-van de Graaf inequalities.
/// 1 - F <= D <= sqrt(1 - F^2), with D the half trace distance.
inline FvdgSlack fvdg_gap(const Matrix& rho, const Matrix& xi) {
  if (rho.rows() != xi.rows()) throw Error("fvdg_gap: dimension mismatch");
  const double f = std::min(1.0, fidelity(rho, xi));
  const double d = 0.5 * trace_norm(rho - xi);
  return {d - (1.0 - f), std::sqrt(std::max(0.0, 1.0 - f * f)) - d};
}

/// tr(((I - W)/2) rho), where W swaps the low half of the wires with the
/// high half.
inline double swap_antisym_prob(const DensityMatrix& rho) {
  if (rho.width == 0 || rho.width % 2 != 0) throw Error("swap_antisym_prob: wires do not split into equal halves");
  const std::size_t half = rho.width / 2;
  const std::uint64_t da = std::uint64_t{1} << half;
  cplx tw = 0;
  for (std::uint64_t i = 0; i < rho.dim(); ++i) {
    const std::uint64_t a = i % da, b = i / da;
    tw += rho.m(static_cast<Eigen::Index>(b + da * a), static_cast<Eigen::Index>(i));
  }
  return std::clamp(0.5 * (1.0 - tw.real()), 0.0, 1.0);
}

/// The swap operator on 2n wires as a dense permutation matrix.
inline Matrix swap_operator_matrix(std::size_t n) {
  const std::uint64_t da = std::uint64_t{1} << n, d = da * da;
  Matrix w = Matrix::Zero(d, d);
  for (std::uint64_t i = 0; i < d; ++i) w(static_cast<Eigen::Index>((i / da) + da * (i % da)), i) = 1.0;
  return w;
}

}  // namespace logdepth
