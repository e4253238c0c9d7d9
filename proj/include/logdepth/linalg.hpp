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

// Dense Hermitian helpers shared by the simulator and the metrics.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "logdepth/gates.hpp"
#include "logdepth/rng.hpp"

namespace logdepth {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues below this are treated as zero when taking square roots.
inline constexpr double kEigenClamp = 1e-12;

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;
};

inline HermitianEig eig_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// f applied to the spectrum of a Hermitian matrix.
inline Matrix spectral_map(const HermitianEig& e, const std::function<double(double)>& f) {
  RealVector fv = e.values.unaryExpr(f);
  return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// Square root of a PSD matrix; eigenvalues below the clamp become zero.
inline Matrix psd_sqrt(const Matrix& m) {
  return spectral_map(eig_hermitian(m), [](double x) { return x > kEigenClamp ? std::sqrt(x) : 0.0; });
}

/// Inverse square root restricted to eigenvalues above `floor`, which are
/// raised to `floor` instead of being dropped.
inline Matrix psd_inv_sqrt(const Matrix& m, double floor) {
  return spectral_map(eig_hermitian(m), [floor](double x) { return 1.0 / std::sqrt(std::max(x, floor)); });
}

inline double min_eigenvalue(const Matrix& m) { return eig_hermitian(m).values(0); }
inline double max_eigenvalue(const Matrix& m) {
  auto e = eig_hermitian(m);
  return e.values(e.values.size() - 1);
}

/// Top eigenvector of a Hermitian matrix.
inline Vector top_eigenvector(const Matrix& m) {
  auto e = eig_hermitian(m);
  return e.vectors.col(e.vectors.cols() - 1);
}

/// Euclidean projection of a real vector onto the probability simplex.
inline RealVector project_to_simplex(const RealVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

/// Nearest density matrix in Frobenius norm: keep eigenvectors, project the
/// spectrum onto the simplex.
inline Matrix project_to_density(const Matrix& m) {
  auto e = eig_hermitian(m);
  RealVector p = project_to_simplex(e.values);
  return e.vectors * p.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// Kronecker product with `a` as the most significant factor.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Density matrix of dimension `dim` from a normalized complex Wishart
/// sample G G^* with `rank` columns.
inline Matrix random_density_matrix(std::size_t dim, Rng& rng, std::size_t rank = 0) {
  if (rank == 0) rank = dim;
  Matrix g(dim, rank);
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
  }
  Matrix rho = g * g.adjoint();
  return hermitian_part(rho / rho.trace().real());
}

/// Haar-random unit vector.
inline Vector random_unit_vector(std::size_t dim, Rng& rng) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace logdepth
