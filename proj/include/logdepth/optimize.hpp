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
 * @file optimize.hpp
 * @brief Maximum output fidelity and diamond distance of channel pairs.
 *
 * F(Phi(rho), Psi(xi)) is jointly concave in (rho, xi), so alternating
 * projected gradient ascent reaches the global maximum. Each finished run also
 * returns an upper bound that holds for every input pair. The bound is
 * sqrt(lmax(Phi^*(Y)) lmax(Psi^*(Y^-1))), valid for any positive definite Y.
 */

#pragma once

#include <limits>
#include <vector>

#include "logdepth/channel.hpp"
#include "logdepth/metrics.hpp"

namespace logdepth {

struct OptimizerConfig {
  std::size_t max_iterations = 400;
  double convergence_tolerance = 1e-7;
  std::size_t restart_count = 8;
  std::uint64_t seed = 0;
  /// Projected gradient steps per one-sided solve.
  std::size_t inner_iterations = 30;

  void check() const {
    if (!(convergence_tolerance > 0.0)) throw Error("OptimizerConfig: tolerance must be positive");
    if (restart_count < 1) throw Error("OptimizerConfig: at least one restart is required");
    if (max_iterations < 1) throw Error("OptimizerConfig: max_iterations must be positive");
  }
};

/// Two circuits with matching input and output spaces.
struct ChannelPair {
  Circuit q1, q2;

  ChannelPair(Circuit a, Circuit b) : q1(std::move(a)), q2(std::move(b)) {
    if (q1.inputs().size() != q2.inputs().size()) throw Error("ChannelPair: input dimensions differ");
    if (q1.outputs().size() != q2.outputs().size()) throw Error("ChannelPair: output dimensions differ");
  }

  std::pair<Channel, Channel> channels() const { return {Channel::from_circuit(q1), Channel::from_circuit(q2)}; }
};

struct FidelityResult {
  double value = 0.0;
  Matrix rho, xi;
  bool converged = false;
  std::size_t iterations = 0;
  double upper_bound = 1.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_values;
  std::vector<double> trace;  // objective after each outer iteration of the best restart
};

namespace detail {

/// Gradient of P -> F(P, Q): (1/2) Q^1/2 (Q^1/2 P Q^1/2)^-1/2 Q^1/2.
inline Matrix fidelity_gradient(const Matrix& p, const Matrix& q_sqrt) {
  const Matrix m = hermitian_part(q_sqrt * p * q_sqrt);
  return hermitian_part(0.5 * q_sqrt * psd_inv_sqrt(m, 1e-14) * q_sqrt);
}

inline double safe_fidelity(const Matrix& a, const Matrix& b) {
  return std::min(1.0, trace_norm(psd_sqrt(a) * psd_sqrt(b)));
}

/// One-sided ascent on x for the objective F(phi(x), fixed). Returns the new
/// objective value; `eta` carries the step size between calls.
inline double ascend_one_side(Matrix& x, const Channel& phi, const Matrix& fixed, double f, double& eta,
                              std::size_t steps, double tol) {
  const Matrix fixed_sqrt = psd_sqrt(fixed);
  for (std::size_t s = 0; s < steps; ++s) {
    const Matrix g = hermitian_part(phi.adjoint_apply(fidelity_gradient(phi.apply(x), fixed_sqrt)));
    bool accepted = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Matrix cand = project_to_density(x + eta * g);
      const double fc = safe_fidelity(phi.apply(cand), fixed);
      if (fc > f) {
        const double gain = fc - f;
        x = std::move(cand);
        f = fc;
        eta = std::min(eta * 2.0, 1e8);
        accepted = true;
        if (gain < tol * 1e-3) return f;
        break;
      }
      eta *= 0.5;
      if (eta < 1e-14) break;
    }
    if (!accepted) {
      eta = std::max(eta, 1e-6);
      return f;
    }
  }
  return f;
}

/// Frank-Wolfe gap of the jointly concave objective at (rho, xi): an upper
/// bound on how far the value is below the maximum.
inline double frank_wolfe_gap(const Channel& phi, const Channel& psi, const Matrix& rho, const Matrix& xi) {
  const Matrix p = phi.apply(rho), q = psi.apply(xi);
  const Matrix gr = hermitian_part(phi.adjoint_apply(fidelity_gradient(p, psd_sqrt(q))));
  const Matrix gx = hermitian_part(psi.adjoint_apply(fidelity_gradient(q, psd_sqrt(p))));
  return (max_eigenvalue(gr) - (rho * gr).trace().real()) + (max_eigenvalue(gx) - (xi * gx).trace().real());
}

}  // namespace detail

namespace detail {

/// sqrt(lmax(Phi^*(Y)) lmax(Psi^*(Y^-1))); infinite when Y is unusable.
inline double dual_value(const Channel& phi, const Channel& psi, const Matrix& y, const Matrix& yinv) {
  const double a = max_eigenvalue(phi.adjoint_apply(y)), b = max_eigenvalue(psi.adjoint_apply(yinv));
  if (!(a > 0) || !(b > 0) || !std::isfinite(a * b)) return std::numeric_limits<double>::infinity();
  return std::sqrt(a * b);
}

/// t log tr exp(A / t) and its gradient exp(A / t) / tr(...).
inline std::pair<double, Matrix> soft_max_eigenvalue(const Matrix& a, double t) {
  if (!a.allFinite()) return {std::numeric_limits<double>::infinity(), Matrix()};
  const auto e = eig_hermitian(a);
  const double top = e.values.maxCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) z += std::exp((e.values(i) - top) / t);
  const Matrix g = spectral_map(e, [&](double x) { return std::exp((x - top) / t) / z; });
  return {top + t * std::log(z), g};
}

/// Lowers the dual bound by descent on the convex function
/// Y -> (lmax(Phi^*(Y)) + lmax(Psi^*(Y^-1))) / 2, with lmax smoothed by a
/// soft maximum whose temperature is lowered in stages. Steps are taken in
/// the metric of Y so iterates stay positive definite. Returns the best exact
/// bound seen; every value returned is a valid upper bound.
inline double refine_dual(const Channel& phi, const Channel& psi, Matrix y, std::size_t steps_per_stage) {
  auto balance = [&](Matrix& yy) {
    // Scaling Y by s multiplies the two terms by s and 1/s.
    const Matrix yi = yy.inverse();
    const double a = max_eigenvalue(phi.adjoint_apply(yy)), b = max_eigenvalue(psi.adjoint_apply(yi));
    if (a > 0 && b > 0) yy *= std::sqrt(b / a);
  };
  balance(y);
  Matrix yinv = hermitian_part(Matrix(y.inverse()));
  double best = dual_value(phi, psi, y, yinv);
  auto smooth = [&](const Matrix& yy, const Matrix& yi, double t, Matrix* grad) {
    auto [va, ga] = soft_max_eigenvalue(phi.adjoint_apply(yy), t);
    auto [vb, gb] = soft_max_eigenvalue(psi.adjoint_apply(yi), t);
    if (!std::isfinite(va + vb)) return std::numeric_limits<double>::infinity();
    if (grad) *grad = hermitian_part(0.5 * (phi.apply(ga) - yi * psi.apply(gb) * yi));
    return 0.5 * (va + vb);
  };
  for (double t : {1e-2, 1e-3, 1e-4, 1e-5}) {
    double eta = 1.0;
    Matrix g;
    double f = smooth(y, yinv, t, &g);
    for (std::size_t s = 0; s < steps_per_stage; ++s) {
      const Matrix ys = psd_sqrt(y), ysi = ys.inverse();
      const Matrix dir = hermitian_part(ys * g * ys);
      if (!dir.allFinite() || !ysi.allFinite()) break;
      bool moved = false;
      while (eta > 1e-12) {
        const auto e = eig_hermitian(dir);
        const Matrix step = spectral_map(e, [&](double x) { return std::exp(-eta * x); });
        const Matrix istep = spectral_map(e, [&](double x) { return std::exp(eta * x); });
        const Matrix cand = hermitian_part(ys * step * ys);
        const Matrix cinv = hermitian_part(ysi * istep * ysi);
        Matrix gc;
        const double fc = smooth(cand, cinv, t, &gc);
        if (std::isfinite(fc) && fc < f) {
          y = cand;
          yinv = cinv;
          f = fc;
          g = std::move(gc);
          eta *= 2.0;
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
      best = std::min(best, dual_value(phi, psi, y, yinv));
    }
  }
  return best;
}

}  // namespace detail

/// Upper bound on max F(Phi(rho), Psi(xi)) built from the output pair
/// (p, q): Y starts at the regularized matrix geometric mean of p^-1 and q and
/// is then refined. Valid for every input pair whatever (p, q) are.
inline double fidelity_upper_bound(const Channel& phi, const Channel& psi, const Matrix& p, const Matrix& q,
                                   std::size_t refine_steps = 200) {
  double best = std::numeric_limits<double>::infinity();
  Matrix best_y;
  const auto d = p.rows();
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
    const Matrix pe = hermitian_part(p) + eps * Matrix::Identity(d, d);
    const Matrix qe = hermitian_part(q) + eps * Matrix::Identity(d, d);
    const Matrix ps = psd_sqrt(pe), pis = psd_inv_sqrt(pe, 0.0);
    const auto core = eig_hermitian(ps * qe * ps);
    const Matrix root = spectral_map(core, [](double x) { return std::sqrt(std::max(x, 0.0)); });
    const Matrix iroot = spectral_map(core, [](double x) { return 1.0 / std::sqrt(std::max(x, 1e-300)); });
    const Matrix y = hermitian_part(pis * root * pis);
    const double v = detail::dual_value(phi, psi, y, hermitian_part(ps * iroot * ps));
    if (v < best) {
      best = v;
      best_y = y;
    }
  }
  if (refine_steps > 0 && best_y.size() > 0) best = std::min(best, detail::refine_dual(phi, psi, best_y, refine_steps));
  return std::min(best, 1.0);
}

inline FidelityResult max_output_fidelity(const Channel& phi, const Channel& psi, const OptimizerConfig& cfg = {}) {
  cfg.check();
  if (phi.din() != psi.din() || phi.dout() != psi.dout()) throw Error("max_output_fidelity: dimension mismatch");
  const std::size_t d = phi.din();
  const double tol = cfg.convergence_tolerance;
  FidelityResult best;
  best.value = -1.0;
  for (std::size_t r = 0; r < cfg.restart_count; ++r) {
    Matrix rho, xi;
    if (r == 0) {
      rho = xi = Matrix::Identity(d, d) / static_cast<double>(d);
    } else {
      Rng rng(mix_seed(cfg.seed, r));
      rho = random_density_matrix(d, rng);
      xi = random_density_matrix(d, rng);
    }
    double f = detail::safe_fidelity(phi.apply(rho), psi.apply(xi));
    double eta_r = 1.0, eta_x = 1.0;
    std::vector<double> trace{f};
    bool converged = false;
    std::size_t it = 0, quiet = 0;
    for (; it < cfg.max_iterations && !converged; ++it) {
      const double prev = f;
      f = detail::ascend_one_side(rho, phi, psi.apply(xi), f, eta_r, cfg.inner_iterations, tol);
      f = detail::ascend_one_side(xi, psi, phi.apply(rho), f, eta_x, cfg.inner_iterations, tol);
      trace.push_back(f);
      quiet = (f - prev < tol) ? quiet + 1 : 0;
      if (f >= 1.0 - tol || detail::frank_wolfe_gap(phi, psi, rho, xi) < tol) converged = true;
      else if (quiet >= 3) converged = true;
    }
    if (f > best.value) {
      best.value = f;
      best.rho = rho;
      best.xi = xi;
      best.converged = converged;
      best.iterations = it;
      best.best_restart = r;
      best.trace = std::move(trace);
    }
    best.restart_values.push_back(f);
  }
  best.upper_bound = fidelity_upper_bound(phi, psi, phi.apply(best.rho), psi.apply(best.xi));
  best.upper_bound = std::max(best.upper_bound, best.value);
  return best;
}

inline FidelityResult max_output_fidelity(const ChannelPair& pair, const OptimizerConfig& cfg = {}) {
  auto [phi, psi] = pair.channels();
  return max_output_fidelity(phi, psi, cfg);
}

struct DiamondResult {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  Vector input;  // maximizing pure state on system (x) reference, system least significant
  std::vector<double> restart_values;
};

/// See-saw over pure inputs on H (x) R with dim R = dim H. Every reported
/// value is attained by `input`, so it is a lower bound on the diamond
/// distance.
inline DiamondResult diamond_norm_distance(const Channel& phi, const Channel& psi, const OptimizerConfig& cfg = {}) {
  cfg.check();
  const Channel delta = phi - psi;
  const std::size_t d = delta.din(), dd = d * d;
  DiamondResult best;
  best.value = -1.0;
  for (std::size_t r = 0; r < cfg.restart_count; ++r) {
    Vector v;
    if (r == 0) {
      v = Vector::Zero(dd);
      for (std::size_t i = 0; i < d; ++i) v(i + d * i) = 1.0 / std::sqrt(static_cast<double>(d));
    } else {
      Rng rng(mix_seed(cfg.seed ^ 0xD1A3ull, r));
      v = random_unit_vector(dd, rng);
    }
    double val = -1.0;
    bool converged = false;
    std::size_t it = 0;
    for (; it < cfg.max_iterations; ++it) {
      const auto e = eig_hermitian(delta.apply_with_reference(v * v.adjoint(), d));
      const double now = e.values.cwiseAbs().sum();
      if (now - val < cfg.convergence_tolerance && it > 0) {
        val = std::max(val, now);
        converged = true;
        break;
      }
      val = now;
      const Matrix u = spectral_map(e, [](double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
      const Vector next = top_eigenvector(delta.adjoint_with_reference(u, d));
      v = next;
    }
    // Report the value of the state actually held.
    const double held = eig_hermitian(delta.apply_with_reference(v * v.adjoint(), d)).values.cwiseAbs().sum();
    best.restart_values.push_back(held);
    if (held > best.value) {
      best.value = held;
      best.converged = converged;
      best.iterations = it;
      best.input = v;
    }
  }
  return best;
}

inline DiamondResult diamond_norm_distance(const ChannelPair& pair, const OptimizerConfig& cfg = {}) {
  auto [phi, psi] = pair.channels();
  return diamond_norm_distance(phi, psi, cfg);
}

}  // namespace logdepth
