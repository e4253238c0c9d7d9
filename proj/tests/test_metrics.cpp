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

#include "oracles.hpp"

using namespace logdepth;
using namespace logdepth::gates;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

Matrix ket0() { return oracle::projector(PureState::basis(1, 0).amps); }
Matrix ket1() { return oracle::projector(PureState::basis(1, 1).amps); }
Matrix plus() {
  Vector v(2);
  v << kR, kR;
  return oracle::projector(v);
}

/// tr sqrt(sqrt(X) Y sqrt(X)) through Eigen's own operator square root.
double fidelity_oracle(const Matrix& x, const Matrix& y) {
  // Clamped square root: operatorSqrt gives NaN on round-off negatives.
  Eigen::SelfAdjointEigenSolver<Matrix> ex(x);
  const Matrix sx = ex.eigenvectors() * ex.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                    ex.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> inner(sx * y * sx);
  double f = 0.0;
  for (Eigen::Index i = 0; i < inner.eigenvalues().size(); ++i) {
    const double ev = inner.eigenvalues()(i);
    if (ev > 1e-13) f += std::sqrt(ev);  // numerical rank
  }
  return f;
}

// Channels with a discarded input and a fixed prepared output.
Circuit prepares(std::vector<Gate> prep) {
  prep.insert(prep.begin(), I(0));
  return make_circuit(2, std::move(prep), {1}, {0});
}

TEST(Fidelity, Examples) {
  const Matrix rho = random_density(2, 3).m;
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(ket0(), plus()), kR, 1e-12);
  EXPECT_NEAR(fidelity(Matrix::Identity(2, 2) / 2.0, ket0()), kR, 1e-12);
}

TEST(Fidelity, MatchesOraclesAndIsSymmetric) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const std::size_t d = 2 + rng.below(6);
    const Matrix x = random_density_matrix(d, rng, 1 + rng.below(d)), y = random_density_matrix(d, rng);
    const double f = fidelity(x, y);
    EXPECT_NEAR(f, fidelity_oracle(x, y), 1e-8);
    EXPECT_NEAR(f, fidelity(y, x), 1e-10);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-10);
    const Vector psi = random_unit_vector(d, rng);
    EXPECT_NEAR(fidelity(x, oracle::projector(psi)), std::sqrt((psi.adjoint() * x * psi)(0).real()), 1e-8);
  }
}

TEST(Fidelity, Errors) {
  EXPECT_THROW(fidelity(ket0(), Matrix::Identity(4, 4)), Error);
  EXPECT_THROW(fidelity(ket0() - ket1(), ket0()), Error);
}

TEST(Fidelity, MonotoneUnderPartialTrace) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DensityMatrix a = random_density(3, 2 * s), b = random_density(3, 2 * s + 1);
    const std::vector<Qubit> keep{0, 2};
    EXPECT_LE(fidelity(a, b), fidelity(partial_trace(a, keep), partial_trace(b, keep)) + 1e-9);
  }
}

TEST(TraceNorm, Examples) {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  EXPECT_NEAR(trace_norm(z), 2.0, 1e-14);
  EXPECT_NEAR(trace_norm(ket0() - ket1()), 2.0, 1e-14);
  EXPECT_NEAR(trace_norm(ket0() - plus()), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(oracle::hermitian_trace_norm(ket0() - plus()), std::sqrt(2.0), 1e-14);
}

TEST(TraceNorm, TriangleUnitaryInvarianceAndMonotonicity) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(100 + s);
    const Matrix a = random_density(3, 3 * s).m, b = random_density(3, 3 * s + 1).m, c = random_density(3, 3 * s + 2).m;
    EXPECT_LE(trace_norm(a - c), trace_norm(a - b) + trace_norm(b - c) + 1e-12);
    EXPECT_NEAR(trace_norm(a - b), oracle::hermitian_trace_norm(a - b), 1e-10);
    const Circuit u = random_circuit(3, 3, 3, 10, rng);
    const Matrix m = full_unitary(u);
    EXPECT_NEAR(trace_norm(m * (a - b) * m.adjoint()), trace_norm(a - b), 1e-10);
    const std::vector<Qubit> keep{1};
    EXPECT_LE(trace_norm(oracle::partial_trace(a - b, 3, keep)), trace_norm(a - b) + 1e-9);
  }
}

TEST(Fvdg, Examples) {
  const Matrix rho = random_density(2, 8).m;
  const auto same = fvdg_gap(rho, rho);
  EXPECT_NEAR(same.lower, 0.0, 1e-7);
  EXPECT_NEAR(same.upper, 0.0, 1e-4);  // sqrt amplifies rounding in 1 - F^2
  const auto orth = fvdg_gap(ket0(), ket1());
  EXPECT_NEAR(orth.lower, 0.0, 1e-12);
  EXPECT_NEAR(orth.upper, 0.0, 1e-12);
}

TEST(Fvdg, RandomPairsHaveNonNegativeSlack) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    Rng rng(mix_seed(31, s));
    const std::size_t d = 2 + rng.below(3);
    const Matrix a = random_density_matrix(d, rng, 1 + rng.below(d)), b = random_density_matrix(d, rng, 1 + rng.below(d));
    const auto g = fvdg_gap(a, b);
    EXPECT_GE(g.lower, -1e-9);
    EXPECT_GE(g.upper, -1e-9);
  }
}

TEST(Fvdg, SquareRootOfOneMinusFIsNotAnUpperBound) {
  // Pure states saturate D = sqrt(1 - F^2), which exceeds sqrt(1 - F) for
  // 0 < F < 1. The upper inequality needs F^2.
  const double f = fidelity(ket0(), plus()), d = 0.5 * trace_norm(ket0() - plus());
  EXPECT_NEAR(d, std::sqrt(1.0 - f * f), 1e-12);
  EXPECT_GT(d, std::sqrt(1.0 - f) + 0.1);
}

TEST(SwapAntisym, Examples) {
  const PureState psi = random_pure(1, 4);
  EXPECT_NEAR(swap_antisym_prob(DensityMatrix::from(PureState{2, kron(psi.amps, psi.amps)})), 0.0, 1e-14);
  EXPECT_NEAR(swap_antisym_prob(DensityMatrix::from(PureState::basis(2, 0b10))), 0.5, 1e-14);
  Vector singlet = Vector::Zero(4), phi = Vector::Zero(4);
  singlet(0b01) = kR;
  singlet(0b10) = -kR;
  phi(0) = phi(3) = kR;
  EXPECT_NEAR(swap_antisym_prob(DensityMatrix{2, oracle::projector(singlet)}), 1.0, 1e-14);
  EXPECT_NEAR(swap_antisym_prob(DensityMatrix{2, oracle::projector(phi)}), 0.0, 1e-14);
  EXPECT_THROW(swap_antisym_prob(random_density(3, 0)), Error);
}

TEST(SwapAntisym, MatchesProjectorAndBound) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 1 + s % 2;
    const DensityMatrix rho = random_density(2 * n, 200 + s);
    const Matrix w = swap_operator_matrix(n);
    const Matrix anti = 0.5 * (Matrix::Identity(w.rows(), w.cols()) - w);
    EXPECT_NEAR(swap_antisym_prob(rho), (anti * rho.m).trace().real(), 1e-12);
    std::vector<Qubit> a(n), b(n);
    std::iota(a.begin(), a.end(), Qubit{0});
    std::iota(b.begin(), b.end(), static_cast<Qubit>(n));
    const double f = fidelity(partial_trace(rho, a), partial_trace(rho, b));
    EXPECT_GE(swap_antisym_prob(rho), 0.5 - 0.5 * f - 1e-9);
  }
}

TEST(ChannelRep, MatchesCircuitOracleAndAdjoint) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(32, s));
    const Circuit c = random_circuit(3, 2, 1 + rng.below(3), 6, rng);
    const Channel ch = Channel::from_circuit(c);
    const Matrix rho = random_density(2, s).m;
    EXPECT_LT(oracle::max_abs(ch.apply(rho) - oracle::channel(c, rho)), 1e-12);
    EXPECT_LT(ch.trace_preservation_error(), 1e-12);
    Matrix y = random_density_matrix(c.output_dim(), rng) - random_density_matrix(c.output_dim(), rng);
    const cplx lhs = (y.adjoint() * ch.apply(rho)).trace(), rhs = (ch.adjoint_apply(y).adjoint() * rho).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(MaxOutputFidelity, Examples) {
  Rng rng(5);
  const Circuit q = random_circuit(3, 1, 1, 8, rng);
  EXPECT_NEAR(max_output_fidelity(ChannelPair(q, q)).value, 1.0, 1e-6);
  const auto orth = max_output_fidelity(ChannelPair(prepares({}), prepares({X(1)})));
  EXPECT_NEAR(orth.value, 0.0, 1e-9);
  EXPECT_LT(orth.upper_bound, 1e-4);
  // Identity against "always |0>": feed |0> to the identity.
  const Circuit id = make_circuit(1, {I(0)});
  const Circuit zero = prepares({});
  const auto r = max_output_fidelity(ChannelPair(id, zero));
  EXPECT_NEAR(r.value, 1.0, 1e-6);
  EXPECT_NEAR(r.rho(0, 0).real(), 1.0, 1e-3);
}

TEST(MaxOutputFidelity, ClosedFormForReplacementChannels) {
  // |0> against HTH|0>: overlap cos(pi/8).
  const auto r = max_output_fidelity(ChannelPair(prepares({}), prepares({H(1), T(1), H(1)})));
  EXPECT_NEAR(r.value, std::cos(M_PI / 8), 1e-7);
  EXPECT_LE(r.value, r.upper_bound);
  EXPECT_NEAR(r.upper_bound, std::cos(M_PI / 8), 1e-5);
}

TEST(MaxOutputFidelity, UpperBoundHoldsForEveryInput) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(mix_seed(33, s));
    const Circuit a = random_circuit(3, 1, 1, 6, rng), b = random_circuit(3, 1, 1, 6, rng);
    const auto r = max_output_fidelity(ChannelPair(a, b));
    EXPECT_LE(r.value, r.upper_bound + 1e-12);
    for (int t = 0; t < 20; ++t) {
      const Matrix x = random_density_matrix(2, rng), y = random_density_matrix(2, rng);
      const double f = fidelity(oracle::channel(a, x), oracle::channel(b, y));
      EXPECT_LE(f, r.value + 1e-6);
    }
  }
}

TEST(MaxOutputFidelity, AscentIsMonotone) {
  Rng rng(77);
  const auto [p, q] = suites::random_channel_pair(rng);
  OptimizerConfig cfg;
  cfg.restart_count = 3;
  const auto r = max_output_fidelity(ChannelPair(p, q), cfg);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.restart_values.size(), 3u);
  EXPECT_TRUE(r.converged);
}

TEST(MaxOutputFidelity, Multiplicative) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    Rng rng(mix_seed(34, s));
    const auto k1 = suites::random_kraus(2, 2, 2, rng), k2 = suites::random_kraus(2, 2, 2, rng);
    const auto k3 = suites::random_kraus(2, 2, 2, rng), k4 = suites::random_kraus(2, 2, 2, rng);
    const double f12 = max_output_fidelity(Channel::from_kraus(k1), Channel::from_kraus(k2)).value;
    const double f34 = max_output_fidelity(Channel::from_kraus(k3), Channel::from_kraus(k4)).value;
    const double f = max_output_fidelity(Channel::from_kraus(suites::kraus_product(k1, k3)),
                                         Channel::from_kraus(suites::kraus_product(k2, k4)))
                         .value;
    EXPECT_NEAR(f, f12 * f34, 1e-4);
  }
}

TEST(MaxOutputFidelity, ConfigChecks) {
  OptimizerConfig cfg;
  cfg.restart_count = 0;
  EXPECT_THROW(max_output_fidelity(ChannelPair(prepares({}), prepares({})), cfg), Error);
  cfg = {};
  cfg.convergence_tolerance = 0;
  EXPECT_THROW(max_output_fidelity(ChannelPair(prepares({}), prepares({})), cfg), Error);
  EXPECT_THROW(ChannelPair(make_circuit(1, {H(0)}), make_circuit(2, {H(0)})), Error);
}

TEST(Diamond, Examples) {
  const Circuit id = make_circuit(1, {I(0)}), x = make_circuit(1, {X(0)});
  EXPECT_NEAR(diamond_norm_distance(ChannelPair(id, id)).value, 0.0, 1e-12);
  const auto r = diamond_norm_distance(ChannelPair(id, x));
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  // The reported input attains the value.
  const Channel d = Channel::from_circuit(id) - Channel::from_circuit(x);
  EXPECT_NEAR(trace_norm(d.apply_with_reference(oracle::projector(r.input), 2)), r.value, 1e-9);
}

TEST(Diamond, AtMostTwoAndAtLeastProductInputs) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(mix_seed(35, s));
    const Circuit a = random_circuit(3, 1, 1, 6, rng), b = random_circuit(3, 1, 1, 6, rng);
    const double v = diamond_norm_distance(ChannelPair(a, b)).value;
    EXPECT_LE(v, 2.0 + 1e-9);
    for (int t = 0; t < 10; ++t) {
      const Matrix rho = random_density_matrix(2, rng);
      EXPECT_GE(v, trace_norm(oracle::channel(a, rho) - oracle::channel(b, rho)) - 1e-7);
    }
  }
}

}  // namespace
