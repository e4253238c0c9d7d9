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

std::vector<Qubit> range(Qubit lo, Qubit hi) {
  std::vector<Qubit> v(hi - lo);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

TEST(SwapOperator, SingleSwap) {
  const Circuit c = swap_operator_gadget(1);
  ASSERT_EQ(c.gate_count(), 1u);
  EXPECT_EQ(c.gates()[0].kind, GateKind::SWAP2);
  EXPECT_EQ(depth(c).layer_count, 1u);
}

TEST(SwapOperator, PermutesBasisStates) {
  const Matrix u = full_unitary(swap_operator_gadget(2));
  for (std::uint64_t x = 0; x < 4; ++x) {
    for (std::uint64_t y = 0; y < 4; ++y) {
      EXPECT_EQ(u(static_cast<Eigen::Index>(x + 4 * y), static_cast<Eigen::Index>(y + 4 * x)), cplx(1.0));
    }
  }
}

TEST(SwapOperator, EqualsPermutationMatrixExactly) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const Matrix u = full_unitary(swap_operator_gadget(n)), w = swap_operator_matrix(n);
    EXPECT_EQ(u, w);
    EXPECT_EQ(oracle::unitary(swap_operator_gadget(n)), w);
    EXPECT_EQ(Matrix(w * w), Matrix(Matrix::Identity(w.rows(), w.cols())));
    EXPECT_EQ(Matrix(w.adjoint()), w);
  }
}

double result_one(const Circuit& g, const Matrix& rho, std::size_t n) {
  const Matrix out = oracle::channel(g, rho);
  // Output order is A, B, result: result is the top bit.
  const std::uint64_t half = std::uint64_t{1} << (2 * n);
  double p = 0.0;
  for (std::uint64_t i = half; i < 2 * half; ++i) p += out(i, i).real();
  return p;
}

TEST(SwapTest, Examples) {
  const Circuit g = swap_test_gadget(1);
  const PureState psi = random_pure(1, 2);
  EXPECT_NEAR(result_one(g, oracle::projector(kron(psi.amps, psi.amps)), 1), 0.0, 1e-14);
  EXPECT_NEAR(result_one(g, oracle::projector(PureState::basis(2, 0b10).amps), 1), 0.5, 1e-14);
}

TEST(SwapTest, MatchesProjectorOnRandomInputs) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const std::size_t n = 1 + s % 3;
    for (bool fan : {false, true}) {
      const Circuit g = swap_test_gadget(n, fan);
      const DensityMatrix rho = random_density(2 * n, 300 + s);
      EXPECT_NEAR(result_one(g, rho.m, n), swap_antisym_prob(rho), 1e-10);
    }
  }
}

TEST(SwapTest, CopiesAreReturnedToZero) {
  const Circuit g = swap_test_gadget(3);
  const PureState out = apply_circuit_pure(g, random_pure(6, 1));
  const std::vector<Qubit> copies = range(7, 9);
  EXPECT_NEAR(probability_all_zero(out, copies), 1.0, 1e-12);
}

Circuit layer_of_eight() {
  std::vector<Gate> gs;
  for (Qubit q = 0; q < 8; ++q) gs.push_back(q % 3 == 0 ? H(q) : (q % 3 == 1 ? T(q) : X(q)));
  return make_circuit(8, gs);
}

TEST(LowerControlled, DepthWithAndWithoutFanout) {
  const Circuit target = layer_of_eight();
  EXPECT_LE(depth(lower_controlled(target, 8, false), CostModel{false}).layer_count, 2u * 3u + 1u);
  EXPECT_EQ(depth(lower_controlled(target, 8, true), CostModel{true}).layer_count, 3u);
  // Copies used: one per gate of the layer beyond the control itself.
  EXPECT_EQ(lower_controlled(target, 8).width(), 8u + 1u + 7u);
}

TEST(LowerControlled, ActsAsControlledUnitary) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(41, s));
    const Circuit target = random_circuit(3, 3, 3, 8, rng);
    const Matrix ut = oracle::unitary(target);
    for (bool fan : {false, true}) {
      const Circuit lc = lower_controlled(target, 3, fan);
      const PureState psi = random_pure(3, s);
      for (int ctl = 0; ctl < 2; ++ctl) {
        const PureState in{4, kron(PureState::basis(1, ctl).amps, psi.amps)};
        const Matrix out = apply_circuit_density(lc, DensityMatrix::from(in)).m;
        const Vector want = ctl ? Vector(ut * psi.amps) : psi.amps;
        EXPECT_LT(oracle::max_abs(out - oracle::projector(kron(PureState::basis(1, ctl).amps, want))), 1e-11);
      }
    }
  }
}

TEST(LowerControlled, ControlCollision) {
  EXPECT_THROW(lower_controlled(make_circuit(3, {H(0)}), 2), Error);
}

CIInstance h_then_x() {
  const Circuit q = make_circuit(1, {H(0), X(0)});
  return {q, q, 1.0, 0.5};
}

TEST(Construction, HThenXLayout) {
  const auto built = build_log_depth_ci(h_then_x());
  const auto& m = built.manifest;
  EXPECT_EQ(m.n, 2u);
  EXPECT_EQ(m.test_count(), 2u);
  EXPECT_EQ(m.dummy_wires.size(), 2u);
  EXPECT_EQ(built.c1.outputs().size(), 5u);
  EXPECT_EQ(built.c2.outputs().size(), 5u);
  EXPECT_TRUE(validate(built.c1).ok()) << validate(built.c1).summary();
  EXPECT_TRUE(validate(built.c2).ok()) << validate(built.c2).summary();
  // C1 lists its tests where C2 lists its dummies.
  EXPECT_EQ(std::vector<Qubit>(built.c1.outputs().begin() + 1, built.c1.outputs().begin() + 3), m.test_wires);
  EXPECT_EQ(std::vector<Qubit>(built.c2.outputs().begin() + 1, built.c2.outputs().begin() + 3), m.dummy_wires);
}

TEST(Construction, ManifestRegistersPartitionOutputs) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(mix_seed(42, s));
    const std::size_t w = 1 + rng.below(3), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const Circuit q1 = random_circuit(w, h, k, 1 + rng.below(6), rng);
    const Circuit q2 = random_circuit(w, h, k, 1 + rng.below(6), rng);
    const auto built = build_log_depth_ci({q1, q2, 1.0, 0.5});
    const auto& m = built.manifest;
    EXPECT_EQ(m.test_count(), 2 * (m.n - 1));
    EXPECT_EQ(m.dummy_wires.size(), 2 * (m.n - 1));
    std::multiset<Qubit> parts(m.k_wires.begin(), m.k_wires.end());
    parts.insert(m.test_wires.begin(), m.test_wires.end());
    parts.insert(m.dummy_wires.begin(), m.dummy_wires.end());
    // The manifest's K wires are C1's; C2 maps its own outputs.
    EXPECT_EQ(parts, std::multiset<Qubit>(built.c1.outputs().begin(), built.c1.outputs().end()));
    EXPECT_EQ(built.c2.outputs().size(), built.c1.outputs().size());
    for (const Circuit* c : {&built.c1, &built.c2}) {
      EXPECT_TRUE(validate(*c).ok()) << validate(*c).summary();
      EXPECT_TRUE(c->is_normalized());
    }
    EXPECT_EQ(built.c1.inputs(), built.c2.inputs());
  }
}

TEST(Construction, BoundarySelectionSize) {
  ReductionOptions opts;
  opts.boundary_selection = {TestSelection::FirstOnly};
  EXPECT_NO_THROW(build_log_depth_ci(h_then_x(), opts));
  opts.boundary_selection.push_back(TestSelection::SecondOnly);
  EXPECT_THROW(build_log_depth_ci(h_then_x(), opts), Error);
}

TEST(Construction, SingleGateIsDegenerate) {
  const Circuit q = make_circuit(1, {H(0)});
  const auto built = build_log_depth_ci({q, q, 1.0, 0.5});
  EXPECT_TRUE(built.manifest.degenerate);
  EXPECT_EQ(built.manifest.test_count(), 0u);
  EXPECT_EQ(built.c1.gate_count(), 1u);
}

TEST(Construction, RejectsBadInstances) {
  const Circuit a = make_circuit(1, {H(0)}), b = make_circuit(2, {H(0)});
  EXPECT_THROW(build_log_depth_ci({a, b, 1.0, 0.5}), Error);
  EXPECT_THROW(build_log_depth_ci({a, a, 0.5, 0.7}), Error);
  ReductionOptions opts;
  opts.repetitions = 0;
  EXPECT_THROW(build_log_depth_ci({a, a, 1.0, 0.5}, opts), Error);
}

TEST(Construction, PaddingUsesNoOps) {
  const Circuit a = make_circuit(1, {H(0)}), b = make_circuit(2, {H(0), CNOT(0, 1), T(1)}, {1}, {1});
  const CIInstance p = pad({a, b, 1.0, 0.5});
  EXPECT_EQ(p.q1.gate_count(), 3u);
  EXPECT_EQ(p.q1.width(), 2u);
  EXPECT_EQ(p.q1.gates()[1].kind, GateKind::I);
  const DensityMatrix rho = random_density(1, 3);
  EXPECT_LT(oracle::max_abs(apply_circuit_density(p.q1, rho).m - apply_circuit_density(a, rho).m), 1e-14);
}

TEST(Construction, DepthWithinRecordedBound) {
  for (std::size_t n : {2, 4, 8, 16, 32, 64}) {
    Rng rng(mix_seed(43, n));
    const std::size_t w = 1 + rng.below(4), h = 1 + rng.below(w);
    const Circuit q1 = random_circuit(w, h, 1, n, rng), q2 = random_circuit(w, h, 1, n, rng);
    for (bool fan : {false, true}) {
      ReductionOptions opts;
      opts.use_fanout = fan;
      const auto built = build_log_depth_ci({q1, q2, 1.0, 0.5}, opts);
      const auto& db = built.manifest.depth_bound;
      EXPECT_LE(depth(built.c1, CostModel{fan}).layer_count, db.value());
      EXPECT_LE(depth(built.c2, CostModel{fan}).layer_count, db.value());
      if (fan) {
        ASSERT_TRUE(db.d.has_value());
        EXPECT_EQ(*db.d, 16u);
      }
    }
  }
}

TEST(Witness, SingleGateIsJustPsi) {
  const PureState psi = random_pure(1, 3);
  const WitnessState ws = witness_input(make_circuit(1, {H(0)}), psi);
  ASSERT_EQ(ws.factors.size(), 1u);
  EXPECT_EQ(ws.state().amps, psi.amps);
}

TEST(Witness, HThenXPassesAndOutputsPlus) {
  const auto inst = h_then_x();
  const auto built = build_log_depth_ci(inst);
  const WitnessState ws = witness_input(inst.q1, PureState::basis(1, 0));
  // Blocks: |0> then H|0>.
  ASSERT_EQ(ws.factors.size(), 3u);
  EXPECT_NEAR(std::abs(ws.factors[1].state.amps(0) - kR), 0.0, 1e-15);
  const Matrix out = apply_circuit_density(built.c1, DensityMatrix::from(ws.state())).m;
  const DensityMatrix o{5, out};
  Vector plus(2);
  plus << kR, kR;
  EXPECT_LT(oracle::max_abs(partial_trace(o, {0}).m - oracle::projector(plus)), 1e-12);
  EXPECT_NEAR(probability_all_zero(o, std::vector<Qubit>{1, 2, 3, 4}), 1.0, 1e-12);
}

TEST(Witness, RandomInstancesAreComplete) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(mix_seed(44, s));
    const std::size_t w = 1 + rng.below(3), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const Circuit q = random_circuit(w, h, k, 1 + rng.below(3), rng);
    const PureState psi = random_pure(h, s);
    const auto built = build_log_depth_ci({q, q, 1.0, 0.5});
    const WitnessState ws = witness_input(pad({q, q, 1.0, 0.5}).q1, psi);
    FactoredState st(built.c1.width(), ws.wire_factors(built.c1));
    std::vector<std::vector<Qubit>> hints;
    for (const auto& reg : built.c1.layout().registers) hints.push_back(reg.qubits);
    st.run(built.c1, hints);
    const Matrix direct = oracle::channel(q, oracle::projector(psi.amps));
    EXPECT_GE(fidelity(st.reduced_density(built.manifest.k_wires), direct), 1.0 - 1e-9);
    if (built.manifest.test_count() > 0) {
      EXPECT_GE(st.probability_all_zero(built.manifest.test_wires), 1.0 - 1e-9);
    }
  }
}

TEST(Witness, DimensionMismatch) {
  EXPECT_THROW(witness_input(make_circuit(2, {H(0), H(1)}), random_pure(1, 0)), Error);
}

TEST(Amplify, Basics) {
  const auto built = build_log_depth_ci(h_then_x());
  const auto [a1, b1] = amplify(built.c1, built.c2, 1);
  EXPECT_EQ(a1, built.c1);
  EXPECT_EQ(b1, built.c2);
  for (std::size_t r : {2, 4}) {
    const auto [a, b] = amplify(built.c1, built.c2, r);
    EXPECT_EQ(depth(a).layer_count, depth(built.c1).layer_count);
    EXPECT_EQ(a.width(), r * built.c1.width());
    EXPECT_EQ(b.outputs().size(), r * built.c2.outputs().size());
  }
  EXPECT_THROW(amplify(built.c1, built.c2, 0), Error);
  ReductionOptions opts;
  opts.repetitions = 3;
  EXPECT_EQ(build_log_depth_ci(h_then_x(), opts).c1.width(), 3 * built.c1.width());
}

TEST(Dispatch, SelectsByControl) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(45, s));
    const std::size_t w = 2 + rng.below(2);
    const Circuit q1 = random_circuit(w, 1, 1, 5, rng), q2 = random_circuit(w, 1, 1, 5, rng);
    for (bool fan : {false, true}) {
      const auto d = build_controlled_dispatch({q1, q2, 2.0, 0.0}, fan);
      const DensityMatrix rho = random_density(1, s);
      for (int ctl = 0; ctl < 2; ++ctl) {
        const Matrix c = oracle::projector(PureState::basis(1, ctl).amps);
        const Matrix out = apply_circuit_density(d.circuit, {2, kron(c, rho.m)}).m;
        const Matrix want = kron(c, oracle::channel(ctl ? q2 : q1, rho.m));
        EXPECT_LT(oracle::max_abs(out - want), 1e-11);
      }
      EXPECT_LE(depth(d.circuit, CostModel{fan}).layer_count, d.bound());
    }
  }
}

TEST(Dispatch, IdenticalCircuitsIgnoreControl) {
  Rng rng(46);
  const Circuit q = random_circuit(2, 1, 1, 4, rng);
  const auto d = build_controlled_dispatch({q, q, 2.0, 0.0});
  const DensityMatrix rho = random_density(1, 1);
  const Matrix mixed_ctl = Matrix::Identity(2, 2) / 2.0;
  const Matrix out = apply_circuit_density(d.circuit, {2, kron(mixed_ctl, rho.m)}).m;
  EXPECT_LT(oracle::max_abs(out - kron(mixed_ctl, oracle::channel(q, rho.m))), 1e-11);
}

TEST(Dispatch, FanoutDepthDoesNotGrow) {
  std::optional<std::size_t> overhead;
  for (std::size_t n : {4, 8, 16}) {
    // Constant-depth bodies: n gates spread over n wires in two layers.
    std::vector<Gate> g1, g2;
    for (Qubit q = 0; q < n; ++q) {
      g1.push_back(H(q));
      g2.push_back(T(q));
    }
    for (Qubit q = 0; q + 1 < n; q += 2) {
      g1.push_back(CNOT(q, q + 1));
      g2.push_back(CZ(q, q + 1));
    }
    const auto d = build_controlled_dispatch({make_circuit(n, g1), make_circuit(n, g2), 2.0, 0.0}, true);
    const std::size_t got = depth(d.circuit, CostModel{true}).layer_count;
    EXPECT_LE(got, d.bound());
    EXPECT_LE(got, 12u);
    if (!overhead) overhead = d.overhead;
    EXPECT_EQ(d.overhead, *overhead);
  }
}

TEST(Dispatch, RejectsMismatch) {
  EXPECT_THROW(build_controlled_dispatch({make_circuit(1, {H(0)}), make_circuit(2, {H(0)}), 2.0, 0.0}), Error);
}

}  // namespace
