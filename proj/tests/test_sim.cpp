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

Vector vec(std::initializer_list<cplx> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cplx x : xs) v(i++) = x;
  return v;
}

TEST(ApplyDensity, IdentityCircuit) {
  const DensityMatrix rho = random_density(2, 1);
  EXPECT_LT(oracle::max_abs(apply_circuit_density(CircuitBuilder(2).build(), rho).m - rho.m), 1e-15);
}

TEST(ApplyDensity, HadamardOnZero) {
  const auto out = apply_circuit_density(make_circuit(1, {H(0)}), DensityMatrix::from(PureState::basis(1, 0)));
  EXPECT_LT(oracle::max_abs(out.m - oracle::projector(vec({kR, kR}))), 1e-15);
}

TEST(ApplyDensity, MatchesDenseUnitaryOracle) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng(mix_seed(21, s));
    const std::size_t w = 1 + rng.below(4), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const Circuit c = random_circuit(w, h, k, 3, rng);
    const DensityMatrix rho = random_density(h, s);
    EXPECT_LT(oracle::max_abs(apply_circuit_density(c, rho).m - oracle::channel(c, rho.m)), 1e-12);
  }
}

TEST(ApplyDensity, ControlledAndFanoutGatesMatchOracle) {
  Gate ch = H(2);
  ch.controls = {0};
  Gate cs = SWAP2(1, 3);
  cs.controls = {0, 2};
  const Circuit c = make_circuit(4, {H(0), ch, FANOUT(2, {1, 3}), cs, T(3), CZ(0, 3)});
  const DensityMatrix rho = random_density(4, 9);
  EXPECT_LT(oracle::max_abs(apply_circuit_density(c, rho).m - oracle::channel(c, rho.m)), 1e-12);
  EXPECT_LT(oracle::max_abs(full_unitary(c) - oracle::unitary(c)), 1e-12);
}

TEST(ApplyDensity, WideCircuitsUseSpectralRoute) {
  // 11 wires is past the dense evolution cap; compare against the pure path.
  Rng rng(31);
  const Circuit c = random_circuit(11, 3, 3, 25, rng);
  const DensityMatrix rho = random_density(3, 5);
  const Matrix out = apply_circuit_density(c, rho).m;
  Matrix expect = Matrix::Zero(8, 8);
  const auto e = eig_hermitian(rho.m);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    const PureState s = apply_circuit_pure(c, PureState{3, e.vectors.col(i)});
    expect += e.values(i) * reduced_density(s, c.outputs()).m;
  }
  EXPECT_LT(oracle::max_abs(out - expect), 1e-12);
}

TEST(ApplyDensity, DimensionMismatch) {
  EXPECT_THROW(apply_circuit_density(make_circuit(2, {H(0)}), random_density(1, 0)), Error);
}

TEST(ApplyDensity, LinearTracePreservingPositive) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(22, s));
    const std::size_t w = 2 + rng.below(3), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const Circuit c = random_circuit(w, h, k, 6, rng);
    const DensityMatrix a = random_density(h, 2 * s), b = random_density(h, 2 * s + 1);
    const double p = rng.uniform();
    const Matrix mix = apply_circuit_density(c, {h, p * a.m + (1 - p) * b.m}).m;
    const Matrix sep = p * apply_circuit_density(c, a).m + (1 - p) * apply_circuit_density(c, b).m;
    EXPECT_LT(oracle::max_abs(mix - sep), 1e-11);
    EXPECT_NEAR(mix.trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(is_density(mix));
  }
}

TEST(ApplyPure, IdentityPadsAncillas) {
  const PureState psi = random_pure(1, 3);
  const PureState out = apply_circuit_pure(make_circuit(2, {}, {1}), psi);
  EXPECT_LT((out.amps.head(2) - psi.amps).norm(), 1e-15);
  EXPECT_LT(out.amps.tail(2).norm(), 1e-15);
}

TEST(ApplyPure, CnotOnOneZero) {
  // |10> lists qubit 1 first: qubit 1 = 1, qubit 0 = 0. Control on qubit 1.
  const PureState out = apply_circuit_pure(make_circuit(2, {CNOT(1, 0)}), PureState::basis(2, 0b10));
  EXPECT_NEAR(std::abs(out.amps(0b11)), 1.0, 1e-15);
}

TEST(ApplyPure, AgreesWithDensityPath) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(mix_seed(23, s));
    const std::size_t w = 1 + rng.below(4), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const Circuit c = random_circuit(w, h, k, 1 + rng.below(8), rng);
    const PureState psi = random_pure(h, s);
    const Matrix a = reduced_density(apply_circuit_pure(c, psi), c.outputs()).m;
    const Matrix b = apply_circuit_density(c, DensityMatrix::from(psi)).m;
    EXPECT_LT(oracle::max_abs(a - b), 1e-12);
  }
}

TEST(PartialTrace, KeepEverything) {
  const DensityMatrix rho = random_density(3, 4);
  EXPECT_LT(oracle::max_abs(partial_trace(rho, {0, 1, 2}).m - rho.m), 1e-15);
}

TEST(PartialTrace, BellReducesToMaximallyMixed) {
  const DensityMatrix bell = DensityMatrix::from(PureState{2, vec({kR, 0, 0, kR})});
  EXPECT_LT(oracle::max_abs(partial_trace(bell, {0}).m - Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, MatchesOracleAndStaysDensity) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = random_density(3, 40 + s);
    const std::vector<Qubit> keep = s % 2 ? std::vector<Qubit>{2, 0} : std::vector<Qubit>{1};
    const Matrix r = partial_trace(rho, keep).m;
    EXPECT_LT(oracle::max_abs(r - oracle::partial_trace(rho.m, 3, keep)), 1e-14);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(r), -1e-12);
  }
}

TEST(PartialTrace, EmptyKeepIsAnError) {
  EXPECT_THROW(partial_trace(random_density(2, 0), std::vector<Qubit>{}), Error);
}

TEST(Purify, PureInput) {
  const PureState p = purify(DensityMatrix::from(PureState::basis(1, 0)));
  ASSERT_EQ(p.width, 2u);
  EXPECT_NEAR(std::abs(p.amps(0)), 1.0, 1e-15);
}

TEST(Purify, MaximallyMixedGivesBellType) {
  const PureState p = purify(DensityMatrix::maximally_mixed(1));
  EXPECT_LT(oracle::max_abs(reduced_density(p, std::vector<Qubit>{0}).m - Matrix::Identity(2, 2) / 2.0), 1e-14);
  EXPECT_LT(oracle::max_abs(reduced_density(p, std::vector<Qubit>{1}).m - Matrix::Identity(2, 2) / 2.0), 1e-14);
}

TEST(Purify, RoundTrip) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const DensityMatrix rho = random_density(1 + s % 3, 60 + s);
    const PureState p = purify(rho);
    std::vector<Qubit> low(rho.width);
    std::iota(low.begin(), low.end(), Qubit{0});
    EXPECT_LT(oracle::max_abs(oracle::partial_trace(oracle::projector(p.amps), p.width, low) - rho.m), 1e-10);
  }
}

TEST(Purify, RejectsNonPositive) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -0.5;
  m(0, 0) = 1.5;
  EXPECT_THROW(purify(DensityMatrix{1, m}), Error);
}

TEST(Measure, ZeroGivesOneBranch) {
  const auto br = measure_qubit(PureState::basis(1, 0), 0);
  ASSERT_EQ(br.size(), 1u);
  EXPECT_EQ(br[0].outcome, 0);
  EXPECT_NEAR(br[0].probability, 1.0, 1e-15);
}

TEST(Measure, PlusGivesTwoHalves) {
  const auto br = measure_qubit(PureState{1, vec({kR, kR})}, 0);
  ASSERT_EQ(br.size(), 2u);
  EXPECT_NEAR(br[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(br[1].probability, 0.5, 1e-15);
  EXPECT_EQ(br[1].outcome, 1);
  EXPECT_NEAR(std::abs(br[1].post.amps(1)), 1.0, 1e-15);
}

TEST(Measure, ProbabilitiesSumToOne) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PureState psi = random_pure(3, s);
    double total = 0.0;
    for (const auto& b : measure_qubit(psi, static_cast<Qubit>(s % 3))) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
    const DensityMatrix rho = random_density(3, s);
    total = 0.0;
    for (const auto& b : measure_qubit(rho, static_cast<Qubit>(s % 3))) total += b.probability;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(RandomStates, DeterministicAndValid) {
  EXPECT_EQ(random_pure(3, 5).amps, random_pure(3, 5).amps);
  EXPECT_EQ(random_density(3, 5).m, random_density(3, 5).m);
  EXPECT_NE(random_pure(3, 5).amps, random_pure(3, 6).amps);
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_TRUE(is_density(random_density(1 + s % 4, s).m));
    EXPECT_NEAR(random_pure(1 + s % 4, s).amps.norm(), 1.0, 1e-12);
  }
}

TEST(RandomStates, PureProjectorsAverageToMaximallyMixed) {
  Matrix sum = Matrix::Zero(2, 2);
  const int count = 10000;
  for (int s = 0; s < count; ++s) sum += oracle::projector(random_pure(1, static_cast<std::uint64_t>(s)).amps);
  EXPECT_LT(oracle::max_abs(sum / count - Matrix::Identity(2, 2) / 2.0), 0.02);
}

TEST(StateIo, RoundTrip) {
  const PureState p = random_pure(2, 1);
  const auto back = read_state(write_state(p));
  EXPECT_EQ(std::get<PureState>(back).amps, p.amps);
  const DensityMatrix d = random_density(2, 1);
  EXPECT_LT(oracle::max_abs(std::get<DensityMatrix>(read_state(write_state(d))).m - d.m), 0.0 + 1e-300);
}

TEST(StateIo, RejectsBadDocuments) {
  auto doc = write_state(random_pure(1, 0));
  doc["entries"].erase(0);
  EXPECT_THROW(read_state(doc), Error);
  doc = write_state(random_pure(1, 0));
  doc["kind"] = "mixed";
  EXPECT_THROW(read_state(doc), Error);
}

TEST(FactoredState, MatchesDenseSimulation) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(mix_seed(24, s));
    const Circuit c = random_circuit(8, 4, 3, 12, rng);
    const PureState a = random_pure(2, s), b = random_pure(2, s + 100);
    std::vector<StateFactor> in{{{c.inputs()[0], c.inputs()[1]}, a.amps}, {{c.inputs()[2], c.inputs()[3]}, b.amps}};
    FactoredState st(8, in);
    st.run(c);
    const PureState full = apply_circuit_pure(c, PureState{4, kron(b.amps, a.amps)});
    EXPECT_LT(oracle::max_abs(st.reduced_density(c.outputs()) - reduced_density(full, c.outputs()).m), 1e-12);
  }
}

TEST(FactoredState, ReleasesFinishedWires) {
  // Two independent Bell pairs made in sequence never need four active wires.
  const Circuit c = make_circuit(4, {H(0), CNOT(0, 1), H(2), CNOT(2, 3)}, {0, 1, 2, 3});
  FactoredState st(4, {});
  st.run(c, {{0, 1}, {2, 3}});
  EXPECT_EQ(st.peak_active(), 2u);
  const Matrix bell = oracle::projector(vec({kR, 0, 0, kR}));
  EXPECT_LT(oracle::max_abs(st.reduced_density(std::vector<Qubit>{2, 3}) - bell), 1e-14);
}

}  // namespace
