// Copyright 2026 The rqco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "rqco/models.hpp"
#include "rqco/objective.hpp"
#include "rqco/random.hpp"

namespace rqco {
namespace {

int count_terms(const HamiltonianSpec& spec, TwoSiteOperator op) {
  return static_cast<int>(std::count_if(spec.terms.begin(), spec.terms.end(),
                                        [&](const HamiltonianTerm& t) { return t.op == op; }));
}

TEST(SpinlessFH, TwoSitesOpen) {
  const HamiltonianSpec spec = build_spinless_fh(2, 1.0, 4.0, false);
  EXPECT_EQ(spec.num_qubits, 2);
  EXPECT_EQ(count_terms(spec, TwoSiteOperator::kHopping), 1);
  EXPECT_EQ(count_terms(spec, TwoSiteOperator::kDensityDensity), 1);
  EXPECT_THROW(build_spinless_fh(1, 1.0, 4.0, false), Error);
}

TEST(SpinlessFH, PeriodicTwoSitesMergesWrapBond) {
  const HamiltonianSpec spec = build_spinless_fh(2, 1.0, 4.0, true);
  ASSERT_EQ(spec.terms.size(), 2u);
  EXPECT_EQ(spec.terms[0].coefficient, -2.0);
  EXPECT_EQ(spec.terms[1].coefficient, 8.0);
}

TEST(SpinlessFH, LocalBlockPattern) {
  const double J = 1.5, U = 4.0;
  const Matrix4c h = local_hamiltonian(J, U);
  Matrix4c expected = Matrix4c::Zero();
  expected(1, 2) = expected(2, 1) = -J;
  expected(3, 3) = U;
  EXPECT_EQ(h, expected);
}

TEST(SpinlessFH, DenseMatchesSingleSiteConstruction) {
  for (bool periodic : {false, true}) {
    const HamiltonianSpec spec = build_spinless_fh(3, 1.0, 4.0, periodic);
    std::vector<QubitPair> bonds = {{0, 1}, {1, 2}};
    if (periodic) bonds.push_back({2, 0});
    const MatrixXc ref = oracle::chain_hamiltonian(3, bonds, -1.0, bonds, 4.0);
    const MatrixXc h = dense_hamiltonian(spec);
    EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-13);
    const MatrixXc n = oracle::total_number(3);
    EXPECT_LT((h * n - n * h).norm(), 1e-12);
  }
}

TEST(SpinfulFH, TermCountsAndLayout) {
  const HamiltonianSpec open = build_spinful_fh(2, 1.0, 4.0, false);
  EXPECT_EQ(open.num_qubits, 4);
  EXPECT_EQ(count_terms(open, TwoSiteOperator::kHopping), 2);
  EXPECT_EQ(count_terms(open, TwoSiteOperator::kDensityDensity), 2);
  // The periodic wrap bond coincides with the open bond and is merged.
  const HamiltonianSpec periodic = build_spinful_fh(2, 1.0, 4.0, true);
  EXPECT_EQ(count_terms(periodic, TwoSiteOperator::kHopping), 2);
  EXPECT_EQ(count_terms(periodic, TwoSiteOperator::kDensityDensity), 2);
  const HamiltonianSpec four = build_spinful_fh(4, 1.0, 4.0, true);
  for (const auto& t : four.terms) {
    if (t.op == TwoSiteOperator::kDensityDensity) {
      EXPECT_EQ(t.sites.second, t.sites.first + 4);
      EXPECT_EQ(t.group, 2);
    }
  }
}

TEST(SpinfulFH, TwoSiteSpectrum) {
  const double J = 1.0, U = 4.0;
  const MatrixXc h = dense_hamiltonian(build_spinful_fh(2, J, U, false));
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(h);
  std::vector<double> ref = {0.0,       J,         J,         -J,        -J,
                             0.0,       0.0,       0.0,       U,         U + J,
                             U + J,     U - J,     U - J,     2 * U};
  const double r = std::sqrt(U * U + 16 * J * J);
  ref.push_back((U + r) / 2);
  ref.push_back((U - r) / 2);
  std::sort(ref.begin(), ref.end());
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(eig.eigenvalues()[i], ref[static_cast<std::size_t>(i)], 1e-12);
}

TEST(TrotterGate, IdentityAtZeroTime) {
  EXPECT_EQ(trotter_gate(1.0, 4.0, 0.0).matrix, Matrix4c::Identity());
}

TEST(TrotterGate, ClosedFormEntries) {
  const Gate g = trotter_gate(1.0, 4.0, 0.1);
  EXPECT_TRUE(g.parity_sparse);
  EXPECT_EQ(g.matrix(0, 0), Complex(1.0));
  EXPECT_EQ(g.matrix(1, 1), Complex(std::cos(0.1)));
  EXPECT_EQ(g.matrix(2, 2), Complex(std::cos(0.1)));
  EXPECT_EQ(g.matrix(1, 2), Complex(0.0, std::sin(0.1)));
  EXPECT_EQ(g.matrix(2, 1), Complex(0.0, std::sin(0.1)));
  EXPECT_EQ(g.matrix(3, 3), std::exp(Complex(0.0, -0.4)));
  EXPECT_TRUE(is_parity_sparse(g.matrix, 0.0));
}

TEST(TrotterGate, MatchesMatrixExponential) {
  Rng rng(1);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double J = d(rng), U = d(rng), t = d(rng);
    const MatrixXc ref = (Complex(0.0, -t) * MatrixXc(local_hamiltonian(J, U))).exp();
    EXPECT_LT((MatrixXc(trotter_gate(J, U, t).matrix) - ref).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(TrotterPlan, LayerCounts) {
  EXPECT_EQ(make_trotter_plan(2, 1, 1, 1.0).layers.size(), 2u);
  EXPECT_EQ(make_trotter_plan(2, 2, 1, 1.0).layers.size(), 3u);
  EXPECT_EQ(make_trotter_plan(2, 2, 3, 1.0).layers.size(), 7u);
  EXPECT_EQ(make_trotter_plan(2, 4, 1, 1.0).layers.size(), 11u);
  EXPECT_EQ(make_trotter_plan(3, 4, 1, 1.0).layers.size(), 21u);
  EXPECT_THROW(make_trotter_plan(2, 3, 1, 1.0), Error);
}

TEST(TrotterPlan, GroupTimesSumToTotal) {
  for (int order : {1, 2, 4}) {
    const TrotterPlan plan = make_trotter_plan(3, order, 2, 0.7);
    std::vector<double> per_group(3, 0.0);
    for (const auto& l : plan.layers) per_group[static_cast<std::size_t>(l.group)] += l.time;
    for (double t : per_group) EXPECT_NEAR(t, 0.7, 1e-14);
  }
}

TEST(TrotterCircuit, SpinlessBrickwallLayout) {
  const HamiltonianSpec spec = build_spinless_fh(6, 1.0, 4.0, true);
  const Circuit c = build_trotter_circuit(spec, make_trotter_plan(2, 1, 1, 0.3));
  EXPECT_EQ(c.num_logical(), 2);
  EXPECT_EQ(c.num_slots(), 6);
  EXPECT_TRUE(c.is_periodic_brickwall());
}

TEST(TrotterCircuit, CommutingTermsAreExact) {
  for (int order : {1, 2, 4}) {
    const HamiltonianSpec spec = build_spinless_fh(4, 0.0, 3.0, true);
    const Circuit c = build_trotter_circuit(spec, make_trotter_plan(spec.num_groups, order, 1, 0.9));
    EXPECT_NEAR(target_value(c, *make_oracle(spec, 0.9, OracleMethod::kDense)), -16.0, 1e-10);
  }
}

TEST(TrotterCircuit, ConservesParity) {
  const HamiltonianSpec spec = build_spinful_fh(3, 1.0, 4.0, false);
  const Circuit c = build_trotter_circuit(spec, make_trotter_plan(spec.num_groups, 2, 1, 0.5));
  const MatrixXc u = oracle::circuit_unitary(c);
  const MatrixXc p = oracle::global_parity(6);
  EXPECT_LT((u * p - p * u).norm(), 1e-12);
}

double trotter_error(const HamiltonianSpec& spec, int order, int steps, double t) {
  const Circuit c = build_trotter_circuit(spec, make_trotter_plan(spec.num_groups, order, steps, t));
  const MatrixXc u = (Complex(0.0, -t) * dense_hamiltonian(spec)).exp();
  return (oracle::circuit_unitary(c) - u).norm();
}

TEST(TrotterCircuit, OrderTwoErrorDropsFourfoldWhenStepsDouble) {
  const HamiltonianSpec spec = build_spinless_fh(6, 1.0, 4.0, true);
  const double ratio = trotter_error(spec, 2, 4, 0.5) / trotter_error(spec, 2, 8, 0.5);
  EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(TrotterCircuit, SingleStepErrorScalesWithOrder) {
  const HamiltonianSpec spec = build_spinless_fh(6, 1.0, 4.0, true);
  for (int order : {1, 2, 4}) {
    const double slope =
        std::log2(trotter_error(spec, order, 1, 0.02) / trotter_error(spec, order, 1, 0.01));
    EXPECT_NEAR(slope, order + 1, 0.15) << "order " << order;
  }
}

TEST(HamiltonianApply, ZeroStateAndDenseProduct) {
  Rng rng(2);
  const HamiltonianSpec spec = build_spinless_fh(3, 1.0, 4.0, true);
  EXPECT_TRUE(hamiltonian_apply(spec, StateVector(3)).amplitudes().isZero(0.0));
  const std::vector<QubitPair> bonds = {{0, 1}, {1, 2}, {2, 0}};
  const MatrixXc ref = oracle::chain_hamiltonian(3, bonds, -1.0, bonds, 4.0);
  const StateVector psi = random_state(3, rng), phi = random_state(3, rng);
  EXPECT_LT((hamiltonian_apply(spec, psi).amplitudes() - ref * psi.amplitudes()).norm(), 1e-13);
  const Complex a = phi.amplitudes().dot(hamiltonian_apply(spec, psi).amplitudes());
  const Complex b = psi.amplitudes().dot(hamiltonian_apply(spec, phi).amplitudes());
  EXPECT_LT(std::abs(a - std::conj(b)), 1e-13);
  EXPECT_THROW(hamiltonian_apply(spec, StateVector(4)), DimensionError);
}

TEST(HamiltonianApply, GroundStateExpectation) {
  const HamiltonianSpec spec = build_spinful_fh(2, 1.0, 4.0, true);
  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(dense_hamiltonian(spec));
  const StateVector g(4, eig.eigenvectors().col(0));
  const Complex e = g.amplitudes().dot(hamiltonian_apply(spec, g).amplitudes());
  EXPECT_NEAR(e.real(), eig.eigenvalues()[0], 1e-12);
}

TEST(Oracle, ZeroTimeIsIdentity) {
  Rng rng(3);
  const HamiltonianSpec spec = build_spinless_fh(4, 1.0, 4.0, true);
  const StateVector psi = random_state(4, rng);
  for (auto m : {OracleMethod::kDense, OracleMethod::kKrylov}) {
    StateVector out(4);
    make_oracle(spec, 0.0, m)->apply(psi, out);
    EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-14);
  }
}

TEST(Oracle, DenseAndKrylovAgree) {
  Rng rng(4);
  const HamiltonianSpec spec = build_spinless_fh(8, 1.0, 4.0, true);
  const auto dense = make_oracle(spec, 1.0, OracleMethod::kDense);
  const auto krylov = make_oracle(spec, 1.0, OracleMethod::kKrylov);
  for (int i = 0; i < 3; ++i) {
    const StateVector psi = random_state(8, rng);
    StateVector a(8), b(8), back(8);
    dense->apply(psi, a);
    krylov->apply(psi, b);
    EXPECT_LT((a.amplitudes() - b.amplitudes()).norm(), 1e-10);
    EXPECT_NEAR(b.amplitudes().norm(), 1.0, 1e-10);
    krylov->apply_adjoint(b, back);
    EXPECT_LT((back.amplitudes() - psi.amplitudes()).norm(), 1e-10);
  }
}

TEST(Oracle, KrylovReportsNonConvergence) {
  Rng rng(5);
  const KrylovOracle o(build_spinless_fh(8, 1.0, 4.0, true), 5.0, 1e-12, 4);
  StateVector out(8);
  EXPECT_THROW(o.apply(random_state(8, rng), out), KrylovNotConverged);
}

TEST(Oracle, DenseRefusesLargeSystems) {
  EXPECT_THROW(make_oracle(build_spinful_fh(8, 1.0, 4.0, true), 1.0, OracleMethod::kDense), Error);
}

}  // namespace
}  // namespace rqco
