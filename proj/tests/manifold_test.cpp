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


#include <gtest/gtest.h>

#include "rqco/manifold.hpp"
#include "rqco/models.hpp"
#include "rqco/random.hpp"

namespace rqco {
namespace {

MatrixXc anti_hermitian(Index m, Rng& rng) { return asym(random_gaussian(m, m, rng)); }

TEST(Asym, HermitianAndAntiHermitianInputs) {
  Rng rng(1);
  const MatrixXc a = random_gaussian(4, 4, rng);
  const MatrixXc h = a + a.adjoint();
  EXPECT_TRUE(asym(h).isZero(0.0));
  const MatrixXc s = a - a.adjoint();
  EXPECT_EQ(asym(s), s);
  const MatrixXc r = asym(a);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(r(i, j) - 0.5 * (a(i, j) - std::conj(a(j, i)))), 0.0, 1e-15);
    }
  }
}

TEST(ProjectTangent, TangentInputUnchangedAndNormalRemoved) {
  Rng rng(2);
  const MatrixXc v = random_unitary(4, rng);
  const MatrixXc x = v * anti_hermitian(4, rng);
  EXPECT_LT((project_tangent(v, x) - x).norm(), 1e-13);
  EXPECT_LT(project_tangent(v, v).norm(), 1e-14);
}

TEST(ProjectTangent, IdempotentAndTangent) {
  Rng rng(3);
  const MatrixXc v = random_unitary(4, rng);
  const MatrixXc x = random_gaussian(4, 4, rng);
  const MatrixXc p = project_tangent(v, x);
  EXPECT_LT((project_tangent(v, p) - p).norm(), 1e-13);
  const MatrixXc vp = v.adjoint() * p;
  EXPECT_LT((vp + vp.adjoint()).norm(), 1e-12);
}

TEST(RetractPolar, ZeroStepAndUnitarity) {
  Rng rng(4);
  const MatrixXc v = random_unitary(4, rng);
  EXPECT_LT((retract_polar(v, MatrixXc::Zero(4, 4)) - v).norm(), 1e-14);
  for (int i = 0; i < 20; ++i) {
    const MatrixXc x = project_tangent(v, random_gaussian(4, 4, rng));
    const MatrixXc r = retract_polar(v, 10.0 * x / x.norm());
    EXPECT_LT((r.adjoint() * r - MatrixXc::Identity(4, 4)).norm(), 1e-12);
  }
}

TEST(RetractPolar, SecondOrderAgreementWithLine) {
  Rng rng(5);
  const MatrixXc v = random_unitary(4, rng);
  const MatrixXc x = project_tangent(v, random_gaussian(4, 4, rng));
  const auto err = [&](double t) { return (retract_polar(v, t * x) - (v + t * x)).norm(); };
  const double ratio = err(1e-2) / err(5e-3);
  EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(RetractPolar, SingularSumThrows) {
  const MatrixXc v = MatrixXc::Identity(2, 2);
  MatrixXc x = MatrixXc::Zero(2, 2);
  x(0, 0) = -1.0;
  EXPECT_THROW(retract_polar(v, x), DegenerateRetraction);
}

TEST(Inner, MetricProperties) {
  Rng rng(6);
  const MatrixXc v = random_unitary(4, rng);
  const MatrixXc a = anti_hermitian(4, rng), b = anti_hermitian(4, rng);
  const TangentVector x{v, v * a}, y{v, v * b};
  EXPECT_NEAR(inner(x, x), x.matrix.squaredNorm(), 1e-13);
  EXPECT_NEAR(inner(x, y), inner(y, x), 1e-13);
  EXPECT_NEAR(inner(x, y), (a.adjoint() * b).trace().real(), 1e-12);
  const TangentVector other{random_unitary(4, rng), y.matrix};
  EXPECT_THROW(inner(x, other), Error);
}

TEST(EuclidGradient, ConventionMatchesFiniteDifferences) {
  Rng rng(7);
  const MatrixXc a = random_gaussian(4, 4, rng);
  const MatrixXc g0 = random_gaussian(4, 4, rng);
  // f(G) = -Re Tr[A^T G] has holomorphic derivative D = A.
  const auto f = [&](const MatrixXc& g) { return -(a.transpose() * g).trace().real(); };
  const MatrixXc grad = euclid_gradient_from_holomorphic(a);
  for (int i = 0; i < 10; ++i) {
    const MatrixXc x = random_gaussian(4, 4, rng);
    const double h = 1e-5;
    const double fd = (f(g0 + h * x) - f(g0 - h * x)) / (2 * h);
    const double predicted = (grad.adjoint() * x).trace().real();
    EXPECT_NEAR(fd, predicted, 1e-8 * std::max(1.0, std::abs(predicted)));
  }
  EXPECT_TRUE(euclid_gradient_from_holomorphic(MatrixXc::Zero(4, 4)).isZero(0.0));
  const MatrixXc real_d = a.real().cast<Complex>();
  EXPECT_EQ(euclid_gradient_from_holomorphic(real_d), MatrixXc(-real_d));
}

TEST(RiemannianHessian, ZeroInputsGiveZero) {
  Rng rng(8);
  const MatrixXc v = random_unitary(4, rng);
  const MatrixXc x = project_tangent(v, random_gaussian(4, 4, rng));
  EXPECT_TRUE(riemannian_hessian_apply(v, MatrixXc::Zero(4, 4), MatrixXc::Zero(4, 4), x)
                  .isZero(1e-15));
}

TEST(Parity, TrotterGateBlocks) {
  const double J = 1.3, U = 4.0, t = 0.2;
  const ParityBlocks b = parity_split(trotter_gate(J, U, t).matrix);
  EXPECT_NEAR(std::abs(b.odd(0, 0) - std::cos(J * t)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.odd(0, 1) - Complex(0, std::sin(J * t))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.odd(1, 0) - Complex(0, std::sin(J * t))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.odd(1, 1) - std::cos(J * t)), 0.0, 1e-15);
  EXPECT_EQ(b.even(0, 0), Complex(1.0));
  EXPECT_EQ(b.even(0, 1), Complex(0.0));
  EXPECT_EQ(b.even(1, 0), Complex(0.0));
  EXPECT_NEAR(std::abs(b.even(1, 1) - std::exp(Complex(0, -t * U))), 0.0, 1e-15);
}

TEST(Parity, JoinSplitRoundTripAndDenseRejected) {
  Rng rng(9);
  const Matrix4c g = random_parity_gates(1, rng)[0];
  const ParityBlocks b = parity_split(g);
  EXPECT_EQ(parity_join(b.odd, b.even), g);
  EXPECT_THROW(parity_split(Matrix4c(random_unitary(4, rng))), Error);
}

TEST(ProductManifold, ParityRetractionKeepsExactZeros) {
  Rng rng(10);
  const auto gates = random_parity_gates(3, rng);
  const ProductPoint p = to_components(gates, GateStructure::kParity);
  ASSERT_EQ(p.size(), 6u);
  const ProductTangent x = random_tangent(p, rng);
  const auto moved = from_components(retract(p, scaled(0.5, x)), GateStructure::kParity);
  for (const auto& g : moved) {
    EXPECT_TRUE(is_parity_sparse(g, 0.0));
    EXPECT_LT((g.adjoint() * g - Matrix4c::Identity()).norm(), 1e-12);
  }
}

TEST(ProductManifold, FlattenOrderFollowsStructureEntries) {
  Rng rng(11);
  const auto gates = random_parity_gates(2, rng);
  const ProductTangent comps = restrict_to_components(gates, GateStructure::kParity);
  const VectorXc flat = flatten_coordinates(comps, GateStructure::kParity);
  const auto entries = structure_entries(GateStructure::kParity);
  for (int g = 0; g < 2; ++g) {
    for (int a = 0; a < 8; ++a) {
      const int e = entries[static_cast<std::size_t>(a)];
      EXPECT_EQ(flat[g * 8 + a], gates[static_cast<std::size_t>(g)](e / 4, e % 4));
    }
  }
  EXPECT_EQ(unflatten_coordinates(flat, GateStructure::kParity).size(), 4u);
}

TEST(ProductManifold, RealVectorRoundTrip) {
  Rng rng(12);
  const ProductPoint p = to_components(random_gates(2, rng), GateStructure::kDense);
  const ProductTangent x = random_tangent(p, rng);
  const ProductTangent y = from_real_vector(to_real_vector(x), x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i], y[i]);
  EXPECT_NEAR(product_inner(x, x), to_real_vector(x).squaredNorm(), 1e-12);
}

}  // namespace
}  // namespace rqco
