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

// Riemannian geometry of U(m) embedded in C^{m x m} with the metric
// <X, Y> = Re Tr[X^dagger Y], and of products of such manifolds.

#ifndef RQCO_MANIFOLD_HPP_
#define RQCO_MANIFOLD_HPP_

#include <utility>
#include <vector>

#include "rqco/types.hpp"

namespace rqco {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

class DegenerateRetraction : public Error {
 public:
  using Error::Error;
};

// Anti-Hermitian part (A - A^dagger) / 2.
template <typename Derived>
typename Derived::PlainObject asym(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()) * 0.5;
}

// P_V X = V asym(V^dagger X).
template <typename DerivedV, typename DerivedX>
typename DerivedX::PlainObject project_tangent(const Eigen::MatrixBase<DerivedV>& v,
                                               const Eigen::MatrixBase<DerivedX>& x) {
  return v * asym((v.adjoint() * x).eval());
}

// Unitary polar factor of V + X via the SVD V + X = W S Y^dagger -> W Y^dagger.
// Throws DegenerateRetraction if V + X is numerically singular.
MatrixXc retract_polar(const MatrixXc& v, const MatrixXc& x);

// Unitary polar factor of a general square matrix.
MatrixXc polar_unitary(const MatrixXc& a);

struct TangentVector {
  MatrixXc base;
  MatrixXc matrix;
};

// Checked metric: same base point, and the imaginary part of Tr[X^dagger Y]
// must vanish for genuine tangent vectors.
double inner(const TangentVector& x, const TangentVector& y);

// Re Tr[X^dagger Y] without tangent checks.
template <typename DerivedA, typename DerivedB>
double frobenius_inner(const Eigen::MatrixBase<DerivedA>& x,
                       const Eigen::MatrixBase<DerivedB>& y) {
  return (x.conjugate().cwiseProduct(y)).sum().real();
}

// Holomorphic derivative D of the summed trace (f~ = Tr[G^T D] under
// reinsertion) to the real gradient of f = -Re f~: grad = -conj(D).
template <typename Derived>
typename Derived::PlainObject euclid_gradient_from_holomorphic(
    const Eigen::MatrixBase<Derived>& d) {
  return -d.conjugate();
}

// Hess f(V)[X] = P_V(X asym(V^dagger g) + V asym(X^dagger g + V^dagger Dg[X]))
// with g the Euclidean gradient and Dg[X] its directional derivative.
MatrixXc riemannian_hessian_apply(const MatrixXc& v, const MatrixXc& euclid_grad,
                                  const MatrixXc& euclid_grad_derivative,
                                  const MatrixXc& x);

// Parity-conserving gates: odd block rows/cols {1,2}, even block rows/cols {0,3}.
struct ParityBlocks {
  Eigen::Matrix2cd odd;
  Eigen::Matrix2cd even;
};

bool is_parity_sparse(const Matrix4c& g, double tol = 1e-12);
ParityBlocks parity_split(const Matrix4c& g, double tol = 1e-12);
Matrix4c parity_join(const Eigen::Matrix2cd& odd, const Eigen::Matrix2cd& even);

// ---- Product manifolds over the logical gates of a circuit ----------------

enum class GateStructure {
  kDense,   // each gate is a point of U(4)
  kParity,  // each gate is a point of U(2) x U(2)
};

using ProductPoint = std::vector<MatrixXc>;
using ProductTangent = std::vector<MatrixXc>;

int components_per_gate(GateStructure structure);
// Entries (row-major 4x4 indices) carried per gate, in coordinate order.
std::vector<int> structure_entries(GateStructure structure);

ProductPoint to_components(const std::vector<Matrix4c>& gates, GateStructure structure);
std::vector<Matrix4c> from_components(const ProductPoint& point, GateStructure structure);

// Restriction of per-gate 4x4 matrices (derivatives, directions) to the
// component blocks of `structure`.
ProductTangent restrict_to_components(const std::vector<Matrix4c>& per_gate,
                                      GateStructure structure);

// Complex coordinates in structure_entries order, gate by gate.
VectorXc flatten_coordinates(const ProductTangent& x, GateStructure structure);
ProductTangent unflatten_coordinates(const VectorXc& coords, GateStructure structure);

double product_inner(const ProductTangent& x, const ProductTangent& y);
double product_norm(const ProductTangent& x);
ProductTangent zeros_like(const ProductTangent& x);
// y += alpha * x
void axpy(double alpha, const ProductTangent& x, ProductTangent& y);
ProductTangent scaled(double alpha, const ProductTangent& x);

ProductTangent project_tangent(const ProductPoint& v, const ProductTangent& x);
ProductPoint retract(const ProductPoint& v, const ProductTangent& x);
double max_unitarity_error(const ProductPoint& v);

// Real coordinates (re, im interleaved) of a product of matrices.
Eigen::VectorXd to_real_vector(const ProductTangent& x);
ProductTangent from_real_vector(const Eigen::VectorXd& v, const ProductTangent& shape);

}  // namespace rqco

#endif  // RQCO_MANIFOLD_HPP_
