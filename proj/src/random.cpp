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


#include "rqco/random.hpp"

#include <Eigen/QR>

namespace rqco {

MatrixXc random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXc m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return m;
}

MatrixXc random_unitary(Index m, Rng& rng) {
  const MatrixXc a = random_gaussian(m, m, rng);
  Eigen::HouseholderQR<MatrixXc> qr(a);
  MatrixXc q = qr.householderQ() * MatrixXc::Identity(m, m);
  const MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < m; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

std::vector<Matrix4c> random_gates(int count, Rng& rng) {
  std::vector<Matrix4c> out;
  for (int i = 0; i < count; ++i) out.emplace_back(random_unitary(4, rng));
  return out;
}

std::vector<Matrix4c> random_parity_gates(int count, Rng& rng) {
  std::vector<Matrix4c> out;
  for (int i = 0; i < count; ++i) {
    const MatrixXc odd = random_unitary(2, rng);
    const MatrixXc even = random_unitary(2, rng);
    out.push_back(parity_join(odd, even));
  }
  return out;
}

StateVector random_state(int num_qubits, Rng& rng) {
  VectorXc v = random_gaussian(Index{1} << num_qubits, 1, rng);
  v.normalize();
  return StateVector(num_qubits, v);
}

ProductTangent random_tangent(const ProductPoint& point, Rng& rng) {
  ProductTangent x;
  for (const auto& c : point) x.push_back(random_gaussian(c.rows(), c.cols(), rng));
  return project_tangent(point, x);
}

}  // namespace rqco
