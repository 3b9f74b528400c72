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

#include "rqco/manifold.hpp"

#include <cmath>

namespace rqco {

namespace {

constexpr int kOdd[2] = {1, 2};
constexpr int kEven[2] = {0, 3};

void check_same_shape(const ProductTangent& x, const ProductTangent& y) {
  if (x.size() != y.size()) throw DimensionError("product tangent size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].rows() != y[i].rows() || x[i].cols() != y[i].cols()) {
      throw DimensionError("product tangent component shape mismatch");
    }
  }
}

}  // namespace

MatrixXc polar_unitary(const MatrixXc& a) {
  if (a.rows() != a.cols()) throw DimensionError("polar factor of non-square matrix");
  Eigen::JacobiSVD<MatrixXc> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  if (s.size() == 0 || !(s(s.size() - 1) > 1e-14 * std::max(1.0, smax))) {
    throw DegenerateRetraction("polar factor of a rank-deficient matrix");
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

MatrixXc retract_polar(const MatrixXc& v, const MatrixXc& x) {
  if (v.rows() != x.rows() || v.cols() != x.cols()) {
    throw DimensionError("retract_polar: shape mismatch");
  }
  return polar_unitary(v + x);
}

double inner(const TangentVector& x, const TangentVector& y) {
  if (x.base.rows() != y.base.rows() || x.base.cols() != y.base.cols() ||
      !(x.base - y.base).isZero(0.0)) {
    throw Error("inner: tangent vectors at different base points");
  }
  const Complex tr = (x.matrix.adjoint() * y.matrix).trace();
  const double scale = std::max(1.0, x.matrix.norm() * y.matrix.norm());
  if (std::abs(tr.imag()) > 1e-12 * scale) {
    throw Error("inner: arguments are not tangent vectors");
  }
  return tr.real();
}

MatrixXc riemannian_hessian_apply(const MatrixXc& v, const MatrixXc& euclid_grad,
                                  const MatrixXc& euclid_grad_derivative,
                                  const MatrixXc& x) {
  if (v.rows() != euclid_grad.rows() || v.rows() != x.rows() ||
      v.rows() != euclid_grad_derivative.rows()) {
    throw DimensionError("riemannian_hessian_apply: shape mismatch");
  }
  const MatrixXc d = x * asym((v.adjoint() * euclid_grad).eval()) +
                     v * asym((x.adjoint() * euclid_grad +
                               v.adjoint() * euclid_grad_derivative).eval());
  return project_tangent(v, d);
}

bool is_parity_sparse(const Matrix4c& g, double tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool on = ((i == 0 || i == 3) == (j == 0 || j == 3));
      if (!on && std::abs(g(i, j)) > tol) return false;
    }
  }
  return true;
}

ParityBlocks parity_split(const Matrix4c& g, double tol) {
  if (!is_parity_sparse(g, tol)) {
    throw Error("parity_split: gate is not parity conserving");
  }
  ParityBlocks b;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      b.odd(i, j) = g(kOdd[i], kOdd[j]);
      b.even(i, j) = g(kEven[i], kEven[j]);
    }
  }
  return b;
}

Matrix4c parity_join(const Eigen::Matrix2cd& odd, const Eigen::Matrix2cd& even) {
  Matrix4c g = Matrix4c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g(kOdd[i], kOdd[j]) = odd(i, j);
      g(kEven[i], kEven[j]) = even(i, j);
    }
  }
  return g;
}

int components_per_gate(GateStructure structure) {
  return structure == GateStructure::kDense ? 1 : 2;
}

std::vector<int> structure_entries(GateStructure structure) {
  if (structure == GateStructure::kDense) {
    return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  }
  return {5, 6, 9, 10, 0, 3, 12, 15};
}

ProductPoint to_components(const std::vector<Matrix4c>& gates, GateStructure structure) {
  ProductPoint out;
  out.reserve(gates.size() * static_cast<std::size_t>(components_per_gate(structure)));
  for (const auto& g : gates) {
    if (structure == GateStructure::kDense) {
      out.emplace_back(g);
    } else {
      const auto b = parity_split(g);
      out.emplace_back(b.odd);
      out.emplace_back(b.even);
    }
  }
  return out;
}

std::vector<Matrix4c> from_components(const ProductPoint& point, GateStructure structure) {
  const std::size_t per = static_cast<std::size_t>(components_per_gate(structure));
  if (point.size() % per != 0) throw DimensionError("from_components: bad size");
  std::vector<Matrix4c> out;
  out.reserve(point.size() / per);
  for (std::size_t i = 0; i < point.size(); i += per) {
    if (structure == GateStructure::kDense) {
      if (point[i].rows() != 4 || point[i].cols() != 4) {
        throw DimensionError("from_components: dense component must be 4x4");
      }
      out.emplace_back(point[i]);
    } else {
      if (point[i].rows() != 2 || point[i + 1].rows() != 2) {
        throw DimensionError("from_components: parity components must be 2x2");
      }
      out.push_back(parity_join(point[i], point[i + 1]));
    }
  }
  return out;
}

ProductTangent restrict_to_components(const std::vector<Matrix4c>& per_gate,
                                      GateStructure structure) {
  ProductTangent out;
  for (const auto& g : per_gate) {
    if (structure == GateStructure::kDense) {
      out.emplace_back(g);
      continue;
    }
    Eigen::Matrix2cd odd, even;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        odd(i, j) = g(kOdd[i], kOdd[j]);
        even(i, j) = g(kEven[i], kEven[j]);
      }
    }
    out.emplace_back(odd);
    out.emplace_back(even);
  }
  return out;
}

VectorXc flatten_coordinates(const ProductTangent& x, GateStructure structure) {
  const Index per_component = structure == GateStructure::kDense ? 16 : 4;
  VectorXc out(static_cast<Index>(x.size()) * per_component);
  Index k = 0;
  for (const auto& c : x) {
    if (c.size() != per_component) {
      throw DimensionError("flatten_coordinates: component shape mismatch");
    }
    for (Index i = 0; i < c.rows(); ++i) {
      for (Index j = 0; j < c.cols(); ++j) out[k++] = c(i, j);
    }
  }
  return out;
}

ProductTangent unflatten_coordinates(const VectorXc& coords, GateStructure structure) {
  const Index m = structure == GateStructure::kDense ? 4 : 2;
  if (coords.size() % (m * m) != 0) {
    throw DimensionError("unflatten_coordinates: bad length");
  }
  ProductTangent out(static_cast<std::size_t>(coords.size() / (m * m)));
  Index k = 0;
  for (auto& c : out) {
    c.resize(m, m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < m; ++j) c(i, j) = coords[k++];
    }
  }
  return out;
}

double product_inner(const ProductTangent& x, const ProductTangent& y) {
  check_same_shape(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += frobenius_inner(x[i], y[i]);
  return s;
}

double product_norm(const ProductTangent& x) { return std::sqrt(product_inner(x, x)); }

ProductTangent zeros_like(const ProductTangent& x) {
  ProductTangent z;
  z.reserve(x.size());
  for (const auto& c : x) z.push_back(MatrixXc::Zero(c.rows(), c.cols()));
  return z;
}

void axpy(double alpha, const ProductTangent& x, ProductTangent& y) {
  check_same_shape(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

ProductTangent scaled(double alpha, const ProductTangent& x) {
  ProductTangent out = x;
  for (auto& c : out) c *= alpha;
  return out;
}

ProductTangent project_tangent(const ProductPoint& v, const ProductTangent& x) {
  check_same_shape(v, x);
  ProductTangent out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(project_tangent(v[i], x[i]));
  return out;
}

ProductPoint retract(const ProductPoint& v, const ProductTangent& x) {
  check_same_shape(v, x);
  ProductPoint out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(retract_polar(v[i], x[i]));
  return out;
}

double max_unitarity_error(const ProductPoint& v) {
  double err = 0.0;
  for (const auto& c : v) {
    err = std::max(err, (c.adjoint() * c - MatrixXc::Identity(c.rows(), c.cols())).norm());
  }
  return err;
}

Eigen::VectorXd to_real_vector(const ProductTangent& x) {
  Index n = 0;
  for (const auto& c : x) n += 2 * c.size();
  Eigen::VectorXd out(n);
  Index k = 0;
  for (const auto& c : x) {
    for (Index j = 0; j < c.cols(); ++j) {
      for (Index i = 0; i < c.rows(); ++i) {
        out[k++] = c(i, j).real();
        out[k++] = c(i, j).imag();
      }
    }
  }
  return out;
}

ProductTangent from_real_vector(const Eigen::VectorXd& v, const ProductTangent& shape) {
  ProductTangent out = zeros_like(shape);
  Index k = 0;
  for (auto& c : out) {
    for (Index j = 0; j < c.cols(); ++j) {
      for (Index i = 0; i < c.rows(); ++i) {
        c(i, j) = Complex(v[k], v[k + 1]);
        k += 2;
      }
    }
  }
  if (k != v.size()) throw DimensionError("from_real_vector: length mismatch");
  return out;
}

}  // namespace rqco
