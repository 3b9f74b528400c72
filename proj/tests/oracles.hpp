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


// Dense reference implementations used as independent oracles in tests.
// Nothing here calls the library kernels.

#ifndef RQCO_TESTS_ORACLES_HPP_
#define RQCO_TESTS_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "rqco/circuit.hpp"
#include "rqco/manifold.hpp"
#include "rqco/models.hpp"
#include "rqco/types.hpp"

namespace rqco::oracle {

inline int bit(std::uint64_t x, int k, int q) { return static_cast<int>((x >> (k - 1 - q)) & 1); }

// Permutation matrix sending qubits (a, b) to positions (0, 1), others kept
// in order behind them.
inline Eigen::MatrixXcd target_permutation(int k, int a, int b) {
  std::vector<int> order{a, b};
  for (int q = 0; q < k; ++q) {
    if (q != a && q != b) order.push_back(q);
  }
  const std::uint64_t dim = std::uint64_t{1} << k;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    std::uint64_t y = 0;
    for (int pos = 0; pos < k; ++pos) y |= std::uint64_t(bit(x, k, order[pos])) << (k - 1 - pos);
    p(static_cast<Index>(y), static_cast<Index>(x)) = 1.0;
  }
  return p;
}

// P^T (G x I) P.
inline Eigen::MatrixXcd embed_gate(int k, const Matrix4c& g, QubitPair t) {
  const Eigen::MatrixXcd p = target_permutation(k, t.first, t.second);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(Index{1} << (k - 2), Index{1} << (k - 2));
  const Eigen::MatrixXcd big = Eigen::kroneckerProduct(Eigen::MatrixXcd(g), id);
  return p.transpose() * big * p;
}

inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  const Index dim = Index{1} << c.num_qubits();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int s = 0; s < c.num_slots(); ++s) {
    u = embed_gate(c.num_qubits(), c.logical_gates()[c.slot(s).logical_id], c.slot(s).targets) * u;
  }
  return u;
}

// E(i, j) = sum over x, y with target bits (i) on x, (j) on y and equal
// environment bits of bra[x] * ket[y].
inline Matrix4c environment(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket, int k,
                            QubitPair t) {
  Matrix4c e = Matrix4c::Zero();
  const std::uint64_t dim = std::uint64_t{1} << k;
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t y = 0; y < dim; ++y) {
      bool same_env = true;
      for (int q = 0; q < k; ++q) {
        if (q != t.first && q != t.second && bit(x, k, q) != bit(y, k, q)) same_env = false;
      }
      if (!same_env) continue;
      const int i = 2 * bit(x, k, t.first) + bit(x, k, t.second);
      const int j = 2 * bit(y, k, t.first) + bit(y, k, t.second);
      e(i, j) += bra[static_cast<Index>(x)] * ket[static_cast<Index>(y)];
    }
  }
  return e;
}

// Single-site operator on qubit q of k.
inline Eigen::MatrixXcd site_operator(int k, int q, const Eigen::Matrix2cd& op) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int p = 0; p < k; ++p) {
    const Eigen::MatrixXcd f = p == q ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

inline Eigen::Matrix2cd lowering() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

inline Eigen::Matrix2cd number() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 1) = 1.0;
  return m;
}

// Hard-core boson chain built from single-site operators.
inline Eigen::MatrixXcd chain_hamiltonian(int k, const std::vector<QubitPair>& hops,
                                          double hop_coeff,
                                          const std::vector<QubitPair>& densities,
                                          double density_coeff) {
  const Index dim = Index{1} << k;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& b : hops) {
    const Eigen::MatrixXcd a1 = site_operator(k, b.first, lowering());
    const Eigen::MatrixXcd a2 = site_operator(k, b.second, lowering());
    h += hop_coeff * (a1.adjoint() * a2 + a2.adjoint() * a1);
  }
  for (const auto& b : densities) {
    h += density_coeff * site_operator(k, b.first, number()) * site_operator(k, b.second, number());
  }
  return h;
}

inline Eigen::MatrixXcd total_number(int k) {
  const Index dim = Index{1} << k;
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
  for (int q = 0; q < k; ++q) n += site_operator(k, q, number());
  return n;
}

inline Eigen::MatrixXcd global_parity(int k) {
  const Index dim = Index{1} << k;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (Index x = 0; x < dim; ++x) {
    p(x, x) = (__builtin_popcountll(static_cast<unsigned long long>(x)) % 2) ? -1.0 : 1.0;
  }
  return p;
}

// Holomorphic trace Tr[U^dagger C(G)] as a function of all logical gates.
inline Complex dense_trace(const Circuit& c, const Eigen::MatrixXcd& u) {
  return (u.adjoint() * circuit_unitary(c)).trace();
}

inline double dense_value(const Circuit& c, const Eigen::MatrixXcd& u) {
  return -dense_trace(c, u).real();
}

// Scalar central difference.
inline double central_difference(const std::function<double(double)>& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace rqco::oracle

#endif  // RQCO_TESTS_ORACLES_HPP_
