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


// Seeded pseudo-random gates and states.

#ifndef RQCO_RANDOM_HPP_
#define RQCO_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "rqco/manifold.hpp"
#include "rqco/types.hpp"

namespace rqco {

using Rng = std::mt19937_64;

// Complex Gaussian matrix with unit-variance entries.
MatrixXc random_gaussian(Index rows, Index cols, Rng& rng);

// Q from the QR decomposition of a Gaussian matrix, with the phases of R's
// diagonal moved into Q.
MatrixXc random_unitary(Index m, Rng& rng);

std::vector<Matrix4c> random_gates(int count, Rng& rng);

// Product of independent random U(2) blocks on the parity pattern.
std::vector<Matrix4c> random_parity_gates(int count, Rng& rng);

// Normalized Gaussian state.
StateVector random_state(int num_qubits, Rng& rng);

// Tangent vector at `point` with Gaussian ambient direction, projected.
ProductTangent random_tangent(const ProductPoint& point, Rng& rng);

}  // namespace rqco

#endif  // RQCO_RANDOM_HPP_
