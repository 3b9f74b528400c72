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

// Fermi-Hubbard chains in hard-core boson form (Jordan-Wigner without
// Z-strings), Trotter circuits and target unitary oracles.

#ifndef RQCO_MODELS_HPP_
#define RQCO_MODELS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "rqco/circuit.hpp"
#include "rqco/objective.hpp"
#include "rqco/types.hpp"

namespace rqco {

enum class TwoSiteOperator {
  kHopping,         // |01><10| + |10><01|
  kDensityDensity,  // |11><11|
};

Matrix4c two_site_matrix(TwoSiteOperator op);

struct HamiltonianTerm {
  double coefficient = 0.0;
  TwoSiteOperator op = TwoSiteOperator::kHopping;
  QubitPair sites;
  // Trotter group; terms within a group commute.
  int group = 0;
};

enum class ModelKind { kSpinless, kSpinful };

struct HamiltonianSpec {
  ModelKind kind = ModelKind::kSpinless;
  int num_sites = 0;
  int num_qubits = 0;
  bool periodic = false;
  double J = 0.0;
  double U = 0.0;
  int num_groups = 0;
  std::vector<HamiltonianTerm> terms;
};

// -J sum (c+_j c_{j+1} + h.c.) + U sum n_j n_{j+1}, one qubit per site.
// Groups: 0 = bonds starting on even sites, 1 = bonds starting on odd sites.
HamiltonianSpec build_spinless_fh(int num_sites, double J, double U, bool periodic);

// Spin-up sites on qubits 0..L-1, spin-down on L..2L-1. Groups: 0 = even
// hopping bonds of both chains, 1 = odd hopping bonds, 2 = on-site
// interaction between qubits j and j+L.
HamiltonianSpec build_spinful_fh(int num_sites, double J, double U, bool periodic);

// h = -J hop + U nn on one pair of sites.
Matrix4c local_hamiltonian(double J, double U);

// exp(-i t h) for h = local_hamiltonian(J, U), in closed form.
Gate trotter_gate(double J, double U, double t, QubitPair targets = {0, 1});

struct TrotterLayer {
  int group = 0;
  double time = 0.0;
};

struct TrotterPlan {
  int order = 2;
  int steps = 1;
  double total_time = 0.0;
  std::vector<TrotterLayer> layers;
};

// Order 1: groups in order. Order 2: symmetric splitting with the last group
// in the middle. Order 4: fourth-order Suzuki composition of order-2 steps.
// Adjacent layers of the same group are merged.
TrotterPlan make_trotter_plan(int num_groups, int order, int steps, double total_time);

// One logical gate per plan layer, applied to every bond of its group.
// Even spinless chains use the brick-wall layout (translation metadata
// included when periodic).
Circuit build_trotter_circuit(const HamiltonianSpec& spec, const TrotterPlan& plan);

void hamiltonian_apply(const HamiltonianSpec& spec, const StateVector& in, StateVector& out);
StateVector hamiltonian_apply(const HamiltonianSpec& spec, const StateVector& in);

inline constexpr int kDenseQubitCap = 14;

MatrixXc dense_hamiltonian(const HamiltonianSpec& spec);

// exp(-i H t) |psi> by Lanczos with full reorthogonalization. The subspace
// grows until beta_m |[exp(-i T t) e_1]_m| falls below tolerance * ||psi||.
class KrylovOracle : public TargetUnitaryOracle {
 public:
  KrylovOracle(HamiltonianSpec spec, double t, double tolerance = 1e-12,
               int max_dimension = 256);

  int num_qubits() const override { return spec_.num_qubits; }
  void apply(const StateVector& in, StateVector& out) const override;
  void apply_adjoint(const StateVector& in, StateVector& out) const override;

 private:
  void evolve(const StateVector& in, double t, StateVector& out) const;

  HamiltonianSpec spec_;
  double t_;
  double tolerance_;
  int max_dimension_;
};

class KrylovNotConverged : public Error {
 public:
  using Error::Error;
};

enum class OracleMethod { kDense, kKrylov };

std::unique_ptr<TargetUnitaryOracle> make_oracle(const HamiltonianSpec& spec, double t,
                                                 OracleMethod method);

std::string to_string(ModelKind kind);

}  // namespace rqco

#endif  // RQCO_MODELS_HPP_
