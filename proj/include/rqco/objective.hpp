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

// Matrix-free evaluation of f(G) = -Re Tr[U^dagger C(G)] as a sum over
// computational basis states, with gradients from cached forward/backward
// passes and Hessians from second forward passes of gate-hole arrays.
//
// Derivatives are first computed for the holomorphic trace
// f~(G) = Tr[U^dagger C(G)] treating gates as general complex matrices;
// conversion to the real objective happens through -conj(.).

#ifndef RQCO_OBJECTIVE_HPP_
#define RQCO_OBJECTIVE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "rqco/circuit.hpp"
#include "rqco/manifold.hpp"
#include "rqco/types.hpp"

namespace rqco {

// Matrix-free action of the target unitary. Implementations must allow
// concurrent calls from several workers.
class TargetUnitaryOracle {
 public:
  virtual ~TargetUnitaryOracle() = default;
  virtual int num_qubits() const = 0;
  virtual void apply(const StateVector& in, StateVector& out) const = 0;
  virtual void apply_adjoint(const StateVector& in, StateVector& out) const = 0;
  // out = U|j>.
  virtual void apply_basis(std::uint64_t j, StateVector& out) const;
};

class DenseUnitaryOracle : public TargetUnitaryOracle {
 public:
  explicit DenseUnitaryOracle(MatrixXc unitary);

  int num_qubits() const override { return num_qubits_; }
  void apply(const StateVector& in, StateVector& out) const override;
  void apply_adjoint(const StateVector& in, StateVector& out) const override;
  void apply_basis(std::uint64_t j, StateVector& out) const override;
  const MatrixXc& matrix() const { return unitary_; }

 private:
  int num_qubits_ = 0;
  MatrixXc unitary_;
};

// Kernel invocation counters. Per basis state a gradient pass performs
// n forward and n backward gate applications and n hole contractions.
struct PassCounts {
  std::uint64_t gate_applications = 0;
  std::uint64_t hole_contractions = 0;
  std::uint64_t hole_applications = 0;
  std::uint64_t array_gate_applications = 0;
  std::uint64_t array_contractions = 0;
  std::uint64_t oracle_applications = 0;
  std::uint64_t basis_states = 0;
  // Amplitude-level work: statevector length times logical vectors touched.
  std::uint64_t amplitude_work = 0;

  PassCounts& operator+=(const PassCounts& o);
};

// Second derivatives of the holomorphic trace with respect to pairs of
// logical gates, restricted to `entries` of each gate. Blocks (a, b) with
// a <= b are stored; block (b, a) is the transpose of (a, b).
class HessianBlocks {
 public:
  HessianBlocks() = default;
  HessianBlocks(int num_logical, std::vector<int> entries);

  int num_logical() const { return num_logical_; }
  int block_dim() const { return static_cast<int>(entries_.size()); }
  const std::vector<int>& entries() const { return entries_; }

  MatrixXc& block(int a, int b);
  const MatrixXc& block(int a, int b) const;
  // Any (a, b), transposing the stored block when a > b.
  MatrixXc full_block(int a, int b) const;

  // y = H~ x on coordinates laid out gate by gate in entries order.
  VectorXc apply(const VectorXc& x) const;
  MatrixXc dense() const;

 private:
  std::size_t packed(int a, int b) const;

  int num_logical_ = 0;
  std::vector<int> entries_;
  std::vector<MatrixXc> blocks_;
};

enum class HessianStrategy {
  kAuto,        // per-slot passes with translation dedup, per-gate otherwise
  kPerSlot,     // one hole-array pass per slot (optionally deduplicated)
  kPerLogical,  // one pass per logical gate, holes of shared slots summed
};

struct ObjectiveOptions {
  int workers = 1;
  GateStructure structure = GateStructure::kDense;
  bool translation_dedup = false;
  HessianStrategy hessian_strategy = HessianStrategy::kAuto;
};

struct ObjectiveReport {
  double value = 0.0;
  // ||C - U||_F^2 summed directly over basis columns.
  double error_sq = 0.0;
  // Per logical gate: sum over basis states of the holomorphic derivative.
  std::vector<Matrix4c> holomorphic_gradient;
  ProductTangent euclidean_gradient;
  ProductTangent riemannian_gradient;
  std::optional<HessianBlocks> hessian;
  PassCounts counts;
  double seconds = 0.0;

  double riemannian_gradient_norm() const { return product_norm(riemannian_gradient); }
};

// Intermediate states of one summand: forward_states[i] is the state after the
// first i slots applied to |j>, backward_states[m] the state after the last m
// slots' transposes applied to (U|j>)^*.
struct PassCache {
  std::vector<StateVector> forward_states;
  std::vector<StateVector> backward_states;
  StateVector target_column;  // U|j>
};

void build_pass_cache(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                      std::uint64_t j, PassCache& cache, PassCounts* counts = nullptr);

struct SummandGradient {
  Complex value;                         // <j|U^dagger C(G)|j>
  std::vector<Matrix4c> slot_derivatives;  // d value / d G_slot
  PassCounts counts;
};

SummandGradient summand_gradient(std::uint64_t j, const Circuit& circuit,
                                 const TargetUnitaryOracle& oracle);

struct ValueReport {
  double value = 0.0;
  double error_sq = 0.0;
  PassCounts counts;
};

ValueReport evaluate_value(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                           int workers = 1);
double target_value(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                    int workers = 1);

ObjectiveReport evaluate(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                         const ObjectiveOptions& options, bool with_hessian);
ObjectiveReport full_gradient(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                              const ObjectiveOptions& options = {});
HessianBlocks full_hessian(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                           const ObjectiveOptions& options = {});

// Holomorphic Hessian-vector product H~ vec(Z) per logical gate, at a cost of
// O(n) gate applications per basis state. In parity mode only the
// on-pattern entries of Z are used and returned.
std::vector<Matrix4c> hessian_vector_product(const Circuit& circuit,
                                             const TargetUnitaryOracle& oracle,
                                             const std::vector<Matrix4c>& directions,
                                             const ObjectiveOptions& options = {});

// Number of slot-pair hole contractions per basis state for the chosen
// Hessian strategy.
std::uint64_t hessian_pair_count(const Circuit& circuit, const ObjectiveOptions& options);

}  // namespace rqco

#endif  // RQCO_OBJECTIVE_HPP_
