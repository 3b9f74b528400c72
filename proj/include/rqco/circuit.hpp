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

#ifndef RQCO_CIRCUIT_HPP_
#define RQCO_CIRCUIT_HPP_

#include <optional>
#include <vector>

#include "rqco/types.hpp"

namespace rqco {

// One application of a logical gate. Several slots may share a logical gate.
struct GateSlot {
  int logical_id = 0;
  QubitPair targets;
};

struct BrickwallMeta {
  int num_layers = 0;
  std::vector<int> layer_of_slot;
  int translation_period = 2;
  bool periodic = true;
};

// Sequential two-qubit circuit C(G) = G_n ... G_1: slot 0 acts first.
//
// Immutable after construction; the gate-update helpers return new circuits.
class Circuit {
 public:
  Circuit() = default;
  Circuit(int num_qubits, std::vector<GateSlot> slots,
          std::vector<Matrix4c> logical_gates,
          std::optional<BrickwallMeta> topology = std::nullopt);

  int num_qubits() const { return num_qubits_; }
  int num_slots() const { return static_cast<int>(slots_.size()); }
  int num_logical() const { return static_cast<int>(logical_gates_.size()); }
  const std::vector<GateSlot>& slots() const { return slots_; }
  const GateSlot& slot(int s) const { return slots_[static_cast<std::size_t>(s)]; }
  const std::vector<Matrix4c>& logical_gates() const { return logical_gates_; }
  const std::optional<BrickwallMeta>& topology() const { return topology_; }
  bool is_periodic_brickwall() const {
    return topology_.has_value() && topology_->periodic;
  }

  Gate slot_gate(int s) const;
  // Slot indices of each logical gate, ascending.
  std::vector<std::vector<int>> slots_of_logical() const;

  Circuit with_gates(std::vector<Matrix4c> logical_gates) const;

 private:
  int num_qubits_ = 0;
  std::vector<GateSlot> slots_;
  std::vector<Matrix4c> logical_gates_;
  // Exact zeros on the off-parity pattern; selects the sparse kernel path.
  std::vector<bool> parity_sparse_;
  std::optional<BrickwallMeta> topology_;
};

// Sequentialized brick wall: layer 0 on bonds (0,1),(2,3),...; layer 1 on
// (1,2),(3,4),... and (L-1,0) when periodic. All slots of a layer share the
// logical gate of that layer.
Circuit build_brickwall(int num_qubits, int num_layers,
                        const std::vector<Matrix4c>& initial_gates, bool periodic);

// General layered circuit: one logical gate per layer, applied to the listed
// bonds in order.
Circuit build_layered(int num_qubits, const std::vector<std::vector<QubitPair>>& layers,
                      const std::vector<Matrix4c>& gates);

enum class Direction {
  kForward,            // slots in order with G
  kBackwardTransposed  // slots in reverse order with G^T (not conjugated)
};

StateVector circuit_apply(const Circuit& circuit, const StateVector& state,
                          Direction direction = Direction::kForward);

// Logical gradient = sum of slot gradients over the slots sharing the gate.
std::vector<Matrix4c> accumulate_shared(const std::vector<Matrix4c>& per_slot,
                                        const Circuit& circuit);

struct TranslationClass {
  int first = 0;   // representative slot pair, first < second
  int second = 0;
  int multiplicity = 0;
};

// Slot reached from `slot` by a cyclic shift of `sites` lattice sites within
// the same layer, or -1 when no such slot exists.
int translate_slot(const Circuit& circuit, int slot, int sites);

enum class RepresentativePolicy { kLexicographicMin, kLexicographicMax };

// Orbits of the slot pairs (s < s') under simultaneous cyclic translation by
// multiples of the brick-wall period. Requires a periodic brick wall.
std::vector<TranslationClass> translation_classes(
    const Circuit& circuit,
    RepresentativePolicy policy = RepresentativePolicy::kLexicographicMin);

}  // namespace rqco

#endif  // RQCO_CIRCUIT_HPP_
