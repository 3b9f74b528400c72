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

#include "rqco/circuit.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "rqco/kernels.hpp"

namespace rqco {

Circuit::Circuit(int num_qubits, std::vector<GateSlot> slots,
                 std::vector<Matrix4c> logical_gates,
                 std::optional<BrickwallMeta> topology)
    : num_qubits_(num_qubits),
      slots_(std::move(slots)),
      logical_gates_(std::move(logical_gates)),
      topology_(std::move(topology)) {
  if (num_qubits_ < 2) throw DimensionError("circuit needs at least two qubits");
  for (const auto& s : slots_) {
    if (s.logical_id < 0 || s.logical_id >= num_logical()) {
      throw DimensionError("slot references an unknown logical gate");
    }
    detail::normalize_targets(num_qubits_, s.targets);
  }
  parity_sparse_.reserve(logical_gates_.size());
  for (const auto& g : logical_gates_) {
    bool sparse = true;
    for (int e : {1, 2, 4, 7, 8, 11, 13, 14}) sparse = sparse && g(e / 4, e % 4) == Complex(0.0);
    parity_sparse_.push_back(sparse);
  }
  if (topology_) {
    if (topology_->layer_of_slot.size() != slots_.size()) {
      throw DimensionError("brick wall metadata does not cover every slot");
    }
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      const int layer = topology_->layer_of_slot[s];
      if (layer < 0 || layer >= topology_->num_layers) {
        throw DimensionError("brick wall layer index out of range");
      }
      if (slots_[s].logical_id != layer) {
        throw DimensionError("brick wall layers must share one logical gate");
      }
    }
  }
}

Gate Circuit::slot_gate(int s) const {
  const GateSlot& gs = slot(s);
  const auto l = static_cast<std::size_t>(gs.logical_id);
  return Gate{logical_gates_[l], gs.targets, parity_sparse_[l]};
}

std::vector<std::vector<int>> Circuit::slots_of_logical() const {
  std::vector<std::vector<int>> out(logical_gates_.size());
  for (int s = 0; s < num_slots(); ++s) {
    out[static_cast<std::size_t>(slot(s).logical_id)].push_back(s);
  }
  return out;
}

Circuit Circuit::with_gates(std::vector<Matrix4c> logical_gates) const {
  if (logical_gates.size() != logical_gates_.size()) {
    throw DimensionError("with_gates: logical gate count mismatch");
  }
  return Circuit(num_qubits_, slots_, std::move(logical_gates), topology_);
}

Circuit build_brickwall(int num_qubits, int num_layers,
                        const std::vector<Matrix4c>& initial_gates, bool periodic) {
  if (num_qubits < 2 || num_qubits % 2 != 0) {
    throw DimensionError("brick wall needs an even qubit count");
  }
  if (num_layers < 1 || static_cast<int>(initial_gates.size()) != num_layers) {
    throw DimensionError("brick wall: one initial gate per layer required");
  }
  if (periodic && num_qubits < 4) {
    throw DimensionError("periodic brick wall needs at least four qubits");
  }
  std::vector<GateSlot> slots;
  BrickwallMeta meta;
  meta.num_layers = num_layers;
  meta.periodic = periodic;
  for (int layer = 0; layer < num_layers; ++layer) {
    const int offset = layer % 2;
    for (int a = offset; a < num_qubits; a += 2) {
      const int b = a + 1;
      if (b == num_qubits && !periodic) break;
      slots.push_back({layer, {a, b % num_qubits}});
      meta.layer_of_slot.push_back(layer);
    }
  }
  return Circuit(num_qubits, std::move(slots), initial_gates, std::move(meta));
}

Circuit build_layered(int num_qubits, const std::vector<std::vector<QubitPair>>& layers,
                      const std::vector<Matrix4c>& gates) {
  if (layers.size() != gates.size()) {
    throw DimensionError("build_layered: one gate per layer required");
  }
  std::vector<GateSlot> slots;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (const auto& bond : layers[l]) slots.push_back({static_cast<int>(l), bond});
  }
  return Circuit(num_qubits, std::move(slots), gates);
}

StateVector circuit_apply(const Circuit& circuit, const StateVector& state,
                          Direction direction) {
  if (state.num_qubits() != circuit.num_qubits()) {
    throw DimensionError("circuit_apply: qubit count mismatch");
  }
  StateVector cur = state;
  StateVector next(state.num_qubits());
  const int n = circuit.num_slots();
  for (int i = 0; i < n; ++i) {
    Gate g = circuit.slot_gate(direction == Direction::kForward ? i : n - 1 - i);
    if (direction == Direction::kBackwardTransposed) g.matrix.transposeInPlace();
    apply_gate(cur, g, next);
    std::swap(cur, next);
  }
  return cur;
}

std::vector<Matrix4c> accumulate_shared(const std::vector<Matrix4c>& per_slot,
                                        const Circuit& circuit) {
  if (static_cast<int>(per_slot.size()) != circuit.num_slots()) {
    throw DimensionError("accumulate_shared: one matrix per slot required");
  }
  std::vector<Matrix4c> out(static_cast<std::size_t>(circuit.num_logical()),
                            Matrix4c::Zero());
  for (int s = 0; s < circuit.num_slots(); ++s) {
    out[static_cast<std::size_t>(circuit.slot(s).logical_id)] +=
        per_slot[static_cast<std::size_t>(s)];
  }
  return out;
}

int translate_slot(const Circuit& circuit, int slot, int sites) {
  const auto& topo = circuit.topology();
  if (!topo) throw Error("translate_slot: circuit has no brick wall topology");
  const int L = circuit.num_qubits();
  const auto& src = circuit.slot(slot);
  const int layer = topo->layer_of_slot[static_cast<std::size_t>(slot)];
  const int shift = ((sites % L) + L) % L;
  const QubitPair want{(src.targets.first + shift) % L,
                       (src.targets.second + shift) % L};
  for (int s = 0; s < circuit.num_slots(); ++s) {
    if (topo->layer_of_slot[static_cast<std::size_t>(s)] == layer &&
        circuit.slot(s).targets == want) {
      return s;
    }
  }
  return -1;
}

std::vector<TranslationClass> translation_classes(const Circuit& circuit,
                                                  RepresentativePolicy policy) {
  if (!circuit.is_periodic_brickwall()) {
    throw Error("translation_classes requires a periodic brick-wall circuit");
  }
  const int L = circuit.num_qubits();
  const int period = circuit.topology()->translation_period;
  const int n = circuit.num_slots();
  // shift_map[r][s]: slot reached from s by r * period sites.
  const int group_order = L / period;
  std::vector<std::vector<int>> shift_map(static_cast<std::size_t>(group_order));
  for (int r = 0; r < group_order; ++r) {
    auto& m = shift_map[static_cast<std::size_t>(r)];
    m.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      const int t = translate_slot(circuit, s, r * period);
      if (t < 0) throw Error("circuit is not translation invariant");
      m[static_cast<std::size_t>(s)] = t;
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::vector<TranslationClass> classes;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (seen[static_cast<std::size_t>(a * n + b)]) continue;
      std::vector<std::pair<int, int>> orbit;
      for (const auto& m : shift_map) {
        int x = m[static_cast<std::size_t>(a)], y = m[static_cast<std::size_t>(b)];
        if (x > y) std::swap(x, y);
        auto& flag = seen[static_cast<std::size_t>(x * n + y)];
        if (!flag) {
          flag = 1;
          orbit.emplace_back(x, y);
        }
      }
      const auto rep = policy == RepresentativePolicy::kLexicographicMin
                           ? *std::min_element(orbit.begin(), orbit.end())
                           : *std::max_element(orbit.begin(), orbit.end());
      classes.push_back({rep.first, rep.second, static_cast<int>(orbit.size())});
    }
  }
  std::sort(classes.begin(), classes.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });
  return classes;
}

}  // namespace rqco
