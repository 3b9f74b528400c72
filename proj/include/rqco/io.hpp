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

// File formats: circuit checkpoints (JSON), optimization traces (CSV) and
// run configurations (JSON, schema-checked).

#ifndef RQCO_IO_HPP_
#define RQCO_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rqco/circuit.hpp"
#include "rqco/models.hpp"
#include "rqco/optimizer.hpp"

namespace rqco {

using Json = nlohmann::json;

// Checkpoint layout:
//   {"num_qubits", "layers", "periodic",
//    "gates": [{"targets": [a, b], "matrix": 4x4 of [re, im], "logical": id}],
//    "topology": {"layer_of_slot": [...], "translation_period": p}}
// One "gates" entry per slot. "logical" and "topology" are optional; without
// "logical" every slot gets its own gate. Doubles are written in shortest
// round-trip form, so write/read is bit-exact.
Json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const Json& j);
void write_checkpoint(const std::filesystem::path& path, const Circuit& circuit);
Circuit read_checkpoint(const std::filesystem::path& path);

inline constexpr const char* kTraceSchema = "# rqco-trace v1";
inline constexpr const char* kBenchSchema = "# rqco-bench v1";

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace);
std::vector<IterationRecord> parse_trace_csv(std::istream& in);

// Shortest decimal that parses back to the same double ("nan", "inf" allowed).
std::string format_double(double x);
double parse_double(const std::string& s);

// Config and usage errors; `key` names the offending entry when known.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string key = {})
      : Error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ModelConfig {
  ModelKind kind = ModelKind::kSpinless;
  int L = 6;
  double J = 1.0;
  double U = 4.0;
  bool periodic = true;
  double t = 0.25;
  OracleMethod oracle = OracleMethod::kDense;
};

enum class InitKind { kTrotter, kFile, kRandom };

struct CircuitConfig {
  InitKind init = InitKind::kTrotter;
  int order = 2;
  int steps = 1;
  // Expected logical layer count; checked against the built circuit.
  std::optional<int> layers;
  std::string file;
  std::uint64_t seed = 0;
};

struct ExecutionConfig {
  int workers = 1;
  bool parity_mode = false;
  bool translation_dedup = false;
};

struct RunConfig {
  ModelConfig model;
  CircuitConfig circuit;
  TrustRegionParams optimizer;
  ExecutionConfig execution;
  std::string output_dir = "out";
};

// Rejects unknown keys, wrong types and out-of-range values with ConfigError.
RunConfig parse_run_config(const Json& j);
RunConfig read_run_config(const std::filesystem::path& path);

HamiltonianSpec build_model(const ModelConfig& model);
// Topology from the Trotter plan; gates from the plan, a checkpoint, or random.
Circuit build_initial_circuit(const RunConfig& config, const HamiltonianSpec& spec);

}  // namespace rqco

#endif  // RQCO_IO_HPP_
