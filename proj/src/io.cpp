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

#include "rqco/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "rqco/random.hpp"

namespace rqco {
namespace {

Json matrix_to_json(const Matrix4c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 4; ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix4c matrix_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw Error("checkpoint: matrix must have 4 rows");
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) throw Error("checkpoint: matrix rows need 4 entries");
    for (int k = 0; k < 4; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error("checkpoint: matrix entries are [re, im] pairs");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

Json circuit_to_json(const Circuit& circuit) {
  Json j;
  j["num_qubits"] = circuit.num_qubits();
  const auto& topo = circuit.topology();
  j["layers"] = topo ? topo->num_layers : circuit.num_logical();
  j["periodic"] = topo ? topo->periodic : false;
  Json gates = Json::array();
  for (int s = 0; s < circuit.num_slots(); ++s) {
    const GateSlot& slot = circuit.slot(s);
    gates.push_back({{"targets", {slot.targets.first, slot.targets.second}},
                     {"matrix", matrix_to_json(circuit.logical_gates()[slot.logical_id])},
                     {"logical", slot.logical_id}});
  }
  j["gates"] = std::move(gates);
  if (topo) {
    j["topology"] = {{"layer_of_slot", topo->layer_of_slot},
                     {"translation_period", topo->translation_period}};
  }
  return j;
}

Circuit circuit_from_json(const Json& j) {
  if (!j.is_object()) throw Error("checkpoint: expected an object");
  for (const char* key : {"num_qubits", "gates"}) {
    if (!j.contains(key)) throw Error(std::string("checkpoint: missing \"") + key + "\"");
  }
  const int k = j.at("num_qubits").get<int>();
  const Json& gates = j.at("gates");
  if (!gates.is_array()) throw Error("checkpoint: \"gates\" must be an array");

  std::vector<GateSlot> slots;
  std::vector<Matrix4c> logical;
  std::vector<bool> assigned;
  for (const Json& g : gates) {
    const auto targets = g.at("targets").get<std::vector<int>>();
    if (targets.size() != 2) throw Error("checkpoint: targets must be a pair");
    const Matrix4c m = matrix_from_json(g.at("matrix"));
    const int id = g.contains("logical") ? g.at("logical").get<int>()
                                         : static_cast<int>(logical.size());
    if (id < 0) throw Error("checkpoint: negative logical id");
    const auto u = static_cast<std::size_t>(id);
    if (u >= logical.size()) {
      logical.resize(u + 1);
      assigned.resize(u + 1, false);
    }
    if (!assigned[u]) {
      logical[u] = m;
      assigned[u] = true;
    } else if (logical[u] != m) {
      throw Error("checkpoint: slots of one logical gate carry different matrices");
    }
    slots.push_back({id, {targets[0], targets[1]}});
  }
  for (bool a : assigned) {
    if (!a) throw Error("checkpoint: logical ids are not contiguous");
  }

  std::optional<BrickwallMeta> topology;
  if (j.contains("topology")) {
    const Json& t = j.at("topology");
    BrickwallMeta meta;
    meta.num_layers = j.at("layers").get<int>();
    meta.periodic = j.at("periodic").get<bool>();
    meta.layer_of_slot = t.at("layer_of_slot").get<std::vector<int>>();
    meta.translation_period = t.value("translation_period", 2);
    topology = std::move(meta);
  }
  return Circuit(k, std::move(slots), std::move(logical), std::move(topology));
}

void write_checkpoint(const std::filesystem::path& path, const Circuit& circuit) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << circuit_to_json(circuit).dump(1) << '\n';
}

Circuit read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return circuit_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw Error("not a number: \"" + s + "\"");
  return x;
}

namespace {

constexpr const char* kTraceHeader =
    "iter,f,error_frobenius,grad_norm,radius,rho,step_norm,inner_iters,accepted,seconds";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const OptimizationTrace& trace) {
  out << kTraceSchema << " stop=" << to_string(trace.stop) << '\n' << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_double(r.f) << ',' << format_double(r.error_frobenius) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.radius) << ','
        << format_double(r.rho) << ',' << format_double(r.step_norm) << ',' << r.inner_iters
        << ',' << (r.accepted ? 1 : 0) << ',' << format_double(r.seconds) << '\n';
  }
}

std::vector<IterationRecord> parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kTraceSchema, 0) != 0) {
    throw Error("trace: missing schema line \"" + std::string(kTraceSchema) + "\"");
  }
  if (!std::getline(in, line) || line != kTraceHeader) throw Error("trace: unexpected header");
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 10) throw Error("trace: expected 10 columns in \"" + line + "\"");
    IterationRecord r;
    r.iter = std::stoi(c[0]);
    r.f = parse_double(c[1]);
    r.error_frobenius = parse_double(c[2]);
    r.grad_norm = parse_double(c[3]);
    r.radius = parse_double(c[4]);
    r.rho = parse_double(c[5]);
    r.step_norm = parse_double(c[6]);
    r.inner_iters = std::stoi(c[7]);
    if (c[8] != "0" && c[8] != "1") throw Error("trace: accepted must be 0 or 1");
    r.accepted = c[8] == "1";
    r.seconds = parse_double(c[9]);
    out.push_back(r);
  }
  return out;
}

// Run configuration.

namespace {

class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object", path_);
  }

  template <typename T>
  bool read(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return false;
    const Json& v = j_.at(key);
    const std::string k = child(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(k + " must be a boolean", k);
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(k + " must be an integer", k);
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() == false && v.get<long long>() < 0) {
          throw ConfigError(k + " must be non-negative", k);
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(k + " must be a number", k);
    } else {
      if (!v.is_string()) throw ConfigError(k + " must be a string", k);
    }
    out = v.get<T>();
    return true;
  }

  const Json* object(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + child(key.c_str()), child(key.c_str()));
    }
  }

  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key + " " + message, key);
}

ModelConfig parse_model(const Json& j) {
  ObjectReader r(j, "model");
  ModelConfig m;
  std::string kind = "spinless_fh", oracle = "dense";
  r.read("model", kind);
  if (kind == "spinless_fh") {
    m.kind = ModelKind::kSpinless;
  } else if (kind == "spinful_fh") {
    m.kind = ModelKind::kSpinful;
  } else {
    throw ConfigError("model.model must be \"spinless_fh\" or \"spinful_fh\"", "model.model");
  }
  r.read("L", m.L);
  r.read("J", m.J);
  r.read("U", m.U);
  r.read("periodic", m.periodic);
  r.read("t", m.t);
  r.read("oracle", oracle);
  if (oracle == "dense") {
    m.oracle = OracleMethod::kDense;
  } else if (oracle == "krylov") {
    m.oracle = OracleMethod::kKrylov;
  } else {
    throw ConfigError("model.oracle must be \"dense\" or \"krylov\"", "model.oracle");
  }
  r.finish();
  require(m.L >= 2, "model.L", "must be at least 2");
  const int k = m.kind == ModelKind::kSpinful ? 2 * m.L : m.L;
  require(k <= 30, "model.L", "is too large");
  require(m.oracle != OracleMethod::kDense || k <= kDenseQubitCap, "model.oracle",
          "dense needs at most " + std::to_string(kDenseQubitCap) + " qubits");
  require(std::isfinite(m.J) && std::isfinite(m.U) && std::isfinite(m.t), "model",
          "J, U and t must be finite");
  return m;
}

CircuitConfig parse_circuit(const Json& j) {
  ObjectReader r(j, "circuit");
  CircuitConfig c;
  std::string init = "trotter";
  r.read("init", init);
  if (init == "trotter") {
    c.init = InitKind::kTrotter;
  } else if (init == "file") {
    c.init = InitKind::kFile;
  } else if (init == "random") {
    c.init = InitKind::kRandom;
  } else {
    throw ConfigError("circuit.init must be \"trotter\", \"file\" or \"random\"", "circuit.init");
  }
  r.read("order", c.order);
  r.read("steps", c.steps);
  int layers = 0;
  if (r.read("layers", layers)) c.layers = layers;
  r.read("file", c.file);
  r.read("seed", c.seed);
  r.finish();
  require(c.order == 1 || c.order == 2 || c.order == 4, "circuit.order", "must be 1, 2 or 4");
  require(c.steps >= 1, "circuit.steps", "must be positive");
  require(!c.layers || *c.layers >= 1, "circuit.layers", "must be positive");
  require(c.init != InitKind::kFile || !c.file.empty(), "circuit.file",
          "is required when circuit.init is \"file\"");
  return c;
}

TrustRegionParams parse_optimizer(const Json& j) {
  ObjectReader r(j, "optimizer");
  TrustRegionParams p;
  r.read("initial_radius", p.initial_radius);
  r.read("max_radius", p.max_radius);
  r.read("accept_threshold", p.accept_threshold);
  r.read("shrink_threshold", p.shrink_threshold);
  r.read("expand_threshold", p.expand_threshold);
  r.read("shrink_factor", p.shrink_factor);
  r.read("expand_factor", p.expand_factor);
  r.read("max_iterations", p.max_iterations);
  r.read("gradient_norm_tolerance", p.gradient_norm_tolerance);
  r.read("min_radius", p.min_radius);
  r.read("use_hvp", p.use_hvp);
  if (const Json* t = r.object("tcg")) {
    ObjectReader tr(*t, "optimizer.tcg");
    tr.read("kappa", p.tcg.kappa);
    tr.read("theta", p.tcg.theta);
    tr.read("max_inner", p.tcg.max_inner);
    tr.finish();
  }
  r.finish();
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("optimizer: ") + e.what(), "optimizer");
  }
  return p;
}

ExecutionConfig parse_execution(const Json& j) {
  ObjectReader r(j, "execution");
  ExecutionConfig e;
  r.read("workers", e.workers);
  r.read("parity_mode", e.parity_mode);
  r.read("translation_dedup", e.translation_dedup);
  r.finish();
  require(e.workers >= 1, "execution.workers", "must be positive");
  return e;
}

}  // namespace

RunConfig parse_run_config(const Json& j) {
  ObjectReader r(j, "");
  RunConfig c;
  const Json* model = r.object("model");
  if (!model) throw ConfigError("missing required key model", "model");
  c.model = parse_model(*model);
  if (const Json* v = r.object("circuit")) c.circuit = parse_circuit(*v);
  if (const Json* v = r.object("optimizer")) c.optimizer = parse_optimizer(*v);
  if (const Json* v = r.object("execution")) c.execution = parse_execution(*v);
  if (const Json* v = r.object("output")) {
    ObjectReader o(*v, "output");
    o.read("dir", c.output_dir);
    o.finish();
  }
  r.finish();
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

HamiltonianSpec build_model(const ModelConfig& m) {
  return m.kind == ModelKind::kSpinless ? build_spinless_fh(m.L, m.J, m.U, m.periodic)
                                        : build_spinful_fh(m.L, m.J, m.U, m.periodic);
}

Circuit build_initial_circuit(const RunConfig& config, const HamiltonianSpec& spec) {
  const CircuitConfig& cc = config.circuit;
  Circuit circuit;
  if (cc.init == InitKind::kFile) {
    circuit = read_checkpoint(cc.file);
    if (circuit.num_qubits() != spec.num_qubits) {
      throw ConfigError("circuit.file has " + std::to_string(circuit.num_qubits()) +
                            " qubits, model needs " + std::to_string(spec.num_qubits),
                        "circuit.file");
    }
  } else {
    const auto plan = make_trotter_plan(spec.num_groups, cc.order, cc.steps, config.model.t);
    circuit = build_trotter_circuit(spec, plan);
    if (cc.init == InitKind::kRandom) {
      Rng rng(cc.seed);
      circuit = circuit.with_gates(config.execution.parity_mode
                                       ? random_parity_gates(circuit.num_logical(), rng)
                                       : random_gates(circuit.num_logical(), rng));
    }
  }
  if (cc.layers && *cc.layers != circuit.num_logical()) {
    throw ConfigError("circuit.layers is " + std::to_string(*cc.layers) + " but the circuit has " +
                          std::to_string(circuit.num_logical()) + " logical layers",
                      "circuit.layers");
  }
  return circuit;
}

}  // namespace rqco
