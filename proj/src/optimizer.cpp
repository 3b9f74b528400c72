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


#include "rqco/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace rqco {

namespace {

bool all_finite(const ProductTangent& x) {
  for (const auto& c : x) {
    if (!c.allFinite()) return false;
  }
  return true;
}

// tau >= 0 with ||eta + tau * delta|| = radius.
double boundary_root(const ProductTangent& eta, const ProductTangent& delta, double radius) {
  const double ed = product_inner(eta, delta);
  const double dd = product_inner(delta, delta);
  const double ee = product_inner(eta, eta);
  const double disc = ed * ed + dd * (radius * radius - ee);
  return (-ed + std::sqrt(std::max(disc, 0.0))) / dd;
}

int tangent_dimension(const ProductPoint& point) {
  int d = 0;
  for (const auto& c : point) d += static_cast<int>(c.rows() * c.rows());
  return d;
}

}  // namespace

void TrustRegionParams::validate() const {
  if (!(initial_radius >= 0.0) || !(max_radius >= 0.0)) throw Error("radii must be non-negative");
  if (initial_radius > 0.0 && max_radius > 0.0 && max_radius < initial_radius) {
    throw Error("max_radius below initial_radius");
  }
  if (!(0.0 < accept_threshold && accept_threshold < shrink_threshold &&
        shrink_threshold < expand_threshold && expand_threshold < 1.0)) {
    throw Error("need 0 < accept < shrink < expand < 1 thresholds");
  }
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0) || !(expand_factor > 1.0)) {
    throw Error("bad radius factors");
  }
  if (max_iterations < 0 || tcg.max_inner < 0) throw Error("iteration limits must be >= 0");
  if (!(gradient_norm_tolerance >= 0.0) || !(min_radius > 0.0)) throw Error("bad tolerances");
  if (!(tcg.kappa > 0.0) || !(tcg.theta >= 0.0)) throw Error("bad tCG parameters");
}

TcgResult truncated_cg(const HessianOperator& hess, const ProductTangent& grad, double radius,
                       const TcgParams& params) {
  TcgResult out;
  out.step = zeros_like(grad);
  out.hess_step = zeros_like(grad);
  const double r0 = product_norm(grad);
  if (r0 == 0.0) return out;
  if (!(radius > 0.0)) throw Error("truncated_cg: radius must be positive");
  int max_inner = params.max_inner;
  if (max_inner <= 0) max_inner = static_cast<int>(to_real_vector(grad).size());
  const double target =
      std::max(r0 * std::min(std::pow(r0, params.theta), params.kappa), params.residual_floor);

  ProductTangent r = grad;
  ProductTangent delta = scaled(-1.0, grad);
  double rr = r0 * r0;
  auto& eta = out.step;
  auto& heta = out.hess_step;
  for (int j = 0; j < max_inner; ++j) {
    const ProductTangent hdelta = hess(delta);
    if (!all_finite(hdelta)) throw Error("truncated_cg: non-finite Hessian application");
    const double curvature = product_inner(delta, hdelta);
    const double alpha = rr / curvature;
    ProductTangent trial = eta;
    axpy(alpha, delta, trial);
    out.iterations = j + 1;
    if (curvature <= 0.0 || product_norm(trial) >= radius) {
      const double tau = boundary_root(eta, delta, radius);
      axpy(tau, delta, eta);
      axpy(tau, hdelta, heta);
      out.stop = curvature <= 0.0 ? TcgStop::kNegativeCurvature : TcgStop::kExceededRadius;
      out.on_boundary = true;
      return out;
    }
    eta = std::move(trial);
    axpy(alpha, hdelta, heta);
    axpy(alpha, hdelta, r);
    const double rr_new = product_inner(r, r);
    if (std::sqrt(rr_new) <= target) {
      out.stop = TcgStop::kResidual;
      return out;
    }
    ProductTangent next = scaled(rr_new / rr, delta);
    axpy(-1.0, r, next);
    delta = std::move(next);
    rr = rr_new;
  }
  out.stop = TcgStop::kMaxInner;
  return out;
}

double model_change(const ProductTangent& grad, const ProductTangent& step,
                    const ProductTangent& hess_step) {
  return product_inner(grad, step) + 0.5 * product_inner(step, hess_step);
}

std::vector<Matrix4c> component_directions(const ProductTangent& x, GateStructure structure) {
  std::vector<Matrix4c> out;
  const std::size_t per = static_cast<std::size_t>(components_per_gate(structure));
  for (std::size_t i = 0; i < x.size(); i += per) {
    out.push_back(structure == GateStructure::kDense ? Matrix4c(x[i])
                                                     : parity_join(x[i], x[i + 1]));
  }
  return out;
}

HessianOperator riemannian_hessian(const ProductPoint& point,
                                   const ProductTangent& euclidean_gradient,
                                   const HessianBlocks& blocks, GateStructure structure) {
  return [&point, &euclidean_gradient, &blocks, structure](const ProductTangent& x) {
    const VectorXc hx = blocks.apply(flatten_coordinates(x, structure));
    const ProductTangent dg = unflatten_coordinates(-hx.conjugate(), structure);
    ProductTangent out;
    out.reserve(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
      out.push_back(riemannian_hessian_apply(point[c], euclidean_gradient[c], dg[c], x[c]));
    }
    return out;
  };
}

HessianOperator riemannian_hessian_hvp(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                                       const ProductPoint& point,
                                       const ProductTangent& euclidean_gradient,
                                       const ObjectiveOptions& options) {
  return [&circuit, &oracle, &point, &euclidean_gradient, options](const ProductTangent& x) {
    const auto hz = hessian_vector_product(circuit, oracle,
                                           component_directions(x, options.structure), options);
    std::vector<Matrix4c> dg_gates;
    dg_gates.reserve(hz.size());
    for (const auto& m : hz) dg_gates.push_back(euclid_gradient_from_holomorphic(m));
    const ProductTangent dg = restrict_to_components(dg_gates, options.structure);
    ProductTangent out;
    out.reserve(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
      out.push_back(riemannian_hessian_apply(point[c], euclidean_gradient[c], dg[c], x[c]));
    }
    return out;
  };
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kGradientTolerance:
      return "gradient_tolerance";
    case StopReason::kMaxIterations:
      return "max_iterations";
    case StopReason::kRadiusUnderflow:
      return "radius_underflow";
  }
  return "unknown";
}

OptimizationResult trust_region_optimize(const Circuit& circuit,
                                         const TargetUnitaryOracle& oracle,
                                         const TrustRegionParams& params,
                                         const ObjectiveOptions& options) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const GateStructure structure = options.structure;

  OptimizationResult result{circuit, {}};
  ProductPoint point = to_components(circuit.logical_gates(), structure);
  double radius = params.initial_radius > 0.0
                      ? params.initial_radius
                      : 0.01 * std::sqrt(16.0 * circuit.num_logical());
  const double max_radius = params.max_radius > 0.0 ? params.max_radius : 100.0 * radius;
  TcgParams tcg = params.tcg;
  if (tcg.max_inner <= 0) tcg.max_inner = tangent_dimension(point);
  if (tcg.residual_floor <= 0.0) {
    tcg.residual_floor = 100.0 * std::numeric_limits<double>::epsilon() *
                         std::ldexp(1.0, circuit.num_qubits());
  }

  // f = ||C - U||^2 / 2 - 2^k. The trace records f through the directly summed
  // error so that accepted values follow the error monotonically.
  const double identity_trace = std::ldexp(1.0, circuit.num_qubits());
  const auto f_from_error = [&](double error_sq) { return 0.5 * error_sq - identity_trace; };
  // Offset for rho once both decreases reach the rounding level of error_sq,
  // which is about eps * 2^k * ||C - U||. Accepted steps can raise f by at
  // most about this much.
  const auto rho_offset = [&](double error_sq) {
    return 100.0 * std::numeric_limits<double>::epsilon() * identity_trace *
           std::max(std::sqrt(error_sq), std::numeric_limits<double>::epsilon());
  };

  ObjectiveReport report = evaluate(result.circuit, oracle, options, !params.use_hvp);
  IterationRecord row;
  row.rho = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 0;; ++iter) {
    row.iter = iter;
    row.f = f_from_error(report.error_sq);
    row.error_frobenius = std::sqrt(report.error_sq);
    row.grad_norm = report.riemannian_gradient_norm();
    row.radius = radius;
    row.seconds = elapsed();
    result.trace.records.push_back(row);

    if (row.grad_norm <= params.gradient_norm_tolerance) {
      result.trace.stop = StopReason::kGradientTolerance;
      break;
    }
    if (iter >= params.max_iterations) {
      result.trace.stop = StopReason::kMaxIterations;
      break;
    }
    if (radius < params.min_radius) {
      result.trace.stop = StopReason::kRadiusUnderflow;
      break;
    }

    const HessianOperator hess =
        params.use_hvp ? riemannian_hessian_hvp(result.circuit, oracle, point,
                                                report.euclidean_gradient, options)
                       : riemannian_hessian(point, report.euclidean_gradient, *report.hessian,
                                            structure);
    const TcgResult tcg_out = truncated_cg(hess, report.riemannian_gradient, radius, tcg);
    const double predicted =
        -model_change(report.riemannian_gradient, tcg_out.step, tcg_out.hess_step);

    const ProductPoint candidate = retract(point, tcg_out.step);
    Circuit candidate_circuit = result.circuit.with_gates(from_components(candidate, structure));
    const ValueReport trial = evaluate_value(candidate_circuit, oracle, options.workers);
    // Differences of f read off the summed errors, without cancelling
    // against 2^k.
    const double actual = 0.5 * (report.error_sq - trial.error_sq);
    const double offset = rho_offset(report.error_sq);
    const double rho = predicted > 0.0 ? (actual + offset) / (predicted + offset)
                                       : -std::numeric_limits<double>::infinity();

    row = IterationRecord{};
    row.rho = rho;
    row.step_norm = product_norm(tcg_out.step);
    row.inner_iters = tcg_out.iterations;
    row.accepted = rho > params.accept_threshold;
    if (rho < params.shrink_threshold || !row.accepted) {
      radius *= params.shrink_factor;
    } else if (rho > params.expand_threshold && tcg_out.on_boundary) {
      radius = std::min(params.expand_factor * radius, max_radius);
    }
    if (row.accepted) {
      point = candidate;
      result.circuit = std::move(candidate_circuit);
      report = evaluate(result.circuit, oracle, options, !params.use_hvp);
    }
  }
  return result;
}

}  // namespace rqco
