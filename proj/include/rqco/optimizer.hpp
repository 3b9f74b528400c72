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


// Riemannian trust-region method with a Steihaug-Toint truncated CG inner
// solver on the product manifold of logical gates.

#ifndef RQCO_OPTIMIZER_HPP_
#define RQCO_OPTIMIZER_HPP_

#include <functional>
#include <string>
#include <vector>

#include "rqco/circuit.hpp"
#include "rqco/manifold.hpp"
#include "rqco/objective.hpp"

namespace rqco {

struct TcgParams {
  double kappa = 0.1;
  double theta = 1.0;
  int max_inner = 0;  // 0: real dimension of the tangent space
  // Absolute residual at which the solve counts as converged. Below the
  // rounding level of Hessian applications CG only follows noise.
  // 0: 100 * eps * 2^k inside trust_region_optimize.
  double residual_floor = 0.0;
};

struct TrustRegionParams {
  double initial_radius = 0.0;  // 0: 0.01 * sqrt(16 * gates)
  double max_radius = 0.0;      // 0: 100 * initial_radius
  double accept_threshold = 0.1;
  double shrink_threshold = 0.25;
  double expand_threshold = 0.75;
  double shrink_factor = 0.25;
  double expand_factor = 2.0;
  int max_iterations = 100;
  double gradient_norm_tolerance = 1e-10;
  double min_radius = 1e-12;
  // Apply the Hessian through Hessian-vector products instead of assembling it.
  bool use_hvp = false;
  TcgParams tcg;

  void validate() const;
};

using HessianOperator = std::function<ProductTangent(const ProductTangent&)>;

enum class TcgStop { kZeroGradient, kNegativeCurvature, kExceededRadius, kResidual, kMaxInner };

struct TcgResult {
  ProductTangent step;
  ProductTangent hess_step;  // H[step]
  TcgStop stop = TcgStop::kZeroGradient;
  int iterations = 0;
  bool on_boundary = false;
};

TcgResult truncated_cg(const HessianOperator& hess, const ProductTangent& grad, double radius,
                       const TcgParams& params);

// m(eta) - f = <g, eta> + <eta, H eta> / 2.
double model_change(const ProductTangent& grad, const ProductTangent& step,
                    const ProductTangent& hess_step);

// Riemannian Hessian at `point` from assembled holomorphic blocks.
HessianOperator riemannian_hessian(const ProductPoint& point,
                                   const ProductTangent& euclidean_gradient,
                                   const HessianBlocks& blocks, GateStructure structure);

// Same operator through Hessian-vector products (no assembled blocks).
HessianOperator riemannian_hessian_hvp(const Circuit& circuit, const TargetUnitaryOracle& oracle,
                                       const ProductPoint& point,
                                       const ProductTangent& euclidean_gradient,
                                       const ObjectiveOptions& options);

// Per-gate directions from component tangents (parity blocks are embedded).
std::vector<Matrix4c> component_directions(const ProductTangent& x, GateStructure structure);

struct IterationRecord {
  int iter = 0;
  double f = 0.0;
  double error_frobenius = 0.0;
  double grad_norm = 0.0;
  double radius = 0.0;
  double rho = 0.0;  // NaN on the first row
  double step_norm = 0.0;
  int inner_iters = 0;
  bool accepted = false;
  double seconds = 0.0;
};

enum class StopReason { kGradientTolerance, kMaxIterations, kRadiusUnderflow };

std::string to_string(StopReason reason);

struct OptimizationTrace {
  std::vector<IterationRecord> records;
  StopReason stop = StopReason::kMaxIterations;
};

struct OptimizationResult {
  Circuit circuit;
  OptimizationTrace trace;
};

// Row i describes iterate i and the step that produced it.
OptimizationResult trust_region_optimize(const Circuit& circuit,
                                         const TargetUnitaryOracle& oracle,
                                         const TrustRegionParams& params,
                                         const ObjectiveOptions& options);

}  // namespace rqco

#endif  // RQCO_OPTIMIZER_HPP_
