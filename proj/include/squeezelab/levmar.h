// Copyright 2026 The squeezelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQUEEZELAB_LEVMAR_H_
#define SQUEEZELAB_LEVMAR_H_

#include <functional>

#include <Eigen/Dense>

namespace squeezelab {

struct LevMarOptions {
  int max_iterations = 500;
  /// Infinity norm of x - Project(x - grad).
  double gradient_tolerance = 1e-8;
  /// Accepted-step norm relative to 1 + |x|.
  double step_tolerance = 1e-10;
};

/// lower <= x <= upper, and the first `simplex_size` entries (bounds [0, 1])
/// also satisfy sum <= 1.
struct BoxSimplexConstraints {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  int simplex_size = 0;

  Eigen::VectorXd Project(const Eigen::VectorXd& x) const;
  void Validate() const;
};

struct LevMarResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  /// 0.5 |residual|^2.
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Fills the residual vector and, when `jacobian` is not null, its Jacobian.
using ResidualFunction = std::function<void(
    const Eigen::VectorXd& x, Eigen::VectorXd* residual,
    Eigen::MatrixXd* jacobian)>;

/// Damped Gauss-Newton on a box-plus-simplex set. Each step freezes the
/// bound-active parameters, solves the damped normal equations on the rest
/// (with the sum constraint as an equality when it is active) and projects.
/// Only cost-decreasing steps are taken.
LevMarResult ProjectedLevMar(const ResidualFunction& f,
                             const BoxSimplexConstraints& constraints,
                             const Eigen::VectorXd& x0,
                             const LevMarOptions& options = {});

/// Projection onto {x : x >= 0, sum x <= 1}.
Eigen::VectorXd ProjectCappedSimplex(const Eigen::VectorXd& x);

}  // namespace squeezelab

#endif  // SQUEEZELAB_LEVMAR_H_
