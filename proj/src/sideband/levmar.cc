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

#include "squeezelab/levmar.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "squeezelab/errors.h"

namespace squeezelab {
namespace {

constexpr double kActiveTolerance = 1e-12;

// Damped step on the free set; `sum_active` adds sum(step over the simplex
// block) = 0 through a Lagrange multiplier.
Eigen::VectorXd FreeStep(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                         const std::vector<int>& free, int simplex_size,
                         bool sum_active, double* multiplier) {
  const int nf = static_cast<int>(free.size());
  Eigen::MatrixXd hf(nf, nf);
  Eigen::VectorXd gf(nf), ones(nf);
  for (int a = 0; a < nf; ++a) {
    gf(a) = g(free[a]);
    ones(a) = free[a] < simplex_size ? 1.0 : 0.0;
    for (int b = 0; b < nf; ++b) hf(a, b) = h(free[a], free[b]);
  }
  const auto ldlt = hf.ldlt();
  Eigen::VectorXd step = ldlt.solve(-gf);
  *multiplier = 0.0;
  if (sum_active && ones.sum() > 0.0) {
    const Eigen::VectorXd h1 = ldlt.solve(ones);
    const double mu = ones.dot(step) / ones.dot(h1);
    if (mu > 0.0) {
      step -= mu * h1;
      *multiplier = mu;
    }
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(g.size());
  for (int a = 0; a < nf; ++a) full(free[a]) = step(a);
  return full;
}

}  // namespace

Eigen::VectorXd ProjectCappedSimplex(const Eigen::VectorXd& x) {
  Eigen::VectorXd clipped = x.cwiseMax(0.0);
  if (clipped.sum() <= 1.0) return clipped;
  // Projection onto the unit simplex by the sorted threshold rule.
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / double(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

void BoxSimplexConstraints::Validate() const {
  if (lower.size() != upper.size()) {
    throw InvalidArgument("bound vectors differ in length");
  }
  if (simplex_size < 0 || simplex_size > lower.size()) {
    throw InvalidArgument("simplex block larger than the parameter vector");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower(i) <= upper(i))) throw InvalidArgument("empty parameter box");
    if (i < simplex_size && (lower(i) != 0.0 || upper(i) != 1.0)) {
      throw InvalidArgument("simplex parameters must have bounds [0, 1]");
    }
  }
}

Eigen::VectorXd BoxSimplexConstraints::Project(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out = x.cwiseMax(lower).cwiseMin(upper);
  if (simplex_size > 0) {
    out.head(simplex_size) = ProjectCappedSimplex(x.head(simplex_size));
  }
  return out;
}

LevMarResult ProjectedLevMar(const ResidualFunction& f,
                             const BoxSimplexConstraints& constraints,
                             const Eigen::VectorXd& x0,
                             const LevMarOptions& options) {
  constraints.Validate();
  if (x0.size() != constraints.lower.size()) {
    throw InvalidArgument("start point and bounds differ in length");
  }
  LevMarResult res;
  res.x = constraints.Project(x0);
  f(res.x, &res.residual, &res.jacobian);
  res.cost = 0.5 * res.residual.squaredNorm();
  double lambda = 1e-3;
  const Eigen::Index k = res.x.size();
  const int ns = constraints.simplex_size;

  for (res.iterations = 0; res.iterations < options.max_iterations;
       ++res.iterations) {
    const Eigen::VectorXd grad = res.jacobian.transpose() * res.residual;
    const double pg =
        (res.x - constraints.Project(res.x - grad)).lpNorm<Eigen::Infinity>();
    if (pg < options.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    const Eigen::MatrixXd jtj = res.jacobian.transpose() * res.jacobian;
    const double scale = std::max(jtj.diagonal().mean(), 1e-300);
    const bool on_sum =
        ns > 0 && res.x.head(ns).sum() >= 1.0 - kActiveTolerance;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd h = jtj;
      h.diagonal().array() += lambda * scale;
      // Freeze bound-active parameters whose multiplier-adjusted gradient
      // points out of the set; repeat until the free set settles.
      std::vector<char> frozen(k, 0);
      double mu = 0.0;
      Eigen::VectorXd step;
      for (int pass = 0; pass <= k; ++pass) {
        std::vector<int> free;
        for (Eigen::Index i = 0; i < k; ++i) {
          if (!frozen[i]) free.push_back(static_cast<int>(i));
        }
        if (free.empty()) {
          step = Eigen::VectorXd::Zero(k);
          break;
        }
        step = FreeStep(h, grad, free, ns, on_sum, &mu);
        bool changed = false;
        for (Eigen::Index i = 0; i < k; ++i) {
          if (frozen[i]) continue;
          const double gi = grad(i) + (i < ns ? mu : 0.0);
          const bool at_lower =
              res.x(i) <= constraints.lower(i) + kActiveTolerance && gi > 0.0;
          const bool at_upper =
              res.x(i) >= constraints.upper(i) - kActiveTolerance && gi < 0.0;
          if (at_lower || at_upper) {
            frozen[i] = 1;
            changed = true;
          }
        }
        if (!changed) break;
      }
      const Eigen::VectorXd trial = constraints.Project(res.x + step);
      const double moved = (trial - res.x).norm();
      if (moved <= options.step_tolerance * (1.0 + res.x.norm())) {
        res.converged = true;
        return res;
      }
      Eigen::VectorXd r;
      f(trial, &r, nullptr);
      const double cost = 0.5 * r.squaredNorm();
      if (std::isfinite(cost) && cost < res.cost) {
        res.x = trial;
        res.cost = cost;
        f(res.x, &res.residual, &res.jacobian);
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
      } else {
        lambda *= 4.0;
        if (lambda > 1e16) return res;
      }
    }
  }
  return res;
}

}  // namespace squeezelab
