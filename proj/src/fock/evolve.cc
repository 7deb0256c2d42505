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

#include "squeezelab/evolve.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "squeezelab/errors.h"

namespace squeezelab {
namespace {

double RowSumNorm(const SparseMatrix& h) {
  double best = 0.0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

int Find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void RequireHermitian(const OperatorMatrix& h) {
  if (!h.hermitian()) {
    throw InvalidArgument("evolution needs an operator flagged Hermitian");
  }
}

}  // namespace

ComplexVector ExpmAction(const SparseMatrix& h, double t,
                         const ComplexVector& v) {
  if (h.rows() != v.size() || h.cols() != v.size()) {
    throw DimensionMismatch("ExpmAction: operator and vector sizes differ");
  }
  const double scale = RowSumNorm(h) * std::abs(t);
  if (!std::isfinite(scale)) throw NumericalError("non-finite generator norm");
  if (scale == 0.0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(scale)));
  const Complex factor(0.0, -t / steps);
  ComplexVector out = v;
  for (int s = 0; s < steps; ++s) {
    ComplexVector term = out;
    ComplexVector sum = out;
    const double ref = out.norm();
    int small = 0;
    for (int k = 1; k <= 80; ++k) {
      term = (factor / double(k)) * (h * term);
      sum += term;
      if (term.norm() <= 1e-17 * ref) {
        if (++small == 2) break;
      } else {
        small = 0;
      }
    }
    out = std::move(sum);
  }
  return out;
}

std::vector<std::vector<int>> BlockUnitary::Components(const SparseMatrix& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
      if (it.value() == Complex(0.0)) continue;
      const int a = Find(parent, static_cast<int>(it.row()));
      const int b = Find(parent, static_cast<int>(it.col()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<int> slot(n, -1);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    const int root = Find(parent, i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

BlockUnitary::BlockUnitary(const OperatorMatrix& h, double t)
    : layout_(h.layout()) {
  RequireHermitian(h);
  const SparseMatrix& e = h.entries();
  for (auto& idx : Components(e)) {
    if (idx.size() > kMaxBlockDimension) {
      throw InvalidArgument("block of dimension " + std::to_string(idx.size()) +
                            " too large to diagonalize");
    }
    const Eigen::Index b = static_cast<Eigen::Index>(idx.size());
    Block block;
    if (b == 1) {
      const double d = e.coeff(idx[0], idx[0]).real();
      block.u = ComplexMatrix::Constant(1, 1, std::exp(Complex(0.0, -d * t)));
    } else {
      ComplexMatrix sub(b, b);
      for (Eigen::Index i = 0; i < b; ++i) {
        for (Eigen::Index j = 0; j < b; ++j) sub(i, j) = e.coeff(idx[i], idx[j]);
      }
      sub = 0.5 * (sub + sub.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sub);
      if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
      }
      const ComplexVector phases =
          (es.eigenvalues() * Complex(0.0, -t)).array().exp().matrix();
      block.u = es.eigenvectors() * phases.asDiagonal() *
                es.eigenvectors().adjoint();
    }
    block.indices = std::move(idx);
    blocks_.push_back(std::move(block));
  }
}

std::size_t BlockUnitary::max_block_dimension() const {
  std::size_t best = 0;
  for (const auto& b : blocks_) best = std::max(best, b.indices.size());
  return best;
}

ComplexVector BlockUnitary::Apply(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != layout_.dimension()) {
    throw DimensionMismatch("BlockUnitary::Apply: wrong vector length");
  }
  ComplexVector out(v.size());
  for (const auto& b : blocks_) {
    out(b.indices) = b.u * v(b.indices);
  }
  return out;
}

ComplexMatrix BlockUnitary::Sandwich(const ComplexMatrix& rho,
                                     bool inverse) const {
  if (static_cast<std::size_t>(rho.rows()) != layout_.dimension() ||
      rho.cols() != rho.rows()) {
    throw DimensionMismatch("BlockUnitary: wrong matrix shape");
  }
  ComplexMatrix tmp(rho.rows(), rho.cols());
  for (const auto& b : blocks_) {
    if (inverse) {
      tmp(b.indices, Eigen::all) = b.u.adjoint() * rho(b.indices, Eigen::all);
    } else {
      tmp(b.indices, Eigen::all) = b.u * rho(b.indices, Eigen::all);
    }
  }
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& b : blocks_) {
    if (inverse) {
      out(Eigen::all, b.indices) = tmp(Eigen::all, b.indices) * b.u;
    } else {
      out(Eigen::all, b.indices) = tmp(Eigen::all, b.indices) * b.u.adjoint();
    }
  }
  return 0.5 * (out + out.adjoint());
}

ComplexMatrix BlockUnitary::Conjugate(const ComplexMatrix& rho) const {
  return Sandwich(rho, false);
}

ComplexMatrix BlockUnitary::ConjugateInverse(const ComplexMatrix& rho) const {
  return Sandwich(rho, true);
}

OperatorMatrix BlockUnitary::ToOperator() const {
  std::vector<Eigen::Triplet<Complex>> t;
  for (const auto& b : blocks_) {
    const auto n = b.indices.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex v = b.u(i, j);
        if (v != Complex(0.0)) t.emplace_back(b.indices[i], b.indices[j], v);
      }
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(layout_.dimension()),
                 static_cast<Eigen::Index>(layout_.dimension()));
  m.setFromTriplets(t.begin(), t.end());
  return OperatorMatrix(layout_, std::move(m));
}

StateVector Evolve(const StateVector& psi, const OperatorMatrix& h, double t) {
  RequireHermitian(h);
  RequireSameLayout(psi.layout(), h.layout(), "Evolve");
  return StateVector(psi.layout(), ExpmAction(h.entries(), t, psi.amplitudes()));
}

DensityOperator Evolve(const DensityOperator& rho, const OperatorMatrix& h,
                       double t) {
  RequireHermitian(h);
  RequireSameLayout(rho.layout(), h.layout(), "Evolve");
  const auto groups = BlockUnitary::Components(h.entries());
  std::size_t largest = 0;
  for (const auto& g : groups) largest = std::max(largest, g.size());
  if (largest <= kMaxBlockDimension) {
    return DensityOperator(rho.layout(), BlockUnitary(h, t).Conjugate(rho.entries()));
  }
  const Eigen::Index n = rho.entries().rows();
  ComplexMatrix left(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    left.col(c) = ExpmAction(h.entries(), t, rho.entries().col(c));
  }
  ComplexMatrix adj = left.adjoint();
  for (Eigen::Index c = 0; c < n; ++c) {
    adj.col(c) = ExpmAction(h.entries(), t, ComplexVector(adj.col(c)));
  }
  ComplexMatrix out = adj.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(rho.layout(), std::move(out));
}

}  // namespace squeezelab
