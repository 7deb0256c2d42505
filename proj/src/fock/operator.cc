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

#include "squeezelab/operator.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "squeezelab/errors.h"

namespace squeezelab {
namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix FromTriplets(std::size_t dim, const std::vector<Triplet>& t) {
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

ComplexMatrix LocalAnnihilation(int cutoff) {
  ComplexMatrix a = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

}  // namespace

OperatorMatrix::OperatorMatrix(HilbertLayout layout, SparseMatrix entries,
                               bool hermitian)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw DimensionMismatch("operator is " + std::to_string(entries_.rows()) +
                            "x" + std::to_string(entries_.cols()) +
                            " but layout dimension is " + std::to_string(dim));
  }
  entries_.makeCompressed();
  if (hermitian) {
    const double err = HermiticityError();
    if (err > kHermitianTolerance) {
      throw InvalidArgument("operator flagged Hermitian deviates by " +
                            std::to_string(err));
    }
    hermitian_ = true;
  }
}

OperatorMatrix OperatorMatrix::Identity(const HilbertLayout& layout) {
  SparseMatrix m(static_cast<Eigen::Index>(layout.dimension()),
                 static_cast<Eigen::Index>(layout.dimension()));
  m.setIdentity();
  return OperatorMatrix(layout, std::move(m), true);
}

OperatorMatrix OperatorMatrix::Zero(const HilbertLayout& layout) {
  SparseMatrix m(static_cast<Eigen::Index>(layout.dimension()),
                 static_cast<Eigen::Index>(layout.dimension()));
  return OperatorMatrix(layout, std::move(m), true);
}

OperatorMatrix OperatorMatrix::FromDense(const HilbertLayout& layout,
                                         const ComplexMatrix& dense,
                                         bool hermitian) {
  SparseMatrix m = dense.sparseView(Complex(0.0), 0.0);
  return OperatorMatrix(layout, std::move(m), hermitian);
}

Complex OperatorMatrix::Entry(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) {
    throw InvalidArgument("operator entry index out of range");
  }
  return entries_.coeff(static_cast<Eigen::Index>(row),
                        static_cast<Eigen::Index>(col));
}

ComplexMatrix OperatorMatrix::ToDense() const {
  if (dimension() > kMaxDenseDimension) {
    throw InvalidArgument("dimension " + std::to_string(dimension()) +
                          " too large for a dense matrix");
  }
  return ComplexMatrix(entries_);
}

ComplexVector OperatorMatrix::Apply(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dimension()) {
    throw DimensionMismatch("vector length does not match operator");
  }
  return entries_ * v;
}

OperatorMatrix OperatorMatrix::Adjoint() const {
  SparseMatrix adj = entries_.adjoint();
  OperatorMatrix out(layout_, std::move(adj));
  out.hermitian_ = hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::AsHermitian() const {
  return OperatorMatrix(layout_, entries_, true);
}

double OperatorMatrix::HermiticityError() const {
  SparseMatrix diff = entries_ - SparseMatrix(entries_.adjoint());
  double err = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      err = std::max(err, std::abs(it.value()));
    }
  }
  return err;
}

double OperatorMatrix::NormBound() const {
  double best = 0.0;
  for (Eigen::Index k = 0; k < entries_.outerSize(); ++k) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(entries_, k); it; ++it) {
      row += std::abs(it.value());
    }
    best = std::max(best, row);
  }
  return best;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  RequireSameLayout(layout_, other.layout_, "operator sum");
  OperatorMatrix out(layout_, entries_ + other.entries_);
  out.hermitian_ = hermitian_ && other.hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
  RequireSameLayout(layout_, other.layout_, "operator difference");
  OperatorMatrix out(layout_, entries_ - other.entries_);
  out.hermitian_ = hermitian_ && other.hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  RequireSameLayout(layout_, other.layout_, "operator product");
  SparseMatrix prod = (entries_ * other.entries_).pruned();
  return OperatorMatrix(layout_, std::move(prod));
}

OperatorMatrix OperatorMatrix::operator*(Complex scale) const {
  OperatorMatrix out(layout_, entries_ * scale);
  out.hermitian_ = hermitian_ && scale.imag() == 0.0;
  return out;
}

OperatorMatrix OperatorMatrix::operator*(double scale) const {
  OperatorMatrix out(layout_, entries_ * Complex(scale));
  out.hermitian_ = hermitian_;
  return out;
}

OperatorMatrix Commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

OperatorMatrix AntiCommutator(const OperatorMatrix& a,
                              const OperatorMatrix& b) {
  return a * b + b * a;
}

double MaxAbsDifference(const OperatorMatrix& a, const OperatorMatrix& b) {
  RequireSameLayout(a.layout(), b.layout(), "operator comparison");
  SparseMatrix diff = a.entries() - b.entries();
  double err = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      err = std::max(err, std::abs(it.value()));
    }
  }
  return err;
}

OperatorMatrix EmbedSiteOperator(const HilbertLayout& layout, int site,
                                 const ComplexMatrix& local, bool hermitian) {
  if (site < 0 || site >= layout.num_sites()) {
    throw InvalidArgument("site index out of range");
  }
  const int d = layout.site_dimension(site);
  if (local.rows() != d || local.cols() != d) {
    throw DimensionMismatch("local operator does not match site dimension");
  }
  std::vector<std::pair<int, std::vector<std::pair<int, Complex>>>> rows(d);
  std::size_t per_row = 0;
  for (int r = 0; r < d; ++r) {
    rows[r].first = r;
    for (int c = 0; c < d; ++c) {
      if (local(r, c) != Complex(0.0)) rows[r].second.emplace_back(c, local(r, c));
    }
    per_row = std::max(per_row, rows[r].second.size());
  }
  const std::size_t dim = layout.dimension();
  const std::size_t stride = layout.stride(site);
  std::vector<Triplet> triplets;
  triplets.reserve(dim * per_row);
  for (std::size_t i = 0; i < dim; ++i) {
    const int digit = static_cast<int>((i / stride) % d);
    for (const auto& [c, v] : rows[digit].second) {
      const std::size_t j = i + (static_cast<std::ptrdiff_t>(c) - digit) *
                                    static_cast<std::ptrdiff_t>(stride);
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    }
  }
  return OperatorMatrix(layout, FromTriplets(dim, triplets), hermitian);
}

SparseMatrix Kron(const SparseMatrix& left, const SparseMatrix& right) {
  const Eigen::Index rr = right.rows(), rc = right.cols();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(left.nonZeros() * right.nonZeros()));
  for (Eigen::Index k = 0; k < left.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator a(left, k); a; ++a) {
      for (Eigen::Index q = 0; q < right.outerSize(); ++q) {
        for (SparseMatrix::InnerIterator b(right, q); b; ++b) {
          t.emplace_back(static_cast<int>(a.row() * rr + b.row()),
                         static_cast<int>(a.col() * rc + b.col()),
                         a.value() * b.value());
        }
      }
    }
  }
  SparseMatrix m(left.rows() * rr, left.cols() * rc);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

OperatorMatrix BuildAnnihilation(const HilbertLayout& layout, int mode) {
  return EmbedSiteOperator(layout, layout.mode_site(mode),
                           LocalAnnihilation(layout.cutoff(mode)));
}

OperatorMatrix BuildCreation(const HilbertLayout& layout, int mode) {
  return EmbedSiteOperator(layout, layout.mode_site(mode),
                           LocalAnnihilation(layout.cutoff(mode)).adjoint());
}

OperatorMatrix BuildNumber(const HilbertLayout& layout, int mode) {
  const int n = layout.cutoff(mode);
  ComplexMatrix local = ComplexMatrix::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) local(k, k) = double(k);
  return EmbedSiteOperator(layout, layout.mode_site(mode), local, true);
}

Quadratures BuildQuadratures(const HilbertLayout& layout, int mode) {
  const ComplexMatrix a = LocalAnnihilation(layout.cutoff(mode));
  const ComplexMatrix ad = a.adjoint();
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexMatrix x = s * (a + ad);
  const ComplexMatrix p = Complex(0.0, -s) * (a - ad);
  const int site = layout.mode_site(mode);
  return {EmbedSiteOperator(layout, site, x, true),
          EmbedSiteOperator(layout, site, p, true)};
}

SpinOperators BuildSpinOps(const HilbertLayout& layout, int spin) {
  const int site = layout.spin_site(spin);
  ComplexMatrix plus = ComplexMatrix::Zero(2, 2);
  plus(1, 0) = 1.0;
  const ComplexMatrix minus = plus.adjoint();
  const ComplexMatrix x = plus + minus;
  const ComplexMatrix y = Complex(0.0, -1.0) * (plus - minus);
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = -1.0;
  z(1, 1) = 1.0;
  return {EmbedSiteOperator(layout, site, plus),
          EmbedSiteOperator(layout, site, minus),
          EmbedSiteOperator(layout, site, x, true),
          EmbedSiteOperator(layout, site, y, true),
          EmbedSiteOperator(layout, site, z, true)};
}

}  // namespace squeezelab
