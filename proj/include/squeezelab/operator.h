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

#ifndef SQUEEZELAB_OPERATOR_H_
#define SQUEEZELAB_OPERATOR_H_

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "squeezelab/layout.h"

namespace squeezelab {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr double kHermitianTolerance = 1e-12;

/// Linear operator on the joint space of a HilbertLayout.
///
/// Entries are stored sparsely so that Kronecker-structured operators stay
/// cheap to apply on spaces far above kMaxDenseDimension; ToDense() is only
/// available below that size.
class OperatorMatrix {
 public:
  /// Throws DimensionMismatch if `entries` is not dim x dim and
  /// InvalidArgument if `hermitian` is set but the entries are not.
  OperatorMatrix(HilbertLayout layout, SparseMatrix entries,
                 bool hermitian = false);

  static OperatorMatrix Identity(const HilbertLayout& layout);
  static OperatorMatrix Zero(const HilbertLayout& layout);
  static OperatorMatrix FromDense(const HilbertLayout& layout,
                                  const ComplexMatrix& dense,
                                  bool hermitian = false);

  const HilbertLayout& layout() const { return layout_; }
  std::size_t dimension() const { return layout_.dimension(); }
  const SparseMatrix& entries() const { return entries_; }
  bool hermitian() const { return hermitian_; }

  Complex Entry(std::size_t row, std::size_t col) const;
  ComplexMatrix ToDense() const;
  ComplexVector Apply(const ComplexVector& v) const;

  OperatorMatrix Adjoint() const;
  /// Returns a copy flagged Hermitian; throws if |A - A^dag| exceeds the
  /// tolerance anywhere.
  OperatorMatrix AsHermitian() const;
  double HermiticityError() const;
  /// Max absolute row sum. Bounds the spectral norm of Hermitian operators.
  double NormBound() const;

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator-(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;
  OperatorMatrix operator*(Complex scale) const;
  OperatorMatrix operator*(double scale) const;

 private:
  HilbertLayout layout_;
  SparseMatrix entries_;
  bool hermitian_ = false;
};

inline OperatorMatrix operator*(Complex scale, const OperatorMatrix& op) {
  return op * scale;
}
inline OperatorMatrix operator*(double scale, const OperatorMatrix& op) {
  return op * scale;
}

OperatorMatrix Commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix AntiCommutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Max entrywise |A - B|.
double MaxAbsDifference(const OperatorMatrix& a, const OperatorMatrix& b);

/// I (x) ... (x) local (x) ... (x) I with `local` on the given site.
OperatorMatrix EmbedSiteOperator(const HilbertLayout& layout, int site,
                                 const ComplexMatrix& local,
                                 bool hermitian = false);

/// Kronecker product of two sparse matrices, left factor most significant.
SparseMatrix Kron(const SparseMatrix& left, const SparseMatrix& right);

OperatorMatrix BuildAnnihilation(const HilbertLayout& layout, int mode);
OperatorMatrix BuildCreation(const HilbertLayout& layout, int mode);
OperatorMatrix BuildNumber(const HilbertLayout& layout, int mode);

struct Quadratures {
  OperatorMatrix x;
  OperatorMatrix p;
};

/// X = (a + a^dag)/sqrt2, P = -i(a - a^dag)/sqrt2.
Quadratures BuildQuadratures(const HilbertLayout& layout, int mode);

struct SpinOperators {
  OperatorMatrix plus;   // |up><down|
  OperatorMatrix minus;  // |down><up|
  OperatorMatrix x;
  OperatorMatrix y;
  OperatorMatrix z;  // +1 on |up>, -1 on |down>
};

SpinOperators BuildSpinOps(const HilbertLayout& layout, int spin);

}  // namespace squeezelab

#endif  // SQUEEZELAB_OPERATOR_H_
