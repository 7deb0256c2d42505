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

#ifndef SQUEEZELAB_EVOLVE_H_
#define SQUEEZELAB_EVOLVE_H_

#include <cstddef>
#include <vector>

#include "squeezelab/operator.h"
#include "squeezelab/state.h"

namespace squeezelab {

/// Blocks larger than this are not diagonalized densely.
inline constexpr std::size_t kMaxBlockDimension = 4096;

/// exp(-i H t) v for Hermitian sparse H by scaled Taylor series. The step
/// count is chosen so each step has |H t| / s <= 1; the series is summed until
/// terms drop below 1e-16 relative.
ComplexVector ExpmAction(const SparseMatrix& h, double t,
                         const ComplexVector& v);

/// exp(-i H t) assembled block by block. Basis indices are grouped into the
/// connected components of the nonzero pattern of H, each block is
/// diagonalized densely, and U is stored as per-block dense unitaries.
class BlockUnitary {
 public:
  /// Throws InvalidArgument if H is not flagged Hermitian or a block exceeds
  /// kMaxBlockDimension.
  BlockUnitary(const OperatorMatrix& h, double t);

  const HilbertLayout& layout() const { return layout_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t max_block_dimension() const;

  ComplexVector Apply(const ComplexVector& v) const;
  /// U rho U^dag.
  ComplexMatrix Conjugate(const ComplexMatrix& rho) const;
  /// U^dag rho U.
  ComplexMatrix ConjugateInverse(const ComplexMatrix& rho) const;
  OperatorMatrix ToOperator() const;

  /// Basis indices of the connected components of the nonzero pattern of `h`.
  static std::vector<std::vector<int>> Components(const SparseMatrix& h);

 private:
  struct Block {
    std::vector<int> indices;
    ComplexMatrix u;
  };
  ComplexMatrix Sandwich(const ComplexMatrix& rho, bool inverse) const;

  HilbertLayout layout_;
  std::vector<Block> blocks_;
};

/// exp(-i H t)|psi>. Throws InvalidArgument if H is not flagged Hermitian.
StateVector Evolve(const StateVector& psi, const OperatorMatrix& h, double t);
/// U rho U^dag with U = exp(-i H t).
DensityOperator Evolve(const DensityOperator& rho, const OperatorMatrix& h,
                       double t);

}  // namespace squeezelab

#endif  // SQUEEZELAB_EVOLVE_H_
