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

#ifndef SQUEEZELAB_STATE_H_
#define SQUEEZELAB_STATE_H_

#include <vector>

#include "squeezelab/layout.h"
#include "squeezelab/operator.h"

namespace squeezelab {

inline constexpr double kNormTolerance = 1e-9;

/// Normalized pure state on a layout.
class StateVector {
 public:
  /// Throws DimensionMismatch on a length mismatch and NumericalError if
  /// the norm is outside 1 +- kNormTolerance.
  StateVector(HilbertLayout layout, ComplexVector amplitudes);

  /// Rescales `amplitudes` to unit norm first.
  static StateVector Normalized(HilbertLayout layout, ComplexVector amplitudes);
  static StateVector Basis(const HilbertLayout& layout, const BasisLabel& label);
  /// |down...down> (x) |0...0>.
  static StateVector Vacuum(const HilbertLayout& layout);

  const HilbertLayout& layout() const { return layout_; }
  std::size_t dimension() const { return layout_.dimension(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(const BasisLabel& label) const {
    return amplitudes_(static_cast<Eigen::Index>(layout_.Index(label)));
  }
  double norm() const { return amplitudes_.norm(); }

 private:
  HilbertLayout layout_;
  ComplexVector amplitudes_;
};

/// Mixed state on a layout; dimension limited to kMaxDenseDimension.
class DensityOperator {
 public:
  /// Checks shape, Hermiticity (1e-12 relative to the largest entry) and unit
  /// trace (1e-9). Positivity is checked by Validate().
  DensityOperator(HilbertLayout layout, ComplexMatrix entries);

  static DensityOperator FromPure(const StateVector& psi);

  const HilbertLayout& layout() const { return layout_; }
  std::size_t dimension() const { return layout_.dimension(); }
  const ComplexMatrix& entries() const { return entries_; }
  double Trace() const { return entries_.trace().real(); }
  double Purity() const;

  /// Full invariant check including the minimum eigenvalue (>= -1e-9).
  /// Throws NumericalError on failure.
  void Validate() const;
  double MinEigenvalue() const;

 private:
  HilbertLayout layout_;
  ComplexMatrix entries_;
};

/// p(n) = nbar^n / (1 + nbar)^(n+1) for n = 0..cutoff, renormalized. Throws
/// TruncationError if the discarded tail is >= kTruncationThreshold.
std::vector<double> ThermalPopulations(double nbar, int cutoff);

/// Product of per-mode thermal states with every spin in |down>.
DensityOperator ThermalState(const HilbertLayout& layout, double nbar);

/// |spin> (x) |motion>; `spin_amplitudes` has length 2^spins of `layout`.
StateVector AttachSpins(const HilbertLayout& layout,
                        const ComplexVector& spin_amplitudes,
                        const StateVector& motion);

/// |down..down><down..down| (x) rho_motion.
DensityOperator AttachSpinsDown(const HilbertLayout& layout,
                                const DensityOperator& motion);

/// Traces out every spin. Throws InvalidArgument if the layout has none.
DensityOperator PartialTraceSpin(const DensityOperator& rho);
/// Reduced spin density matrix (2^spins square).
ComplexMatrix SpinMarginal(const StateVector& psi);

Complex Expectation(const OperatorMatrix& a, const StateVector& psi);
Complex Expectation(const OperatorMatrix& a, const DensityOperator& rho);
/// <A^2> - <A>^2 for Hermitian A.
double Variance(const OperatorMatrix& a, const StateVector& psi);
double Variance(const OperatorMatrix& a, const DensityOperator& rho);

/// |<phi|psi>|^2.
double Overlap(const StateVector& phi, const StateVector& psi);
/// <psi|rho|psi>.
double Fidelity(const DensityOperator& rho, const StateVector& psi);
double TraceDistance(const DensityOperator& a, const DensityOperator& b);

/// Marginal Fock distribution of one mode.
std::vector<double> ModePopulations(const StateVector& psi, int mode);
std::vector<double> ModePopulations(const DensityOperator& rho, int mode);

/// Largest population found on the top two Fock levels of any mode.
double TopLevelPopulation(const StateVector& psi);
double TopLevelPopulation(const DensityOperator& rho);

/// Emits a truncation warning naming `context` if the top-level population
/// exceeds kTruncationThreshold. Returns that population.
double CheckTruncation(const StateVector& psi, const char* context);
double CheckTruncation(const DensityOperator& rho, const char* context);

}  // namespace squeezelab

#endif  // SQUEEZELAB_STATE_H_
