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

#include "squeezelab/state.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "squeezelab/errors.h"
#include "squeezelab/warnings.h"

namespace squeezelab {
namespace {

void CheckLength(const HilbertLayout& layout, Eigen::Index n) {
  if (static_cast<std::size_t>(n) != layout.dimension()) {
    throw DimensionMismatch("expected length " +
                            std::to_string(layout.dimension()) + ", got " +
                            std::to_string(n));
  }
}

std::vector<double> Marginal(const HilbertLayout& layout, int mode,
                             const Eigen::VectorXd& diag) {
  const int site = layout.mode_site(mode);
  const std::size_t stride = layout.stride(site);
  const int d = layout.site_dimension(site);
  std::vector<double> p(d, 0.0);
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    p[(static_cast<std::size_t>(i) / stride) % d] += diag(i);
  }
  return p;
}

double TopLevel(const HilbertLayout& layout, const Eigen::VectorXd& diag) {
  double worst = 0.0;
  for (int m = 0; m < layout.modes(); ++m) {
    const auto p = Marginal(layout, m, diag);
    double top = p.back();
    if (p.size() >= 2) top += p[p.size() - 2];
    worst = std::max(worst, top);
  }
  return worst;
}

double Report(double top, const char* context) {
  if (top > kTruncationThreshold) {
    std::ostringstream msg;
    msg << context << ": population " << top
        << " on the top two Fock levels exceeds " << kTruncationThreshold;
    EmitWarning({WarningKind::kTruncation, msg.str(), top});
  }
  return top;
}

}  // namespace

StateVector::StateVector(HilbertLayout layout, ComplexVector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  CheckLength(layout_, amplitudes_.size());
  const double n = amplitudes_.norm();
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    throw NumericalError("state norm " + std::to_string(n) +
                         " is not within 1e-9 of 1");
  }
}

StateVector StateVector::Normalized(HilbertLayout layout,
                                    ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  amplitudes /= n;
  return StateVector(std::move(layout), std::move(amplitudes));
}

StateVector StateVector::Basis(const HilbertLayout& layout,
                               const BasisLabel& label) {
  ComplexVector v = ComplexVector::Zero(layout.dimension());
  v(static_cast<Eigen::Index>(layout.Index(label))) = 1.0;
  return StateVector(layout, std::move(v));
}

StateVector StateVector::Vacuum(const HilbertLayout& layout) {
  ComplexVector v = ComplexVector::Zero(layout.dimension());
  v(0) = 1.0;
  return StateVector(layout, std::move(v));
}

DensityOperator::DensityOperator(HilbertLayout layout, ComplexMatrix entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
  if (layout_.dimension() > kMaxDenseDimension) {
    throw InvalidArgument("density operator dimension " +
                          std::to_string(layout_.dimension()) +
                          " exceeds the dense limit");
  }
  CheckLength(layout_, entries_.rows());
  CheckLength(layout_, entries_.cols());
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kHermitianTolerance)) {
    throw NumericalError("density operator not Hermitian (deviation " +
                         std::to_string(herm) + ")");
  }
  const double tr = entries_.trace().real();
  if (!(std::abs(tr - 1.0) <= kNormTolerance)) {
    throw NumericalError("density operator trace " + std::to_string(tr) +
                         " is not within 1e-9 of 1");
  }
}

DensityOperator DensityOperator::FromPure(const StateVector& psi) {
  if (psi.dimension() > kMaxDenseDimension) {
    throw InvalidArgument("state too large for a density operator");
  }
  ComplexMatrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityOperator(psi.layout(), std::move(m));
}

double DensityOperator::Purity() const {
  return (entries_.cwiseAbs2()).sum();
}

double DensityOperator::MinEigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(entries_,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityOperator::Validate() const {
  const double lo = MinEigenvalue();
  if (lo < -kNormTolerance) {
    throw NumericalError("density operator has eigenvalue " +
                         std::to_string(lo));
  }
}

std::vector<double> ThermalPopulations(double nbar, int cutoff) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw InvalidArgument("mean occupation must be finite and >= 0");
  }
  if (cutoff < 0) throw InvalidArgument("cutoff must be >= 0");
  const double q = nbar / (1.0 + nbar);
  const double tail = std::pow(q, cutoff + 1);
  if (tail >= kTruncationThreshold) {
    throw TruncationError("thermal tail " + std::to_string(tail) +
                          " beyond cutoff " + std::to_string(cutoff) +
                          " for nbar " + std::to_string(nbar));
  }
  std::vector<double> p(cutoff + 1);
  double sum = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    p[n] = std::pow(q, n) / (1.0 + nbar);
    sum += p[n];
  }
  for (double& x : p) x /= sum;
  return p;
}

DensityOperator ThermalState(const HilbertLayout& layout, double nbar) {
  std::vector<std::vector<double>> per_mode;
  for (int m = 0; m < layout.modes(); ++m) {
    per_mode.push_back(ThermalPopulations(nbar, layout.cutoff(m)));
  }
  const HilbertLayout motion = layout.Motional();
  ComplexMatrix rho = ComplexMatrix::Zero(layout.dimension(), layout.dimension());
  double total = 0.0;
  for (std::size_t i = 0; i < motion.dimension(); ++i) {
    const BasisLabel label = motion.Labels(i);
    double p = 1.0;
    for (int m = 0; m < layout.modes(); ++m) p *= per_mode[m][label.occupations[m]];
    rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p;
    total += p;
  }
  rho /= total;
  return DensityOperator(layout, std::move(rho));
}

StateVector AttachSpins(const HilbertLayout& layout,
                        const ComplexVector& spin_amplitudes,
                        const StateVector& motion) {
  RequireSameLayout(layout.Motional(), motion.layout(), "AttachSpins");
  if (static_cast<std::size_t>(spin_amplitudes.size()) !=
      layout.spin_dimension()) {
    throw DimensionMismatch("spin amplitude vector has the wrong length");
  }
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  ComplexVector v(layout.dimension());
  for (Eigen::Index s = 0; s < spin_amplitudes.size(); ++s) {
    v.segment(s * md, md) = spin_amplitudes(s) * motion.amplitudes();
  }
  return StateVector::Normalized(layout, std::move(v));
}

DensityOperator AttachSpinsDown(const HilbertLayout& layout,
                                const DensityOperator& motion) {
  RequireSameLayout(layout.Motional(), motion.layout(), "AttachSpinsDown");
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  ComplexMatrix rho = ComplexMatrix::Zero(layout.dimension(), layout.dimension());
  rho.topLeftCorner(md, md) = motion.entries();
  return DensityOperator(layout, std::move(rho));
}

DensityOperator PartialTraceSpin(const DensityOperator& rho) {
  const HilbertLayout& layout = rho.layout();
  if (layout.spins() == 0) {
    throw InvalidArgument("partial trace over spins needs at least one spin");
  }
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  ComplexMatrix out = ComplexMatrix::Zero(md, md);
  for (std::size_t s = 0; s < layout.spin_dimension(); ++s) {
    const Eigen::Index o = static_cast<Eigen::Index>(s) * md;
    out += rho.entries().block(o, o, md, md);
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(layout.Motional(), std::move(out));
}

ComplexMatrix SpinMarginal(const StateVector& psi) {
  const HilbertLayout& layout = psi.layout();
  if (layout.spins() == 0) {
    throw InvalidArgument("spin marginal needs at least one spin");
  }
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  const Eigen::Index sd = static_cast<Eigen::Index>(layout.spin_dimension());
  Eigen::Map<const ComplexMatrix> m(psi.amplitudes().data(), md, sd);
  return (m.transpose() * m.conjugate());
}

Complex Expectation(const OperatorMatrix& a, const StateVector& psi) {
  RequireSameLayout(a.layout(), psi.layout(), "Expectation");
  return psi.amplitudes().dot(a.Apply(psi.amplitudes()));
}

Complex Expectation(const OperatorMatrix& a, const DensityOperator& rho) {
  RequireSameLayout(a.layout(), rho.layout(), "Expectation");
  Complex sum = 0.0;
  const SparseMatrix& e = a.entries();
  for (Eigen::Index k = 0; k < e.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(e, k); it; ++it) {
      sum += it.value() * rho.entries()(it.col(), it.row());
    }
  }
  return sum;
}

double Variance(const OperatorMatrix& a, const StateVector& psi) {
  if (!a.hermitian()) throw InvalidArgument("variance needs a Hermitian operator");
  RequireSameLayout(a.layout(), psi.layout(), "Variance");
  const ComplexVector av = a.Apply(psi.amplitudes());
  const double mean = psi.amplitudes().dot(av).real();
  return av.squaredNorm() - mean * mean;
}

double Variance(const OperatorMatrix& a, const DensityOperator& rho) {
  if (!a.hermitian()) throw InvalidArgument("variance needs a Hermitian operator");
  const double mean = Expectation(a, rho).real();
  return Expectation(a * a, rho).real() - mean * mean;
}

double Overlap(const StateVector& phi, const StateVector& psi) {
  RequireSameLayout(phi.layout(), psi.layout(), "Overlap");
  return std::norm(phi.amplitudes().dot(psi.amplitudes()));
}

double Fidelity(const DensityOperator& rho, const StateVector& psi) {
  RequireSameLayout(rho.layout(), psi.layout(), "Fidelity");
  return psi.amplitudes().dot(rho.entries() * psi.amplitudes()).real();
}

double TraceDistance(const DensityOperator& a, const DensityOperator& b) {
  RequireSameLayout(a.layout(), b.layout(), "TraceDistance");
  ComplexMatrix diff = a.entries() - b.entries();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<double> ModePopulations(const StateVector& psi, int mode) {
  return Marginal(psi.layout(), mode, psi.amplitudes().cwiseAbs2());
}

std::vector<double> ModePopulations(const DensityOperator& rho, int mode) {
  return Marginal(rho.layout(), mode, rho.entries().diagonal().real());
}

double TopLevelPopulation(const StateVector& psi) {
  return TopLevel(psi.layout(), psi.amplitudes().cwiseAbs2());
}

double TopLevelPopulation(const DensityOperator& rho) {
  return TopLevel(rho.layout(), rho.entries().diagonal().real());
}

double CheckTruncation(const StateVector& psi, const char* context) {
  return Report(TopLevelPopulation(psi), context);
}

double CheckTruncation(const DensityOperator& rho, const char* context) {
  return Report(TopLevelPopulation(rho), context);
}

}  // namespace squeezelab
