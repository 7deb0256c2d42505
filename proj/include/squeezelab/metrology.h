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

#ifndef SQUEEZELAB_METROLOGY_H_
#define SQUEEZELAB_METROLOGY_H_

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "squeezelab/flop_curve.h"
#include "squeezelab/operator.h"
#include "squeezelab/state.h"

namespace squeezelab {

/// X+- = (X1 +- X2)/sqrt2, P+- = (P1 +- P2)/sqrt2 on a two-mode layout.
struct CollectiveQuadratures {
  OperatorMatrix x_plus;
  OperatorMatrix x_minus;
  OperatorMatrix p_plus;
  OperatorMatrix p_minus;
};

CollectiveQuadratures BuildCollectiveQuadratures(const HilbertLayout& layout);

/// Rates in rad/s, t in seconds.
struct DisplacementParams {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double t = 0.0;

  void Validate() const;
};

/// exp(-i W+ P+ t) exp(-i W- X- t) |psi>. Throws TruncationError if the
/// result has more than kTruncationThreshold on the top Fock levels.
StateVector DisplacementEncode(const StateVector& psi,
                               const DisplacementParams& params);

/// Same displacement conditioned on sigma_x of spin 0 (eigenvalue +-1 flips
/// the sign). The spin must be a sigma_x eigenstate to within 1e-6.
StateVector SpinConditionedEncode(const StateVector& psi,
                                  const DisplacementParams& params);

/// Index 0 is Omega+, index 1 is Omega-.
Eigen::Matrix2d QfiMatrixAnalytic(double r, double t);
/// Per-parameter estimator variance exp(-2r) / (2 t^2).
double VarianceAnalytic(double r, double t);
/// 10 log10(exp(2r)).
double EnhancementDb(double r);

/// [F]_mn = 2<{H_m,H_n}> - 4<H_m><H_n> with H_0 = P+ t, H_1 = X- t.
Eigen::Matrix2d QfiMatrixNumeric(const StateVector& probe, double t);

/// One joint outcome (chi, eta) from the Gaussian density
/// p = exp[2r - e^{2r}((chi + W+ t)^2 + (eta + W- t)^2)] / pi.
class JointMeasurementSampler {
 public:
  JointMeasurementSampler(double r, const DisplacementParams& params);
  std::array<double, 2> Draw(std::mt19937_64& rng);
  double Density(double chi, double eta) const;
  double sigma() const { return sigma_; }
  std::array<double, 2> mean() const { return mean_; }

 private:
  double r_;
  double sigma_;
  std::array<double, 2> mean_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct EstimationRecord {
  int trials = 0;
  int batch = 1;
  /// Per trial (Omega+ hat, Omega- hat) = (-mean chi / t, -mean eta / t).
  std::vector<std::array<double, 2>> estimates;
  std::array<double, 2> empirical_variance{};
  std::array<double, 2> analytic_variance{};
  /// 10 log10(vacuum-probe variance / empirical variance).
  std::array<double, 2> enhancement_db{};
};

/// Each trial averages `batch` joint outcomes. Deterministic in
/// (seed, stream).
EstimationRecord SampleJointMeasurement(double r,
                                        const DisplacementParams& params,
                                        int trials, std::uint64_t seed,
                                        std::uint64_t stream = 0,
                                        int batch = 1);

/// Least-squares slope of log y against log x.
double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y);

enum class ReadoutAxis { kSigmaY, kSigmaZ };

/// Spin-down probability of spin 0 after exp(-i (W_p t / 2) A sigma_x), so
/// that <sigma_z>(t) = <sin(W_p t A) sigma_y> + <cos(W_p t A) sigma_z>.
struct ReadoutCurve {
  FlopCurve curve;
  ReadoutAxis axis = ReadoutAxis::kSigmaZ;
  /// Eigenvalue of the prepared spin along `axis`.
  int eigenvalue = 1;
  double omega_p = 0.0;
};

/// `a` is a Hermitian motional observable on the layout of `psi`; spin 0 must
/// be a sigma_y or sigma_z eigenstate (tolerance 1e-6). t_grid must start at
/// 0 or above and increase strictly.
ReadoutCurve SpinReadoutCurve(const StateVector& psi, const OperatorMatrix& a,
                              double omega_p, const std::vector<double>& t_grid);

/// Fits the odd (sigma_y) or even (sigma_z) Taylor series of the readout
/// curve; returns <A> for a sigma_y curve and <A^2> for a sigma_z curve.
double MomentFromCurve(const ReadoutCurve& curve, int terms = 6);

struct ReadoutMoments {
  double mean = 0.0;
  double second = 0.0;
};

ReadoutMoments MomentsFromCurves(const ReadoutCurve& sigma_y_curve,
                                 const ReadoutCurve& sigma_z_curve);

struct EprReport {
  int modes = 2;
  /// Variances for two modes; raw second moments for three modes.
  double var_x_plus = 0.0;
  double var_p_minus = 0.0;
  double delta_epr = 0.0;
  double bound = 1.0;
  /// delta_epr < bound - 1e-12, so round-off at the boundary is not counted.
  bool entangled = false;
};

/// Two modes: var X+ + var P- against 1. Three modes:
/// <X+^2> + <P-^2> with X+- = X1 +- (X2 + X3)/sqrt2 against 1/2.
EprReport DuanEpr(const StateVector& psi);
EprReport DuanEpr(const DensityOperator& rho);

/// Gains in dB along (X1+X2)/sqrt2, (X1+X3)/sqrt2 and (P1-P2-P3)/sqrt3,
/// relative to the vacuum variance 1/2.
std::array<double, 3> ThreeModeGains(const StateVector& psi);

}  // namespace squeezelab

#endif  // SQUEEZELAB_METROLOGY_H_
