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

#include "squeezelab/metrology.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "squeezelab/errors.h"
#include "squeezelab/evolve.h"
#include "squeezelab/random.h"

namespace squeezelab {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr double kEigenstateTolerance = 1e-6;
constexpr double kBoundGuard = 1e-12;

void RequireModes(const HilbertLayout& layout, int count, const char* what) {
  if (layout.modes() != count) {
    throw InvalidArgument(std::string(what) + " needs a " +
                          std::to_string(count) + "-mode layout, got " +
                          std::to_string(layout.modes()));
  }
}

void RequireR(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("squeezing parameter must be finite and >= 0");
  }
}

void RequirePositiveTime(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("interrogation time must be finite and > 0");
  }
}

ComplexVector Step(const OperatorMatrix& h, double t, const ComplexVector& v) {
  if (t == 0.0) return v;
  return ExpmAction(h.entries(), t, v);
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double SampleVariance(const std::vector<double>& v) {
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / double(v.size() - 1);
}

// <sigma> of spin 0 for sigma in {x, y, z}.
std::array<double, 3> SpinVector(const StateVector& psi) {
  if (psi.layout().spins() != 1) {
    throw InvalidArgument("spin readout needs exactly one spin, layout has " +
                          std::to_string(psi.layout().spins()));
  }
  const auto s = BuildSpinOps(psi.layout(), 0);
  return {Expectation(s.x, psi).real(), Expectation(s.y, psi).real(),
          Expectation(s.z, psi).real()};
}

template <typename State>
EprReport DuanImpl(const State& state) {
  const HilbertLayout& layout = state.layout();
  EprReport report;
  report.modes = layout.modes();
  if (layout.modes() == 2) {
    const auto q = BuildCollectiveQuadratures(layout);
    report.var_x_plus = Variance(q.x_plus, state);
    report.var_p_minus = Variance(q.p_minus, state);
    report.bound = 1.0;
  } else if (layout.modes() == 3) {
    const auto q1 = BuildQuadratures(layout, 0);
    const auto q2 = BuildQuadratures(layout, 1);
    const auto q3 = BuildQuadratures(layout, 2);
    const auto x_plus = (q1.x + (q2.x + q3.x) * kInvSqrt2).AsHermitian();
    const auto p_minus = (q1.p - (q2.p + q3.p) * kInvSqrt2).AsHermitian();
    report.var_x_plus = Expectation(x_plus * x_plus, state).real();
    report.var_p_minus = Expectation(p_minus * p_minus, state).real();
    report.bound = 0.5;
  } else {
    throw InvalidArgument("Duan criterion supports 2 or 3 modes, got " +
                          std::to_string(layout.modes()));
  }
  report.delta_epr = report.var_x_plus + report.var_p_minus;
  report.entangled = report.delta_epr < report.bound - kBoundGuard;
  return report;
}

}  // namespace

CollectiveQuadratures BuildCollectiveQuadratures(const HilbertLayout& layout) {
  RequireModes(layout, 2, "collective quadratures");
  const auto q1 = BuildQuadratures(layout, 0);
  const auto q2 = BuildQuadratures(layout, 1);
  return {((q1.x + q2.x) * kInvSqrt2).AsHermitian(),
          ((q1.x - q2.x) * kInvSqrt2).AsHermitian(),
          ((q1.p + q2.p) * kInvSqrt2).AsHermitian(),
          ((q1.p - q2.p) * kInvSqrt2).AsHermitian()};
}

void DisplacementParams::Validate() const {
  if (!std::isfinite(omega_plus) || !std::isfinite(omega_minus)) {
    throw InvalidArgument("displacement rates must be finite");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("encoding time must be finite and >= 0");
  }
}

StateVector DisplacementEncode(const StateVector& psi,
                               const DisplacementParams& params) {
  params.Validate();
  const auto q = BuildCollectiveQuadratures(psi.layout());
  ComplexVector v = Step(q.x_minus * params.omega_minus, params.t,
                         psi.amplitudes());
  v = Step(q.p_plus * params.omega_plus, params.t, v);
  StateVector out = StateVector::Normalized(psi.layout(), std::move(v));
  const double top = TopLevelPopulation(out);
  if (top > kTruncationThreshold) {
    throw TruncationError("displacement leaves " + std::to_string(top) +
                          " on the top Fock levels of " +
                          psi.layout().ToString());
  }
  return out;
}

StateVector SpinConditionedEncode(const StateVector& psi,
                                  const DisplacementParams& params) {
  params.Validate();
  const auto spin = SpinVector(psi);
  if (std::abs(spin[0]) < 1.0 - kEigenstateTolerance) {
    throw InvalidArgument("spin is not a sigma_x eigenstate (<sigma_x> = " +
                          std::to_string(spin[0]) + ")");
  }
  const auto q = BuildCollectiveQuadratures(psi.layout());
  const auto sx = BuildSpinOps(psi.layout(), 0).x;
  ComplexVector v =
      Step((q.x_minus * sx).AsHermitian() * params.omega_minus, params.t,
           psi.amplitudes());
  v = Step((q.p_plus * sx).AsHermitian() * params.omega_plus, params.t, v);
  StateVector out = StateVector::Normalized(psi.layout(), std::move(v));
  const double top = TopLevelPopulation(out);
  if (top > kTruncationThreshold) {
    throw TruncationError("displacement leaves " + std::to_string(top) +
                          " on the top Fock levels of " +
                          psi.layout().ToString());
  }
  return out;
}

Eigen::Matrix2d QfiMatrixAnalytic(double r, double t) {
  RequireR(r);
  RequirePositiveTime(t);
  return Eigen::Matrix2d::Identity() * (2.0 * std::exp(2.0 * r) * t * t);
}

double VarianceAnalytic(double r, double t) {
  RequireR(r);
  RequirePositiveTime(t);
  return 0.5 * std::exp(-2.0 * r) / (t * t);
}

double EnhancementDb(double r) {
  RequireR(r);
  return 10.0 * std::log10(std::exp(2.0 * r));
}

Eigen::Matrix2d QfiMatrixNumeric(const StateVector& probe, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("interrogation time must be finite and >= 0");
  }
  const auto q = BuildCollectiveQuadratures(probe.layout());
  const ComplexVector& psi = probe.amplitudes();
  const std::array<ComplexVector, 2> hv = {q.p_plus.Apply(psi) * t,
                                           q.x_minus.Apply(psi) * t};
  std::array<double, 2> mean;
  for (int m = 0; m < 2; ++m) mean[m] = psi.dot(hv[m]).real();
  Eigen::Matrix2d f;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      // <{H_m, H_n}> = 2 Re <H_m psi | H_n psi>.
      f(m, n) = 4.0 * hv[m].dot(hv[n]).real() - 4.0 * mean[m] * mean[n];
    }
  }
  return f;
}

JointMeasurementSampler::JointMeasurementSampler(
    double r, const DisplacementParams& params)
    : r_(r),
      sigma_(std::exp(-r) * kInvSqrt2),
      mean_{-params.omega_plus * params.t, -params.omega_minus * params.t} {
  RequireR(r);
  params.Validate();
}

std::array<double, 2> JointMeasurementSampler::Draw(std::mt19937_64& rng) {
  const double chi = mean_[0] + sigma_ * normal_(rng);
  const double eta = mean_[1] + sigma_ * normal_(rng);
  return {chi, eta};
}

double JointMeasurementSampler::Density(double chi, double eta) const {
  const double dc = chi - mean_[0];
  const double de = eta - mean_[1];
  return std::exp(2.0 * r_ - std::exp(2.0 * r_) * (dc * dc + de * de)) / std::numbers::pi;
}

EstimationRecord SampleJointMeasurement(double r,
                                        const DisplacementParams& params,
                                        int trials, std::uint64_t seed,
                                        std::uint64_t stream, int batch) {
  if (trials < 2) throw InvalidArgument("need at least 2 trials");
  if (batch < 1) throw InvalidArgument("batch size must be >= 1");
  RequirePositiveTime(params.t);
  JointMeasurementSampler sampler(r, params);
  std::mt19937_64 rng = MakeRandomStream(seed, stream);

  EstimationRecord rec;
  rec.trials = trials;
  rec.batch = batch;
  rec.estimates.reserve(trials);
  std::array<std::vector<double>, 2> columns;
  for (auto& c : columns) c.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    double chi = 0.0;
    double eta = 0.0;
    for (int b = 0; b < batch; ++b) {
      const auto s = sampler.Draw(rng);
      chi += s[0];
      eta += s[1];
    }
    const std::array<double, 2> est = {-chi / batch / params.t,
                                       -eta / batch / params.t};
    rec.estimates.push_back(est);
    columns[0].push_back(est[0]);
    columns[1].push_back(est[1]);
  }
  const double analytic = VarianceAnalytic(r, params.t) / batch;
  const double vacuum = VarianceAnalytic(0.0, params.t) / batch;
  for (int k = 0; k < 2; ++k) {
    rec.empirical_variance[k] = SampleVariance(columns[k]);
    rec.analytic_variance[k] = analytic;
    rec.enhancement_db[k] =
        10.0 * std::log10(vacuum / rec.empirical_variance[k]);
  }
  return rec;
}

double LogLogSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("slope needs two or more (x, y) pairs");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidArgument("log-log slope needs positive data");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = Mean(lx);
  const double my = Mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("log-log slope needs distinct x");
  return sxy / sxx;
}

ReadoutCurve SpinReadoutCurve(const StateVector& psi, const OperatorMatrix& a,
                              double omega_p,
                              const std::vector<double>& t_grid) {
  RequireSameLayout(a.layout(), psi.layout(), "SpinReadoutCurve");
  if (!a.hermitian()) throw InvalidArgument("readout observable not Hermitian");
  if (!(omega_p > 0.0) || !std::isfinite(omega_p)) {
    throw InvalidArgument("readout rate must be finite and > 0");
  }
  if (t_grid.empty()) throw InvalidArgument("empty readout time grid");
  const auto spin = SpinVector(psi);

  ReadoutCurve out;
  out.omega_p = omega_p;
  if (std::abs(spin[1]) >= 1.0 - kEigenstateTolerance) {
    out.axis = ReadoutAxis::kSigmaY;
    out.eigenvalue = spin[1] > 0 ? 1 : -1;
  } else if (std::abs(spin[2]) >= 1.0 - kEigenstateTolerance) {
    out.axis = ReadoutAxis::kSigmaZ;
    out.eigenvalue = spin[2] > 0 ? 1 : -1;
  } else {
    throw InvalidArgument(
        "readout needs spin 0 in a sigma_y or sigma_z eigenstate");
  }

  const auto s = BuildSpinOps(psi.layout(), 0);
  const OperatorMatrix h = (a * s.x).AsHermitian() * (0.5 * omega_p);
  out.curve.dimensionality = 1;
  ComplexVector v = psi.amplitudes();
  double prev = 0.0;
  for (double t : t_grid) {
    if (!(t >= prev) || !std::isfinite(t) ||
        (!out.curve.times.empty() && t == prev)) {
      throw InvalidArgument("readout times must be >= 0 and increasing");
    }
    v = Step(h, t - prev, v);
    prev = t;
    const double z = v.dot(s.z.Apply(v)).real();
    out.curve.times.push_back({t});
    out.curve.p_down.push_back(std::clamp(0.5 * (1.0 - z), 0.0, 1.0));
  }
  out.curve.Validate();
  return out;
}

double MomentFromCurve(const ReadoutCurve& curve, int terms) {
  curve.curve.Validate();
  if (curve.curve.dimensionality != 1) {
    throw InvalidArgument("readout curve must be one-dimensional");
  }
  if (terms < 2) throw InvalidArgument("need at least two series terms");
  const int m = static_cast<int>(curve.curve.size());
  if (m <= terms) {
    throw InvalidArgument("readout curve has " + std::to_string(m) +
                          " points for " + std::to_string(terms) + " terms");
  }
  const bool odd = curve.axis == ReadoutAxis::kSigmaY;
  double x_max = 0.0;
  for (const auto& t : curve.curve.times) {
    x_max = std::max(x_max, curve.omega_p * t[0]);
  }
  if (!(x_max > 0.0)) throw InvalidArgument("readout grid has no extent");

  Eigen::MatrixXd design(m, terms);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double u = curve.omega_p * curve.curve.times[i][0] / x_max;
    rhs(i) = (1.0 - 2.0 * curve.curve.p_down[i]) * curve.eigenvalue;
    for (int j = 0; j < terms; ++j) {
      const int n = odd ? 2 * j + 1 : 2 * j;
      design(i, j) = (j % 2 ? -1.0 : 1.0) * std::pow(u, n) / std::tgamma(n + 1.0);
    }
  }
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(rhs);
  // beta_j = m_n x_max^n
  return odd ? beta(0) / x_max : beta(1) / (x_max * x_max);
}

ReadoutMoments MomentsFromCurves(const ReadoutCurve& sigma_y_curve,
                                 const ReadoutCurve& sigma_z_curve) {
  if (sigma_y_curve.axis != ReadoutAxis::kSigmaY ||
      sigma_z_curve.axis != ReadoutAxis::kSigmaZ) {
    throw InvalidArgument("moments need a sigma_y and a sigma_z curve");
  }
  return {MomentFromCurve(sigma_y_curve), MomentFromCurve(sigma_z_curve)};
}

EprReport DuanEpr(const StateVector& psi) { return DuanImpl(psi); }
EprReport DuanEpr(const DensityOperator& rho) { return DuanImpl(rho); }

std::array<double, 3> ThreeModeGains(const StateVector& psi) {
  const HilbertLayout& layout = psi.layout();
  RequireModes(layout, 3, "three-mode gains");
  const auto q1 = BuildQuadratures(layout, 0);
  const auto q2 = BuildQuadratures(layout, 1);
  const auto q3 = BuildQuadratures(layout, 2);
  const std::array<OperatorMatrix, 3> axes = {
      ((q1.x + q2.x) * kInvSqrt2).AsHermitian(),
      ((q1.x + q3.x) * kInvSqrt2).AsHermitian(),
      ((q1.p - q2.p - q3.p) * (1.0 / std::sqrt(3.0))).AsHermitian()};
  std::array<double, 3> gains;
  for (int k = 0; k < 3; ++k) {
    gains[k] = 10.0 * std::log10(0.5 / Variance(axes[k], psi));
  }
  return gains;
}

}  // namespace squeezelab
