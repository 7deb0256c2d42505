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
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "gtest/gtest.h"
#include "squeezelab/errors.h"
#include "squeezelab/random.h"
#include "squeezelab/squeeze.h"
#include "squeezelab/state.h"
#include "squeezelab/warnings.h"

namespace squeezelab {
namespace {

constexpr Complex kI(0.0, 1.0);
const double kRate = 2 * M_PI * 5.0e3;

StateVector Tmss(int cutoff, double r) {
  return TmssState(HilbertLayout(2, cutoff), {r});
}

StateVector WithSpin(const StateVector& motion, Complex down, Complex up) {
  const HilbertLayout layout = motion.layout().WithSpins(1);
  ComplexVector s(2);
  s << down, up;
  return AttachSpins(layout, s, motion);
}

// Gaussian oracle for S(r)|000>: X = exp(-rM) X0, P = exp(rM) P0 with M the
// all-ones matrix minus identity and vacuum covariance 1/2.
double ThreeModeMoment(double r, const Eigen::Vector3d& u, bool momentum) {
  const Eigen::Vector3d s = Eigen::Vector3d::Ones() / std::sqrt(3.0);
  const double along = u.dot(s);
  const double perp = u.squaredNorm() - along * along;
  const double sign = momentum ? 1.0 : -1.0;
  return 0.5 * (along * along * std::exp(sign * 4 * r) +
                perp * std::exp(-sign * 2 * r));
}

TEST(CollectiveQuadraturesTest, CanonicalPairOnInterior) {
  const HilbertLayout layout(2, 10);
  const auto q = BuildCollectiveQuadratures(layout);
  const ComplexMatrix c = Commutator(q.x_plus, q.p_plus).ToDense();
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    const auto label = layout.Labels(i);
    if (label.occupations[0] == 10 || label.occupations[1] == 10) continue;
    for (std::size_t j = 0; j < layout.dimension(); ++j) {
      const Complex want = i == j ? kI : Complex(0.0);
      EXPECT_LT(std::abs(c(i, j) - want), 1e-12) << i << "," << j;
    }
  }
}

TEST(CollectiveQuadraturesTest, JointQuadraturesCommuteAwayFromCutoff) {
  const int n = 10;
  const HilbertLayout layout(2, n);
  const auto q = BuildCollectiveQuadratures(layout);
  for (const auto& c : {Commutator(q.x_plus, q.p_minus).ToDense(),
                        Commutator(q.x_minus, q.p_plus).ToDense()}) {
    for (std::size_t i = 0; i < layout.dimension(); ++i) {
      const auto occ = layout.Labels(i).occupations;
      // Only the truncation term i(N+1)(|N><N|_2 - |N><N|_1)/2 survives.
      const double boundary = 0.5 * (n + 1) *
                              ((occ[1] == n ? 1.0 : 0.0) -
                               (occ[0] == n ? 1.0 : 0.0));
      for (std::size_t j = 0; j < layout.dimension(); ++j) {
        const Complex want = i == j ? kI * boundary : Complex(0.0);
        EXPECT_LT(std::abs(c(i, j) - want), 1e-12) << i << "," << j;
      }
    }
  }
}

TEST(CollectiveQuadraturesTest, VacuumVariances) {
  const HilbertLayout layout(2, 6);
  const auto q = BuildCollectiveQuadratures(layout);
  const auto vac = StateVector::Vacuum(layout);
  for (const auto* op : {&q.x_plus, &q.x_minus, &q.p_plus, &q.p_minus}) {
    EXPECT_NEAR(Variance(*op, vac), 0.5, 1e-14);
  }
  EXPECT_THROW(BuildCollectiveQuadratures(HilbertLayout(3, 4)),
               InvalidArgument);
}

TEST(DisplacementEncodeTest, ZeroRatesAreIdentity) {
  const auto psi = Tmss(20, 0.5);
  const auto out = DisplacementEncode(psi, {0.0, 0.0, 1e-5});
  EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-14);
}

TEST(DisplacementEncodeTest, ShiftsMeansKeepsVariances) {
  const auto psi = Tmss(32, 0.79);
  const auto q = BuildCollectiveQuadratures(psi.layout());
  const auto out = DisplacementEncode(psi, {kRate, kRate, 1e-5});
  const double shift = kRate * 1e-5;
  EXPECT_NEAR(shift, 0.3142, 1e-4);
  EXPECT_NEAR(Expectation(q.x_plus, out).real(), shift, 1e-6);
  EXPECT_NEAR(Expectation(q.p_minus, out).real(), -shift, 1e-6);
  EXPECT_NEAR(Variance(q.x_plus, out), Variance(q.x_plus, psi), 1e-8);
  EXPECT_NEAR(Variance(q.p_minus, out), Variance(q.p_minus, psi), 1e-8);
  EXPECT_NEAR(Variance(q.x_plus, psi), std::exp(-1.58) / 2, 1e-6);
}

TEST(DisplacementEncodeTest, RejectsTruncationUnsafeShift) {
  ScopedWarningCollector quiet;
  const auto psi = TmssState(HilbertLayout(2, 16), {0.79}, CutoffPolicy::kWarn);
  EXPECT_THROW(DisplacementEncode(psi, {kRate, kRate, 1e-4}),
               TruncationError);
  EXPECT_THROW(DisplacementEncode(psi, {kRate, kRate, -1.0}),
               InvalidArgument);
}

TEST(SpinConditionedEncodeTest, PlusSectorMatchesDisplacement) {
  const auto motion = Tmss(22, 0.5);
  const DisplacementParams params{kRate, 0.7 * kRate, 1e-5};
  const auto plain = DisplacementEncode(motion, params);
  const double h = 1.0 / std::sqrt(2.0);

  const auto out = SpinConditionedEncode(WithSpin(motion, h, h), params);
  const auto want = WithSpin(plain, h, h);
  EXPECT_GT(Overlap(out, want), 1.0 - 1e-8);
  const ComplexMatrix spin = SpinMarginal(out);
  EXPECT_GT(0.5 * (spin.sum()).real(), 1.0 - 1e-9);
  EXPECT_NEAR((spin * spin).trace().real(), 1.0, 1e-9);
}

TEST(SpinConditionedEncodeTest, MinusSectorDisplacesOppositely) {
  const auto motion = Tmss(22, 0.5);
  const DisplacementParams params{kRate, 0.7 * kRate, 1e-5};
  const double h = 1.0 / std::sqrt(2.0);
  const auto out = SpinConditionedEncode(WithSpin(motion, h, -h), params);
  const auto q = BuildCollectiveQuadratures(out.layout());
  EXPECT_NEAR(Expectation(q.x_plus, out).real(), -kRate * 1e-5, 1e-6);
  EXPECT_NEAR(Expectation(q.p_minus, out).real(), 0.7 * kRate * 1e-5, 1e-6);
}

TEST(SpinConditionedEncodeTest, RejectsOtherSpinStates) {
  const auto motion = Tmss(16, 0.3);
  EXPECT_THROW(SpinConditionedEncode(WithSpin(motion, 1.0, 0.0),
                                     {kRate, kRate, 1e-5}),
               InvalidArgument);
  EXPECT_THROW(SpinConditionedEncode(motion, {kRate, kRate, 1e-5}),
               InvalidArgument);
}

TEST(QfiTest, AnalyticForms) {
  EXPECT_TRUE(QfiMatrixAnalytic(0.0, 1.0).isApprox(
      Eigen::Matrix2d::Identity() * 2.0));
  EXPECT_NEAR(VarianceAnalytic(0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(QfiMatrixAnalytic(0.79, 1.0)(0, 0), 2 * std::exp(1.58), 1e-12);
  EXPECT_NEAR(EnhancementDb(0.79), 6.86, 5e-3);
  for (double r : {0.0, 0.3, 0.79}) {
    for (double t : {1.0, 2.0}) {
      const auto f = QfiMatrixAnalytic(r, t);
      for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(VarianceAnalytic(r, t) * f(k, k), 1.0, 1e-15);
      }
      EXPECT_NEAR(f.inverse().trace(), std::exp(-2 * r) / (t * t), 1e-15);
    }
  }
  EXPECT_THROW(QfiMatrixAnalytic(0.5, 0.0), InvalidArgument);
  EXPECT_THROW(VarianceAnalytic(0.5, 0.0), InvalidArgument);
}

TEST(QfiTest, NumericVacuum) {
  const auto f = QfiMatrixNumeric(StateVector::Vacuum(HilbertLayout(2, 4)), 1);
  EXPECT_NEAR(f(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(f(1, 1), 2.0, 1e-12);
  EXPECT_NEAR(f(0, 1), 0.0, 1e-12);
}

TEST(QfiTest, NumericMatchesAnalyticOnTmss) {
  for (double r : {0.5, 0.79}) {
    const auto psi = Tmss(36, r);
    for (double t : {1.0, 2.0}) {
      const auto f = QfiMatrixNumeric(psi, t);
      const auto want = QfiMatrixAnalytic(r, t);
      EXPECT_NEAR(f(0, 0) / want(0, 0), 1.0, 1e-4);
      EXPECT_NEAR(f(1, 1) / want(1, 1), 1.0, 1e-4);
      EXPECT_LE(std::abs(f(0, 1)), 1e-6);
      EXPECT_NEAR(f(0, 1), f(1, 0), 1e-12);
    }
  }
}

TEST(JointMeasurementTest, VacuumVariance) {
  const auto rec = SampleJointMeasurement(0.0, {0.0, 0.0, 1.0}, 1000000, 11);
  EXPECT_NEAR(rec.empirical_variance[0], 0.5, 0.002);
  EXPECT_NEAR(rec.empirical_variance[1], 0.5, 0.002);
  EXPECT_EQ(rec.analytic_variance[0], 0.5);
}

TEST(JointMeasurementTest, SeedDeterminesRecord) {
  const DisplacementParams p{kRate, kRate, 1e-4};
  const auto a = SampleJointMeasurement(0.79, p, 500, 3);
  const auto b = SampleJointMeasurement(0.79, p, 500, 3);
  const auto c = SampleJointMeasurement(0.79, p, 500, 4);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.empirical_variance, b.empirical_variance);
  EXPECT_NE(a.estimates, c.estimates);
  EXPECT_THROW(SampleJointMeasurement(0.79, p, 1, 3), InvalidArgument);
  EXPECT_THROW(SampleJointMeasurement(0.79, {kRate, kRate, 0.0}, 10, 3),
               InvalidArgument);
}

TEST(JointMeasurementTest, EstimatorsAreUnbiased) {
  const DisplacementParams p{kRate, -0.5 * kRate, 1e-4};
  const auto rec = SampleJointMeasurement(0.79, p, 100000, 5);
  double m0 = 0, m1 = 0;
  for (const auto& e : rec.estimates) {
    m0 += e[0];
    m1 += e[1];
  }
  m0 /= rec.trials;
  m1 /= rec.trials;
  const double se = std::sqrt(rec.analytic_variance[0] / rec.trials);
  EXPECT_NEAR(m0, kRate, 4 * se);
  EXPECT_NEAR(m1, -0.5 * kRate, 4 * se);
}

TEST(JointMeasurementTest, HistogramMatchesDensity) {
  const double r = 0.79;
  const DisplacementParams p{kRate, 0.5 * kRate, 1e-4};
  JointMeasurementSampler sampler(r, p);
  const int bins = 10;
  const int samples = 100000;
  // Equal-probability edges from the closed-form marginal of the density.
  boost::math::normal chi_dist(-p.omega_plus * p.t, std::exp(-r) / std::sqrt(2.0));
  boost::math::normal eta_dist(-p.omega_minus * p.t, std::exp(-r) / std::sqrt(2.0));
  std::vector<double> chi_edges, eta_edges;
  for (int k = 1; k < bins; ++k) {
    chi_edges.push_back(boost::math::quantile(chi_dist, double(k) / bins));
    eta_edges.push_back(boost::math::quantile(eta_dist, double(k) / bins));
  }
  auto bin_of = [&](const std::vector<double>& edges, double v) {
    return int(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
  };
  std::vector<int> counts(bins * bins, 0);
  auto rng = MakeRandomStream(99, 0);
  for (int i = 0; i < samples; ++i) {
    const auto s = sampler.Draw(rng);
    ++counts[bin_of(chi_edges, s[0]) * bins + bin_of(eta_edges, s[1])];
  }
  const double expected = double(samples) / (bins * bins);
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(bins * bins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.01);

  // The density integrates to one and peaks at the mean.
  const double s = sampler.sigma();
  double integral = 0.0;
  const double h = s / 20;
  for (double x = -8 * s; x <= 8 * s; x += h) {
    for (double y = -8 * s; y <= 8 * s; y += h) {
      integral += sampler.Density(sampler.mean()[0] + x, sampler.mean()[1] + y);
    }
  }
  EXPECT_NEAR(integral * h * h, 1.0, 1e-6);
}

TEST(JointMeasurementTest, SamplerMomentsMatchTruncatedState) {
  const double r = 0.5;
  const DisplacementParams p{kRate, kRate, 1e-5};
  const auto psi = DisplacementEncode(Tmss(30, r), p);
  const auto q = BuildCollectiveQuadratures(psi.layout());
  JointMeasurementSampler sampler(r, p);
  auto rng = MakeRandomStream(21, 0);
  const int n = 2000000;
  double s1[2] = {0, 0}, s2[2] = {0, 0};
  for (int i = 0; i < n; ++i) {
    const auto d = sampler.Draw(rng);
    for (int k = 0; k < 2; ++k) {
      s1[k] += d[k];
      s2[k] += d[k] * d[k];
    }
  }
  const double mean_chi = s1[0] / n, mean_eta = s1[1] / n;
  const double var_chi = s2[0] / n - mean_chi * mean_chi;
  const double var_eta = s2[1] / n - mean_eta * mean_eta;
  EXPECT_NEAR(-mean_chi, Expectation(q.x_plus, psi).real(), 1e-3);
  EXPECT_NEAR(mean_eta, Expectation(q.p_minus, psi).real(), 1e-3);
  EXPECT_NEAR(var_chi, Variance(q.x_plus, psi), 1e-3);
  EXPECT_NEAR(var_eta, Variance(q.p_minus, psi), 1e-3);
}

TEST(JointMeasurementTest, HeisenbergScaling) {
  std::vector<double> ts, vars;
  for (int k = 0; k <= 8; ++k) {
    const double t = 1e-5 * std::pow(10.0, k / 8.0);
    const auto rec = SampleJointMeasurement(0.79, {kRate, kRate, t}, 10000, 7,
                                            std::uint64_t(k));
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(rec.empirical_variance[j] / rec.analytic_variance[j], 1.0,
                  0.05);
    }
    ts.push_back(t);
    vars.push_back(rec.empirical_variance[0]);
  }
  EXPECT_NEAR(LogLogSlope(ts, vars), -2.0, 0.05);
}

TEST(JointMeasurementTest, SmallSampleVarianceWithinChiSquareSpread) {
  const int trials = 200;
  for (int k = 0; k < 8; ++k) {
    const double t = 2e-5 * (k + 1);
    const auto rec = SampleJointMeasurement(0.79, {kRate, kRate, t}, trials, 8,
                                            std::uint64_t(k));
    const double se = rec.analytic_variance[0] * std::sqrt(2.0 / (trials - 1));
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(rec.empirical_variance[j], rec.analytic_variance[j], 3 * se);
    }
  }
}

TEST(LogLogSlopeTest, ExactPowerLaw) {
  EXPECT_NEAR(LogLogSlope({1, 2, 4, 8}, {3, 0.75, 0.1875, 0.046875}), -2.0,
              1e-14);
  EXPECT_THROW(LogLogSlope({1}, {1}), InvalidArgument);
  EXPECT_THROW(LogLogSlope({1, -2}, {1, 1}), InvalidArgument);
}

std::vector<double> Grid(double t_max, int points) {
  std::vector<double> t;
  for (int i = 0; i < points; ++i) t.push_back(t_max * i / (points - 1));
  return t;
}

// <sin(W t A) sigma_y> + <cos(W t A) sigma_z> from the eigendecomposition of
// the motional matrix of A.
double ReadoutOracle(const StateVector& psi, const ComplexMatrix& a_motion,
                     double theta) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a_motion);
  const ComplexMatrix& v = es.eigenvectors();
  const Eigen::VectorXd d = es.eigenvalues();
  const ComplexMatrix sin_a =
      v * (theta * d).array().sin().matrix().asDiagonal() * v.adjoint();
  const ComplexMatrix cos_a =
      v * (theta * d).array().cos().matrix().asDiagonal() * v.adjoint();
  const Eigen::Index md = a_motion.rows();
  const ComplexVector down = psi.amplitudes().head(md);
  const ComplexVector up = psi.amplitudes().tail(md);
  // sigma_y: <down|y|up> = i, <up|y|down> = -i; sigma_z: -1 down, +1 up.
  const Complex y = kI * down.dot(sin_a * up) - kI * up.dot(sin_a * down);
  const Complex z = up.dot(cos_a * up) - down.dot(cos_a * down);
  return (y + z).real();
}

TEST(ReadoutTest, MatchesOperatorFunctionOracle) {
  const auto motion = DisplacementEncode(Tmss(14, 0.3), {kRate, kRate, 1e-5});
  const auto q_motion = BuildCollectiveQuadratures(motion.layout());
  const double omega_p = 2 * M_PI * 10e3;
  const auto grid = Grid(60e-6, 13);
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& spin : {std::pair<Complex, Complex>{h, -kI * h},
                           std::pair<Complex, Complex>{0.0, 1.0},
                           std::pair<Complex, Complex>{1.0, 0.0}}) {
    const auto psi = WithSpin(motion, spin.first, spin.second);
    ASSERT_LE(psi.dimension(), 2048u);
    const auto q = BuildCollectiveQuadratures(psi.layout());
    for (const auto& pair : {std::make_pair(&q.x_plus, &q_motion.x_plus),
                             std::make_pair(&q.p_minus, &q_motion.p_minus)}) {
      const auto curve = SpinReadoutCurve(psi, *pair.first, omega_p, grid);
      const ComplexMatrix a = pair.second->ToDense();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = 1.0 - 2.0 * curve.curve.p_down[i];
        EXPECT_NEAR(z, ReadoutOracle(psi, a, omega_p * grid[i]), 1e-8);
      }
    }
  }
}

TEST(ReadoutTest, StartsAtPreparedSpin) {
  const auto motion = Tmss(12, 0.3);
  const double h = 1.0 / std::sqrt(2.0);
  const auto y_state = WithSpin(motion, h, -kI * h);
  const auto q = BuildCollectiveQuadratures(y_state.layout());
  const auto y = SpinReadoutCurve(y_state, q.x_plus, 1e4, {0.0, 1e-5});
  EXPECT_EQ(y.axis, ReadoutAxis::kSigmaY);
  EXPECT_EQ(y.eigenvalue, 1);
  EXPECT_NEAR(y.curve.p_down[0], 0.5, 1e-15);
  const auto z = SpinReadoutCurve(WithSpin(motion, 1.0, 0.0), q.x_plus, 1e4,
                                  {0.0, 1e-5});
  EXPECT_EQ(z.axis, ReadoutAxis::kSigmaZ);
  EXPECT_EQ(z.eigenvalue, -1);
  EXPECT_EQ(z.curve.p_down[0], 1.0);
  EXPECT_THROW(SpinReadoutCurve(WithSpin(motion, h, h), q.x_plus, 1e4, {0.0}),
               InvalidArgument);
  EXPECT_THROW(MomentsFromCurves(z, y), InvalidArgument);
}

ReadoutMoments RecoverMoments(const StateVector& motion, bool momentum) {
  const double h = 1.0 / std::sqrt(2.0);
  const auto y_state = WithSpin(motion, h, -kI * h);
  const auto z_state = WithSpin(motion, 0.0, 1.0);
  const auto q = BuildCollectiveQuadratures(y_state.layout());
  const OperatorMatrix& a = momentum ? q.p_minus : q.x_plus;
  const double omega_p = 2 * M_PI * 10e3;
  const auto grid = Grid(40e-6, 41);
  return MomentsFromCurves(SpinReadoutCurve(y_state, a, omega_p, grid),
                           SpinReadoutCurve(z_state, a, omega_p, grid));
}

TEST(ReadoutTest, VacuumMoments) {
  const auto m = RecoverMoments(StateVector::Vacuum(HilbertLayout(2, 12)),
                                false);
  EXPECT_NEAR(m.mean, 0.0, 5e-3);
  EXPECT_NEAR(m.second, 0.5, 5e-3);
}

TEST(ReadoutTest, EncodedTmssMoments) {
  const auto motion = DisplacementEncode(Tmss(24, 0.79), {kRate, kRate, 1e-5});
  const auto q = BuildCollectiveQuadratures(motion.layout());
  for (bool momentum : {false, true}) {
    const OperatorMatrix& a = momentum ? q.p_minus : q.x_plus;
    const double mean = Expectation(a, motion).real();
    const double second = Expectation(a * a, motion).real();
    const auto m = RecoverMoments(motion, momentum);
    EXPECT_NEAR(m.mean / mean, 1.0, 0.01);
    EXPECT_NEAR(m.second / second, 1.0, 0.01);
  }
  EXPECT_NEAR(Expectation(q.x_plus * q.x_plus, motion).real(), 0.2017, 1e-4);
}

TEST(DuanTest, TwoModeValues) {
  const auto vac = DuanEpr(StateVector::Vacuum(HilbertLayout(2, 4)));
  EXPECT_NEAR(vac.delta_epr, 1.0, 1e-14);
  EXPECT_FALSE(vac.entangled);
  const auto tmss = DuanEpr(Tmss(26, 0.79));
  EXPECT_NEAR(tmss.delta_epr, std::exp(-1.58), 1e-6);
  EXPECT_GE(tmss.delta_epr, 0.205);
  EXPECT_LE(tmss.delta_epr, 0.207);
  EXPECT_TRUE(tmss.entangled);
  EXPECT_EQ(tmss.delta_epr, tmss.var_x_plus + tmss.var_p_minus);
  const auto thermal = DuanEpr(ThermalState(HilbertLayout(2, 12), 0.2));
  EXPECT_NEAR(thermal.delta_epr, 1.4, 1e-6);
  EXPECT_THROW(DuanEpr(StateVector::Vacuum(HilbertLayout(1, 4))),
               InvalidArgument);
}

TEST(DuanTest, ThreeModeMatchesGaussianOracle) {
  const double r = 0.5;
  const auto psi = ThreeModeState(HilbertLayout(3, 24), r);
  const auto rep = DuanEpr(psi);
  const double k = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(rep.bound, 0.5);
  EXPECT_NEAR(rep.var_x_plus, ThreeModeMoment(r, {1, k, k}, false), 1e-5);
  EXPECT_NEAR(rep.var_p_minus, ThreeModeMoment(r, {1, -k, -k}, true), 1e-5);
  EXPECT_NEAR(rep.delta_epr, 0.778, 1e-3);
  EXPECT_FALSE(rep.entangled);
  const auto vac = DuanEpr(StateVector::Vacuum(HilbertLayout(3, 2)));
  EXPECT_NEAR(vac.delta_epr, 2.0, 1e-14);
}

TEST(ThreeModeGainsTest, MatchesGaussianOracle) {
  const auto zero = ThreeModeGains(StateVector::Vacuum(HilbertLayout(3, 3)));
  for (double g : zero) EXPECT_NEAR(g, 0.0, 1e-12);
  const double k2 = 1.0 / std::sqrt(2.0), k3 = 1.0 / std::sqrt(3.0);
  for (double r : {0.1, 0.3, 0.5}) {
    const auto gains = ThreeModeGains(ThreeModeState(HilbertLayout(3, 24), r));
    const double want[3] = {
        10 * std::log10(0.5 / ThreeModeMoment(r, {k2, k2, 0}, false)),
        10 * std::log10(0.5 / ThreeModeMoment(r, {k2, 0, k2}, false)),
        10 * std::log10(0.5 / ThreeModeMoment(r, {k3, -k3, -k3}, true))};
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(gains[j], want[j], 1e-4) << r;
  }
}

}  // namespace
}  // namespace squeezelab
