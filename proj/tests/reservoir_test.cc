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

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "squeezelab/errors.h"
#include "squeezelab/evolve.h"
#include "squeezelab/operator.h"
#include "squeezelab/random.h"
#include "squeezelab/reservoir.h"
#include "squeezelab/squeeze.h"
#include "squeezelab/state.h"

namespace squeezelab {
namespace {

constexpr double kOmega = 2 * M_PI * 6.8e3;

CycleConfig Config(double r, int cycles) {
  CycleConfig c;
  c.r = r;
  c.omega = {kOmega, kOmega};
  c.cycles = cycles;
  c.mode_order = {0, 1};
  return c;
}

DensityOperator SpinDownTarget(const HilbertLayout& layout, double r) {
  const auto motion = TmssState(layout.Motional(), {r, 0.0, {0, 1}});
  return AttachSpinsDown(layout, DensityOperator::FromPure(motion));
}

// Dense S(r) on two modes from the eigendecomposition of its generator.
ComplexMatrix DenseSqueeze(int cutoff, double r) {
  const int d = cutoff + 1;
  ComplexMatrix g = ComplexMatrix::Zero(d * d, d * d);
  for (int n1 = 1; n1 <= cutoff; ++n1) {
    for (int n2 = 1; n2 <= cutoff; ++n2) {
      const double amp = r * std::sqrt(double(n1) * n2);
      g((n1 - 1) * d + n2 - 1, n1 * d + n2) += amp;
      g(n1 * d + n2, (n1 - 1) * d + n2 - 1) -= amp;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Complex(0, 1) * g);
  const ComplexVector ph = (es.eigenvalues() * Complex(0, -1)).array().exp().matrix();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// One quarter-period pulse plus reset seen in the engineered frame: mode
// `mode` loses a quantum with probability sin^2(sqrt(n) pi/2).
ComplexMatrix JaynesCummingsReset(const ComplexMatrix& sigma, int cutoff, int mode) {
  const int d = cutoff + 1;
  ComplexMatrix stay = ComplexMatrix::Zero(d * d, d * d);
  ComplexMatrix drop = ComplexMatrix::Zero(d * d, d * d);
  for (int n1 = 0; n1 <= cutoff; ++n1) {
    for (int n2 = 0; n2 <= cutoff; ++n2) {
      const int n = mode == 0 ? n1 : n2;
      const int i = n1 * d + n2;
      stay(i, i) = std::cos(std::sqrt(double(n)) * M_PI / 2);
      if (n > 0) {
        const int j = mode == 0 ? (n1 - 1) * d + n2 : n1 * d + n2 - 1;
        drop(j, i) = std::sin(std::sqrt(double(n)) * M_PI / 2);
      }
    }
  }
  return stay * sigma * stay.adjoint() + drop * sigma * drop.adjoint();
}

TEST(PumpPulseTest, TargetIsFixedPoint) {
  HilbertLayout layout({30, 30}, 1);
  const auto rho = SpinDownTarget(layout, 0.5);
  auto config = Config(0.5, 1);
  std::mt19937_64 rng(1);
  const auto after = OpticalPump(PumpPulse(OpticalPump(PumpPulse(rho, 0, config, rng)), 1,
                                           config, rng));
  EXPECT_LE(TraceDistance(rho, after), 1e-6);
}

TEST(PumpPulseTest, SingleQuantumTransfer) {
  HilbertLayout layout({3, 3}, 1);
  auto config = Config(0.0, 1);
  const auto in = DensityOperator::FromPure(StateVector::Basis(layout, {{0}, {1, 0}}));
  std::mt19937_64 rng(1);
  const auto out = PumpPulse(in, 0, config, rng);
  const auto expect = DensityOperator::FromPure(StateVector::Basis(layout, {{1}, {0, 0}}));
  EXPECT_LE(TraceDistance(out, expect), 1e-6);
}

TEST(PumpPulseTest, DriftReproducibleAndSeedSensitive) {
  HilbertLayout layout({8, 8}, 1);
  auto config = Config(0.3, 1);
  config.drift_sigma = 2 * M_PI * 200;
  const auto in = ThermalState(layout, 0.2);
  auto rng_a = MakeRandomStream(17, 0);
  auto rng_b = MakeRandomStream(17, 0);
  auto rng_c = MakeRandomStream(18, 0);
  const auto a = PumpPulse(in, 0, config, rng_a);
  const auto b = PumpPulse(in, 0, config, rng_b);
  const auto c = PumpPulse(in, 0, config, rng_c);
  EXPECT_EQ((a.entries() - b.entries()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT((a.entries() - c.entries()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PumpPulseTest, ValidatesConfig) {
  HilbertLayout layout({8, 8}, 1);
  const auto in = ThermalState(layout, 0.2);
  std::mt19937_64 rng(1);
  auto bad = Config(0.3, 1);
  bad.omega = {kOmega};
  EXPECT_THROW(PumpPulse(in, 0, bad, rng), InvalidArgument);
  bad = Config(0.3, 1);
  bad.drift_sigma = -1;
  EXPECT_THROW(PumpPulse(in, 0, bad, rng), InvalidArgument);
  EXPECT_THROW(PumpPulse(in, 2, Config(0.3, 1), rng), InvalidArgument);
  EXPECT_THROW(PumpPulse(ThermalState(HilbertLayout(2, 8), 0.2), 0, Config(0.3, 1), rng),
               InvalidArgument);
}

TEST(OpticalPumpTest, ResetsSpinAndIsIdempotent) {
  HilbertLayout layout({3, 3}, 1);
  const auto motion = ThermalState(layout.Motional(), 0.02);
  ComplexMatrix up = ComplexMatrix::Zero(layout.dimension(), layout.dimension());
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  up.bottomRightCorner(md, md) = motion.entries();
  const auto out = OpticalPump(DensityOperator(layout, up));
  EXPECT_LE((out.entries() - AttachSpinsDown(layout, motion).entries()).cwiseAbs().maxCoeff(),
            1e-15);
  const auto twice = OpticalPump(out);
  EXPECT_EQ((twice.entries() - out.entries()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(out.Trace(), 1.0, 1e-12);
}

TEST(OpticalPumpTest, EntangledInputLosesMotionalPurity) {
  HilbertLayout layout({2, 2}, 1);
  ComplexVector v = ComplexVector::Zero(layout.dimension());
  v(layout.Index({{0}, {0, 0}})) = 1 / std::sqrt(2.0);
  v(layout.Index({{1}, {1, 0}})) = 1 / std::sqrt(2.0);
  const auto rho = DensityOperator::FromPure(StateVector(layout, v));
  const double before = rho.Purity();
  const double after = PartialTraceSpin(OpticalPump(rho)).Purity();
  EXPECT_NEAR(before, 1.0, 1e-12);
  EXPECT_NEAR(after, 0.5, 1e-12);
  const auto product = SpinDownTarget(HilbertLayout({8, 8}, 1), 0.2);
  EXPECT_NEAR(OpticalPump(product).Purity(), product.Purity(), 1e-12);
}

TEST(EngineeredPopulationTest, TargetAndVacuum) {
  HilbertLayout layout(2, 30);
  const double r = 0.79;
  const auto target = DensityOperator::FromPure(TmssState(layout, {r, 0.0, {0, 1}}));
  EXPECT_NEAR(EngineeredPopulation(target, r, 0, 0), 1.0, 1e-6);
  EXPECT_NEAR(EngineeredPopulation(target, r, 1, 0), 1.0, 1e-6);
  const auto vac = DensityOperator::FromPure(StateVector::Vacuum(layout));
  const double sech2 = 1.0 / std::pow(std::cosh(r), 2);
  EXPECT_NEAR(EngineeredPopulation(vac, r, 0, 0), sech2, 1e-9);
  EXPECT_NEAR(EngineeredPopulation(vac, r, 1, 0), sech2, 1e-9);
  EXPECT_NEAR(EngineeredPopulation(vac, r, 0, 1), sech2 * std::pow(std::tanh(r), 2),
              1e-9);
  EXPECT_THROW(EngineeredPopulation(vac, r, 0, 31), InvalidArgument);
}

TEST(RunReservoirTest, TargetGivesFlatTrajectory) {
  HilbertLayout layout({30, 30}, 1);
  const auto traj = RunReservoir(SpinDownTarget(layout, 0.5), Config(0.5, 3));
  ASSERT_EQ(traj.records.size(), 4u);
  for (const auto& rec : traj.records) {
    EXPECT_GE(rec.f_exact, 1 - 1e-6);
    EXPECT_GE(rec.f_lower, 1 - 1e-6);
    EXPECT_LE(rec.trace_deficit, 1e-12);
  }
}

TEST(RunReservoirTest, MatchesEngineeredFrameOracle) {
  const int n = 20;
  const double r = 0.79;
  HilbertLayout layout({n, n}, 1);
  const auto thermal = ThermalState(layout, 0.2);
  const auto traj = RunReservoir(thermal, Config(r, 10));

  const ComplexMatrix s = DenseSqueeze(n, r);
  ComplexMatrix sigma = s.adjoint() * PartialTraceSpin(thermal).entries() * s;
  for (int c = 0; c <= 10; ++c) {
    if (c > 0) {
      sigma = JaynesCummingsReset(sigma, n, 0);
      sigma = JaynesCummingsReset(sigma, n, 1);
    }
    const double f_oracle = sigma(0, 0).real();
    EXPECT_NEAR(traj.records[c].f_exact, f_oracle, 1e-3) << "cycle " << c;
  }
}

TEST(RunReservoirTest, BoundAndMonotonicity) {
  HilbertLayout layout({20, 20}, 1);
  for (double r : {0.1, 0.79}) {
    const auto traj = RunReservoir(ThermalState(layout, 0.2), Config(r, 12));
    for (std::size_t c = 0; c < traj.records.size(); ++c) {
      const auto& rec = traj.records[c];
      EXPECT_LE(rec.f_lower, rec.f_exact + 1e-9);
      for (double p : rec.p0k) {
        EXPECT_GE(p, -1e-12);
        EXPECT_LE(p, 1 + 1e-12);
      }
      if (c > 0) {
        EXPECT_GE(rec.f_exact, traj.records[c - 1].f_exact - 1e-3) << r << " " << c;
      }
    }
  }
}

TEST(RunReservoirTest, QuarterPeriodLeavesEngineeredFourDark) {
  // sqrt(4) * pi/2 = pi: |down> S|4,0> returns to itself after a mode-0 pulse.
  HilbertLayout layout({30, 30}, 1);
  const double r = 0.5;
  const auto s = TwoModeSqueezeOp(layout.Motional(), {r, 0.0, {0, 1}});
  const StateVector four(layout.Motional(),
                         s.Apply(StateVector::Basis(layout.Motional(), {{}, {4, 0}}).amplitudes()));
  const auto rho = AttachSpinsDown(layout, DensityOperator::FromPure(four));
  std::mt19937_64 rng(0);
  const auto out = OpticalPump(PumpPulse(rho, 0, Config(r, 1), rng));
  EXPECT_NEAR(EngineeredPopulation(out, r, 0, 4), 1.0, 1e-6);
}

TEST(RunReservoirTest, DriftDegradesGracefully) {
  HilbertLayout layout({8, 8}, 1);
  const double r = 0.3;
  const std::vector<double> sigmas = {0.0, 2 * M_PI * 50, 2 * M_PI * 100, 2 * M_PI * 200};
  std::vector<double> mean(sigmas.size(), 0.0);
  const auto thermal = ThermalState(layout, 0.2);
  const int seeds = 20;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    auto config = Config(r, 10);
    config.drift_sigma = sigmas[k];
    config.seed = 2024;
    for (int s = 0; s < seeds; ++s) {
      mean[k] += RunReservoir(thermal, config, s).records.back().f_exact / seeds;
    }
  }
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    for (std::size_t j = i; j < sigmas.size(); ++j) {
      EXPECT_GE(mean[i], mean[j] - 0.05) << sigmas[i] << " vs " << sigmas[j];
    }
  }
}

TEST(RunReservoirTest, CsvLayout) {
  HilbertLayout layout({8, 8}, 1);
  const auto traj = RunReservoir(ThermalState(layout, 0.2), Config(0.3, 2));
  std::ostringstream out;
  traj.WriteCsv(out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "cycle,F_lower,F_exact,P0K1,P0K2,trace_deficit");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(RunReservoirTest, ThreeModeRuns) {
  HilbertLayout layout({5, 5, 5}, 1);
  CycleConfig config;
  config.r = 0.2;
  config.omega = {kOmega, kOmega, kOmega};
  config.cycles = 3;
  const auto traj = RunReservoir(ThermalState(layout, 0.05), config);
  ASSERT_EQ(traj.records.back().p0k.size(), 3u);
  EXPECT_GT(traj.records.back().f_exact, traj.records.front().f_exact);
}

}  // namespace
}  // namespace squeezelab
