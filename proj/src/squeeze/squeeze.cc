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

#include "squeezelab/squeeze.h"

#include <cmath>
#include <set>
#include <string>

#include "squeezelab/errors.h"
#include "squeezelab/evolve.h"
#include "squeezelab/warnings.h"

namespace squeezelab {
namespace {

constexpr Complex kI(0.0, 1.0);

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

OperatorMatrix HermitianPart(const OperatorMatrix& x) {
  return (x + x.Adjoint()).AsHermitian();
}

}  // namespace

int MinCutoff(double r) {
  RequireR(r);
  const double t = std::tanh(r);
  if (t == 0.0) return 1;
  if (t >= 1.0) throw InvalidArgument("squeezing parameter too large");
  int n = 1;
  while (std::pow(t, 2.0 * (n + 1)) >= kTruncationThreshold) ++n;
  return n;
}

double MaxSafeSqueezing(int cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  const double t = std::pow(kTruncationThreshold, 1.0 / (2.0 * (cutoff + 1)));
  return std::atanh(t) * (1.0 - 1e-12);
}

void CheckSqueezeSpec(const HilbertLayout& layout, const SqueezeSpec& spec,
                      std::size_t expected_modes, CutoffPolicy policy) {
  RequireR(spec.r);
  if (!std::isfinite(spec.phi)) throw InvalidArgument("phase must be finite");
  if (spec.modes.size() != expected_modes) {
    throw InvalidArgument("squeeze spec needs " +
                          std::to_string(expected_modes) + " modes");
  }
  std::set<int> seen;
  for (int m : spec.modes) {
    layout.CheckMode(m);
    if (!seen.insert(m).second) {
      throw InvalidArgument("squeeze spec repeats mode " + std::to_string(m));
    }
  }
  const int need = MinCutoff(spec.r);
  for (int m : spec.modes) {
    if (layout.cutoff(m) < need) {
      const std::string msg = "r = " + std::to_string(spec.r) +
                              " needs cutoff " + std::to_string(need) +
                              " but mode " + std::to_string(m) + " has " +
                              std::to_string(layout.cutoff(m));
      if (policy == CutoffPolicy::kThrow) throw TruncationError(msg);
      EmitWarning({WarningKind::kTruncation, msg, double(need)});
      return;
    }
  }
}

OperatorMatrix TwoModeSqueezeGenerator(const HilbertLayout& layout,
                                       const SqueezeSpec& spec,
                                       CutoffPolicy policy) {
  CheckSqueezeSpec(layout, spec, 2, policy);
  const auto a1 = BuildAnnihilation(layout, spec.modes[0]);
  const auto a2 = BuildAnnihilation(layout, spec.modes[1]);
  const Complex xi = std::polar(spec.r, spec.phi);
  // i (xi a1 a2 - h.c.) = (i xi a1 a2) + h.c.
  return HermitianPart((a1 * a2) * (kI * xi));
}

OperatorMatrix TwoModeSqueezeOp(const HilbertLayout& layout,
                                const SqueezeSpec& spec) {
  return BlockUnitary(TwoModeSqueezeGenerator(layout, spec), 1.0).ToOperator();
}

StateVector TmssState(const HilbertLayout& layout, const SqueezeSpec& spec,
                      CutoffPolicy policy) {
  const auto h = TwoModeSqueezeGenerator(layout, spec, policy);
  StateVector out = Evolve(StateVector::Vacuum(layout), h, 1.0);
  CheckTruncation(out, "two-mode squeezed state");
  return out;
}

OperatorMatrix BogoliubovOp(const HilbertLayout& layout, int mode, double r,
                            double phi) {
  RequireModes(layout, 2, "BogoliubovOp");
  layout.CheckMode(mode);
  RequireR(r);
  const int partner = 1 - mode;
  return BuildAnnihilation(layout, mode) * std::cosh(r) +
         BuildCreation(layout, partner) *
             (std::exp(Complex(0.0, -phi)) * std::sinh(r));
}

OperatorMatrix EngineeredAnnihilator(const HilbertLayout& layout, int mode,
                                     double r) {
  if (layout.modes() == 3) return ThreeModeBogoliubov(layout, mode, r);
  return BogoliubovOp(layout, mode, r);
}

OperatorMatrix CouplingHamiltonian(const HilbertLayout& layout, int mode,
                                   double omega, double r) {
  if (layout.spins() < 1) {
    throw InvalidArgument("coupling Hamiltonian needs a spin");
  }
  const auto s = BuildSpinOps(layout, 0);
  return HermitianPart((EngineeredAnnihilator(layout, mode, r) * s.plus) *
                       omega);
}

OperatorMatrix AnalysisHamiltonian(const HilbertLayout& layout, int mode,
                                   double omega, double r) {
  if (layout.spins() < 1) {
    throw InvalidArgument("analysis Hamiltonian needs a spin");
  }
  const auto s = BuildSpinOps(layout, 0);
  return HermitianPart((EngineeredAnnihilator(layout, mode, r) * s.minus) *
                       omega);
}

BogoliubovCoefficients ThreeModeCoefficients(double r) {
  if (!std::isfinite(r)) throw InvalidArgument("r must be finite");
  BogoliubovCoefficients c;
  c.r = r;
  const double f_diag = (2.0 * std::cosh(r) + std::cosh(2.0 * r)) / 3.0;
  const double f_off = (std::cosh(2.0 * r) - std::cosh(r)) / 3.0;
  const double g_diag = (std::sinh(2.0 * r) - 2.0 * std::sinh(r)) / 3.0;
  const double g_off = (std::sinh(2.0 * r) + std::sinh(r)) / 3.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c.f[i][j] = i == j ? f_diag : f_off;
      c.g[i][j] = i == j ? g_diag : g_off;
    }
  }
  return c;
}

OperatorMatrix ThreeModeSqueezeGenerator(const HilbertLayout& layout,
                                         double r, CutoffPolicy policy) {
  RequireModes(layout, 3, "three-mode squeezing");
  CheckSqueezeSpec(layout, {r, 0.0, {0, 1, 2}}, 3, policy);
  const auto a1 = BuildAnnihilation(layout, 0);
  const auto a2 = BuildAnnihilation(layout, 1);
  const auto a3 = BuildAnnihilation(layout, 2);
  return HermitianPart((a1 * a2 + a2 * a3 + a3 * a1) * (kI * r));
}

OperatorMatrix ThreeModeSqueezeOp(const HilbertLayout& layout, double r) {
  return BlockUnitary(ThreeModeSqueezeGenerator(layout, r), 1.0).ToOperator();
}

StateVector ThreeModeState(const HilbertLayout& layout, double r,
                           CutoffPolicy policy) {
  const auto h = ThreeModeSqueezeGenerator(layout, r, policy);
  StateVector out = Evolve(StateVector::Vacuum(layout), h, 1.0);
  CheckTruncation(out, "three-mode squeezed state");
  return out;
}

OperatorMatrix SqueezeGenerator(const HilbertLayout& layout, double r,
                                CutoffPolicy policy) {
  if (layout.modes() == 3) return ThreeModeSqueezeGenerator(layout, r, policy);
  RequireModes(layout, 2, "SqueezeGenerator");
  return TwoModeSqueezeGenerator(layout, {r, 0.0, {0, 1}}, policy);
}

StateVector SqueezedVacuum(const HilbertLayout& layout, double r,
                           CutoffPolicy policy) {
  if (layout.modes() == 3) return ThreeModeState(layout, r, policy);
  RequireModes(layout, 2, "SqueezedVacuum");
  return TmssState(layout, {r, 0.0, {0, 1}}, policy);
}

OperatorMatrix ThreeModeBogoliubov(const HilbertLayout& layout, int j,
                                   double r) {
  RequireModes(layout, 3, "ThreeModeBogoliubov");
  if (j < 0 || j > 2) {
    throw InvalidArgument("three-mode Bogoliubov index must be 0, 1 or 2");
  }
  const auto c = ThreeModeCoefficients(r);
  OperatorMatrix k = OperatorMatrix::Zero(layout);
  for (int i = 0; i < 3; ++i) {
    k = k + BuildAnnihilation(layout, i) * c.f[i][j] +
        BuildCreation(layout, i) * c.g[i][j];
  }
  return k;
}

}  // namespace squeezelab
