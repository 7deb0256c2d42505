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

#ifndef SQUEEZELAB_SQUEEZE_H_
#define SQUEEZELAB_SQUEEZE_H_

#include <array>
#include <vector>

#include "squeezelab/layout.h"
#include "squeezelab/operator.h"
#include "squeezelab/state.h"

namespace squeezelab {

/// xi = r e^{i phi} acting on a pair or triple of modes.
struct SqueezeSpec {
  double r = 0.0;
  double phi = 0.0;
  std::vector<int> modes = {0, 1};
};

/// Smallest N with tanh(r)^(2(N+1)) < kTruncationThreshold.
int MinCutoff(double r);
/// Largest r for which `cutoff` passes the tail test.
double MaxSafeSqueezing(int cutoff);

enum class CutoffPolicy {
  kThrow,  // TruncationError when a cutoff is below MinCutoff(r)
  kWarn,   // truncation warning instead
};

/// Checks r >= 0 and the mode list; a participating cutoff below
/// MinCutoff(r) is handled per `policy`.
void CheckSqueezeSpec(const HilbertLayout& layout, const SqueezeSpec& spec,
                      std::size_t expected_modes,
                      CutoffPolicy policy = CutoffPolicy::kThrow);

/// Hermitian H with S(xi) = exp(-i H), i.e. H = i (xi a1 a2 - xi* a1^dag
/// a2^dag).
OperatorMatrix TwoModeSqueezeGenerator(
    const HilbertLayout& layout, const SqueezeSpec& spec,
    CutoffPolicy policy = CutoffPolicy::kThrow);
/// S(xi) = exp[xi a1 a2 - xi* a1^dag a2^dag]. Unitary to 1e-9.
OperatorMatrix TwoModeSqueezeOp(const HilbertLayout& layout,
                                const SqueezeSpec& spec);
/// S(xi)|0,0> with every spin in |down>.
StateVector TmssState(const HilbertLayout& layout, const SqueezeSpec& spec,
                      CutoffPolicy policy = CutoffPolicy::kThrow);

/// K_i = a_i cosh r + e^{-i phi} a_j^dag sinh r, j the partner of mode i.
OperatorMatrix BogoliubovOp(const HilbertLayout& layout, int mode, double r,
                            double phi = 0.0);

/// Bogoliubov annihilator of `mode` on a two- or three-mode layout
/// (BogoliubovOp or ThreeModeBogoliubov).
OperatorMatrix EngineeredAnnihilator(const HilbertLayout& layout, int mode,
                                     double r);

/// Omega (K_i sigma+ + K_i^dag sigma-) with spin 0, K_i from
/// EngineeredAnnihilator.
OperatorMatrix CouplingHamiltonian(const HilbertLayout& layout, int mode,
                                   double omega, double r);
/// Omega (K_i sigma- + K_i^dag sigma+).
OperatorMatrix AnalysisHamiltonian(const HilbertLayout& layout, int mode,
                                   double omega, double r);

/// Three-mode Bogoliubov table with K_j = sum_i (f[i][j] a_i + g[i][j]
/// a_i^dag) and S a_j S^dag = K_j for S(r) below. Index order [i][j].
struct BogoliubovCoefficients {
  double r = 0.0;
  std::array<std::array<double, 3>, 3> f{};
  std::array<std::array<double, 3>, 3> g{};
};

/// f_diag = (2 cosh r + cosh 2r)/3, f_off = (cosh 2r - cosh r)/3,
/// g_diag = (sinh 2r - 2 sinh r)/3, g_off = (sinh 2r + sinh r)/3.
BogoliubovCoefficients ThreeModeCoefficients(double r);

/// H with S(r) = exp[r(a1 a2 + a2 a3 + a3 a1 - h.c.)] = exp(-i H).
OperatorMatrix ThreeModeSqueezeGenerator(
    const HilbertLayout& layout, double r,
    CutoffPolicy policy = CutoffPolicy::kThrow);
/// Dense-block construction; only for layouts where each block of the
/// generator fits kMaxBlockDimension.
OperatorMatrix ThreeModeSqueezeOp(const HilbertLayout& layout, double r);
/// S(r)|0,0,0> via the sparse exponential action (any size).
StateVector ThreeModeState(const HilbertLayout& layout, double r,
                           CutoffPolicy policy = CutoffPolicy::kThrow);

/// Generator of the two- or three-mode squeeze on modes 0..M-1 of `layout`.
OperatorMatrix SqueezeGenerator(const HilbertLayout& layout, double r,
                                CutoffPolicy policy = CutoffPolicy::kThrow);
/// S(r)|0..0> for a two- or three-mode layout, spins down.
StateVector SqueezedVacuum(const HilbertLayout& layout, double r,
                           CutoffPolicy policy = CutoffPolicy::kThrow);
/// K_j = sum_i f_i^j a_i + g_i^j a_i^dag for j in {0, 1, 2}.
OperatorMatrix ThreeModeBogoliubov(const HilbertLayout& layout, int j, double r);

}  // namespace squeezelab

#endif  // SQUEEZELAB_SQUEEZE_H_
