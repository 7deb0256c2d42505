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

#ifndef SQUEEZELAB_SIDEBAND_H_
#define SQUEEZELAB_SIDEBAND_H_

#include <cstdint>
#include <string>
#include <vector>

#include "squeezelab/flop_curve.h"
#include "squeezelab/levmar.h"
#include "squeezelab/state.h"

namespace squeezelab {

enum class SidebandModel {
  kSingle,     // 1/2 sum p(n) (1 + e^{-g_n t} cos W_n t)
  kFock2d,     // product of two such brackets over (t1, t2)
  kTwoIon,     // sum p(n) e^{-g_n t} cos^2(sqrt(W_n^2 + W_{n+1}^2) t / 2)
  kThreeMode,  // product of three two-ion factors over (t1, t2, t3)
};

const char* SidebandModelName(SidebandModel model);
/// "single", "fock2d", "two_ion" or "three_mode".
SidebandModel ParseSidebandModel(const std::string& name);
int ModelAxes(SidebandModel model);

/// W_n = omega sqrt(n+1), g_n = gamma0 (n+1)^exponent.
struct RateLaw {
  double omega = 0.0;
  double gamma0 = 0.0;
  double exponent = 1.0;

  double Rabi(int n) const;
  double Decay(int n) const;
  void Validate() const;
};

struct ModelSpec {
  SidebandModel model = SidebandModel::kSingle;
  /// One law per time axis, or a single law shared by all axes.
  std::vector<RateLaw> rates;
  /// Verbatim prefactors: 1/2 for fock2d and 1/(W_n^2 + W_{n+1}^2)^2 per
  /// two-ion factor. The default rescales so that P(0) = sum p.
  bool literal_paper_normalization = false;

  int axes() const { return ModelAxes(model); }
  const RateLaw& rate(int axis) const;
  void Validate() const;
};

/// Populations p(n1[, n2[, n3]]) for n_i <= n_max, flattened row-major with
/// the first axis most significant.
struct PopulationTable {
  int axes = 1;
  int n_max = 0;
  std::vector<double> values;

  static PopulationTable FromVector(std::vector<double> p);
  std::size_t size() const { return values.size(); }
  double Total() const;
  std::vector<int> Occupations(std::size_t flat) const;
  std::size_t Flat(const std::vector<int>& occupations) const;
  /// Entries in [0, 1] and total <= 1 + tolerance.
  void Validate(double tolerance = 1e-6) const;
};

/// Joint Fock populations of every mode (spins traced out). All modes must
/// share one cutoff.
PopulationTable JointFockPopulations(const StateVector& psi);
PopulationTable JointFockPopulations(const DensityOperator& rho);

/// Throws InvalidArgument for negative times or a tuple of the wrong width.
double ModelProbability(const ModelSpec& spec, const PopulationTable& p,
                        const std::vector<double>& times);

/// Cartesian grid of `points` samples per axis on [0, t_max], long form.
std::vector<std::vector<double>> TimeGrid(int axes, double t_max, int points);

/// Evaluates the model on `times` and draws Binomial(repetitions, P) per
/// point; repetitions = 0 returns the exact curve. Throws InvalidArgument if
/// a model value is not a probability.
FlopCurve SynthesizeCurve(const ModelSpec& spec, const PopulationTable& p,
                          const std::vector<std::vector<double>>& times,
                          int repetitions, std::uint64_t seed);

struct FitConfig {
  ModelSpec spec;
  int n_max = 4;
  /// Fits one gamma0 shared by every axis in place of the rate-law values.
  bool fit_gamma0 = false;
  /// Empty means the default start (equal weights).
  std::vector<double> initial_guess;
  int starts = 5;
  std::uint64_t seed = 0;
  LevMarOptions solver;

  void Validate() const;
};

struct PopulationEstimate {
  PopulationTable values;
  std::vector<double> std_errors;
  double gamma0 = 0.0;
  double gamma0_std_error = 0.0;
  double residual_norm = 0.0;
  /// Residuals scaled by the binomial spread of each point (1e-3 for exact
  /// curves).
  double reduced_chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Rank-deficient Jacobian or reduced chi-square above 25.
  bool degenerate = false;
};

/// Bounded least squares on the capped simplex with multi-start; standard
/// errors from s^2 (J^T J)^-1 at the best start. Throws InvalidArgument when
/// the curve has no more points than parameters or its dimensionality does
/// not match the model.
PopulationEstimate FitPopulations(const FlopCurve& curve,
                                  const FitConfig& config);

struct FidelityBoundResult {
  bool holds = false;
  /// A - (A + B)(A + C) = AD - BC.
  double margin = 0.0;
};

/// Requires A, B, C, D >= 0 summing to 1 within 1e-9.
FidelityBoundResult FidelityBoundCheck(double a, double b, double c, double d);

struct FidelityBoundSweep {
  int points = 0;
  int violations = 0;
  double min_margin = 0.0;
  double argmin_a = 0.0;
  /// Smallest A on the grid with a non-negative margin.
  double threshold_a = 0.0;
};

/// Scans A in [a_min, min(p1, p2)] at `step` with B = p1 - A, C = p2 - A,
/// D = 1 - A - B - C, skipping points with D < 0.
FidelityBoundSweep SweepFidelityBound(double p1, double p2, double a_min,
                                      double step);

}  // namespace squeezelab

#endif  // SQUEEZELAB_SIDEBAND_H_
