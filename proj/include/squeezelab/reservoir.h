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

#ifndef SQUEEZELAB_RESERVOIR_H_
#define SQUEEZELAB_RESERVOIR_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "squeezelab/layout.h"
#include "squeezelab/operator.h"
#include "squeezelab/state.h"

namespace squeezelab {

enum class PulseMode {
  kQuarterPeriod,  // pi / (2 Omega_i)
  kExplicit,       // CycleConfig::pulse_duration seconds
};

struct CycleConfig {
  double r = 0.0;
  /// Coupling rate per mode, rad/s.
  std::vector<double> omega;
  PulseMode pulse_mode = PulseMode::kQuarterPeriod;
  double pulse_duration = 0.0;
  int cycles = 0;
  /// Standard deviation of the per-pulse detuning of every mode, rad/s.
  double drift_sigma = 0.0;
  std::uint64_t seed = 0;
  /// Modes pulsed within one cycle, each followed by optical pumping.
  std::vector<int> mode_order;
  /// Warn instead of throwing when the cutoff is below MinCutoff(r).
  bool allow_truncated_cutoff = false;

  /// Throws InvalidArgument on any violated invariant for `layout`.
  void Validate(const HilbertLayout& layout) const;
  double PulseDuration(int mode) const;
};

/// One coherent pulse: rho -> U rho U^dag, U = exp(-i (H_i + sum_k Delta_k
/// n_k) tau) with fresh Delta_k ~ Normal(0, drift_sigma) drawn from `rng`
/// when drift_sigma > 0.
DensityOperator PumpPulse(const DensityOperator& rho, int mode,
                          const CycleConfig& config, std::mt19937_64& rng);

/// |down><down| (x) Tr_spin(rho).
DensityOperator OpticalPump(const DensityOperator& rho);

/// Population of S(r)|n>_mode, summed over the other modes. Accepts a
/// motional or joint density operator (spins are traced out first).
double EngineeredPopulation(const DensityOperator& rho, double r, int mode,
                            int n);
/// P(0^K_i) for every mode.
std::vector<double> EngineeredGroundPopulations(const DensityOperator& rho,
                                                double r);

struct CycleRecord {
  int cycle = 0;
  double f_lower = 0.0;  // prod_i P(0^K_i)
  double f_exact = 0.0;  // <target|rho_motion|target>
  std::vector<double> p0k;
  double trace_deficit = 0.0;  // |1 - Tr rho|
};

struct FidelityTrajectory {
  std::vector<CycleRecord> records;  // cycle 0 is the input
  /// Largest top-two-level Fock population seen along the run.
  double max_top_level = 0.0;
  std::shared_ptr<const DensityOperator> final_state;

  /// cycle,F_lower,F_exact,P0K1,P0K2[,P0K3],trace_deficit
  void WriteCsv(std::ostream& out) const;
};

/// Repeats [PumpPulse(mode), OpticalPump] over config.mode_order for
/// config.cycles cycles and records the trajectory after each cycle.
/// `stream` selects an independent drift stream for the same seed.
FidelityTrajectory RunReservoir(const DensityOperator& initial,
                                const CycleConfig& config,
                                std::uint64_t stream = 0);

}  // namespace squeezelab

#endif  // SQUEEZELAB_RESERVOIR_H_
