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


#ifndef SQUEEZELAB_CLI_CONFIG_H_
#define SQUEEZELAB_CLI_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "squeezelab/errors.h"

namespace squeezelab::cli {

inline constexpr const char* kToolName = "squeezelab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or out-of-range configuration. Exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File system failure. Exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

struct LayoutConfig {
  int modes = 2;
  int cutoff = 0;  // 0 = MinCutoff(squeeze.r)
  int spins = 1;
  bool allow_truncated_cutoff = false;
};

struct SqueezeConfig {
  double r = 0.79;
  double phi = 0.0;
};

struct ReservoirConfig {
  double nbar = 0.2;
  /// rad/s, one per mode; empty resolves to 2pi*6.8e3 for every mode.
  std::vector<double> omega;
  std::string pulse_mode = "quarter_period";  // or "explicit"
  double pulse_duration = 55e-6;
  int cycles = 10;
  double drift_sigma = 0.0;
  /// Largest tolerated top-two-level population before the run fails.
  double escalation_threshold = 1e-4;
};

struct TimeGridConfig {
  double start = 1e-3;
  double stop = 1e-2;
  int points = 8;
  std::string spacing = "log";  // or "linear"

  std::vector<double> Values() const;
};

struct MetrologyConfig {
  double omega_plus = 0.0;   // resolves to 2pi*1e3
  double omega_minus = 0.0;  // resolves to 2pi*1e3
  TimeGridConfig t;
  int trials = 200;
  int batch = 1;
  double qfi_t = 1.0;
  int qfi_cutoff = 0;  // 0 = QfiCutoff(squeeze.r)
};

struct EprSweepConfig {
  std::vector<double> r_values;  // empty resolves to the default sweep
  int cycles = 10;
  /// Reservoir cutoff for every r; below MinCutoff(r) the run continues
  /// with a truncation warning and the top-level population is tabulated.
  int reservoir_cutoff = 24;
};

struct SidebandConfig {
  std::string model = "single";
  double omega = 0.0;  // resolves to 2pi*6.8e3
  double gamma0 = 0.0;
  double exponent = 1.0;
  int n_max = 4;
  double t_max = 500e-6;
  int points = 61;
  int repetitions = 200;
  std::string source = "ideal";  // "populations", "ideal" or "reservoir"
  std::vector<double> populations;
  bool fit_gamma0 = true;
  int starts = 5;
  bool literal_paper_normalization = false;
  std::vector<std::string> curves;
};

/// The three-mode reservoir runs at a desk-scale cutoff: its top-level
/// population is reported and warned about, never escalated.
struct ThreeModeConfig {
  double r = 0.5;
  int reservoir_cutoff = 7;
  int ideal_cutoff = 36;
  int cycles = 10;
};

struct OutputConfig {
  std::string dir = ".";
  std::string prefix = "squeezelab";
  /// Wall-clock time in the report breaks byte-identical reruns.
  bool wall_clock = false;
};

/// Informational only; echoed in every report.
struct ConstantsConfig {
  double trap_frequency_1 = 0.0;  // 2pi*1.12e6
  double trap_frequency_2 = 0.0;  // 2pi*0.90e6
  double lamb_dicke_1 = 0.06;
  double lamb_dicke_2 = 0.07;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  LayoutConfig layout;
  SqueezeConfig squeeze;
  ReservoirConfig reservoir;
  MetrologyConfig metrology;
  EprSweepConfig epr_sweep;
  SidebandConfig sideband;
  ThreeModeConfig three_mode;
  OutputConfig output;
  ConstantsConfig constants;

  /// Fills every "auto" field. Idempotent.
  void Resolve();
  /// Throws ConfigError on any violated invariant. Call after Resolve().
  void Validate() const;
  /// Complete echo with every resolved default.
  nlohmann::json ToJson() const;
  /// ToJson() without "threads" and "output", which do not change results.
  nlohmann::json HashedJson() const;
  /// FNV-1a 64 of HashedJson().dump(), 16 hex digits.
  std::string Hash() const;
};

/// Strict parse: unknown keys, wrong types and malformed frequencies throw
/// ConfigError naming the JSON path. Missing keys keep their defaults.
ExperimentConfig ParseConfig(const nlohmann::json& doc);
/// Reads and parses a JSON document. Throws IoError if the file cannot be
/// read and ConfigError if it is not valid JSON.
nlohmann::json LoadJsonFile(const std::string& path);

/// Number in rad/s, or a string "2pi*<Hz>".
double ParseFrequency(const nlohmann::json& value, const std::string& path);

/// Smallest cutoff with tanh(r)^(2(N+1)) below 1e-10.
int QfiCutoff(double r);
/// Smallest cutoff whose thermal tail at `nbar` is below the truncation
/// threshold.
int ThermalCutoff(double nbar);

std::uint64_t Fnv1a64(const std::string& bytes);

}  // namespace squeezelab::cli

#endif  // SQUEEZELAB_CLI_CONFIG_H_
