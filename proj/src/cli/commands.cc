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


#include "squeezelab/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "squeezelab/cli/output.h"
#include "squeezelab/flop_curve.h"
#include "squeezelab/format.h"
#include "squeezelab/metrology.h"
#include "squeezelab/random.h"
#include "squeezelab/reservoir.h"
#include "squeezelab/sideband.h"
#include "squeezelab/squeeze.h"
#include "squeezelab/state.h"
#include "squeezelab/warnings.h"

namespace squeezelab::cli {
namespace {

using nlohmann::json;

struct Context {
  const ExperimentConfig& config;
  std::string hash;
  OutputSet* out;
  /// Set by a command whose result is written but counts as a failure.
  std::string failure;

  std::string Name(const std::string& suffix) const {
    return config.output.prefix + "_" + suffix;
  }
};

json ArrayOf(const std::vector<double>& v) { return json(v); }

CycleConfig MakeCycleConfig(const ExperimentConfig& c, double r, int cycles,
                            std::vector<double> omega, bool allow_truncated) {
  CycleConfig cc;
  cc.r = r;
  cc.omega = std::move(omega);
  cc.pulse_mode = c.reservoir.pulse_mode == "explicit" ? PulseMode::kExplicit
                                                       : PulseMode::kQuarterPeriod;
  cc.pulse_duration = c.reservoir.pulse_duration;
  cc.cycles = cycles;
  cc.drift_sigma = c.reservoir.drift_sigma;
  cc.seed = c.seed;
  cc.allow_truncated_cutoff = allow_truncated;
  return cc;
}

/// Throws TruncationError above `threshold` when `escalate`, otherwise
/// records a warning. Returns whether the threshold was exceeded.
bool Escalate(const FidelityTrajectory& traj, double threshold,
              bool escalate = true) {
  if (traj.max_top_level <= threshold) return false;
  const std::string msg = "top-level population " +
                          FormatNumber(traj.max_top_level) + " exceeds " +
                          FormatNumber(threshold);
  if (escalate) throw TruncationError(msg + "; raise the cutoff");
  EmitWarning({WarningKind::kTruncation, msg, traj.max_top_level});
  return true;
}

json EprJson(const EprReport& e) {
  return {{"delta_epr", e.delta_epr},
          {"bound", e.bound},
          {"entangled", e.entangled},
          {"var_x_plus", e.var_x_plus},
          {"var_p_minus", e.var_p_minus}};
}

json FinalRecordJson(const FidelityTrajectory& traj) {
  const CycleRecord& last = traj.records.back();
  return {{"cycle", last.cycle},
          {"f_lower", last.f_lower},
          {"f_exact", last.f_exact},
          {"p0k", ArrayOf(last.p0k)},
          {"trace_deficit", last.trace_deficit}};
}

std::string TrajectoryCsv(const Context& ctx, const FidelityTrajectory& traj) {
  std::ostringstream s;
  s << CsvComment(ctx.hash);
  traj.WriteCsv(s);
  return s.str();
}

void RequireThermal(const ExperimentConfig& c, int cutoff, const char* field) {
  const int need = ThermalCutoff(c.reservoir.nbar);
  if (cutoff < need) {
    throw ConfigError(std::string(field) + " " + std::to_string(cutoff) +
                      " cannot hold a thermal state at nbar = " +
                      FormatNumber(c.reservoir.nbar) + " (needs " +
                      std::to_string(need) + ")");
  }
}

void RequireSpin(const ExperimentConfig& c, const char* command) {
  if (c.layout.spins != 1) {
    throw ConfigError(std::string(command) + " needs layout.spins = 1");
  }
}

json Prepare(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  RequireSpin(c, "prepare");
  RequireThermal(c, c.layout.cutoff, "layout.cutoff");
  const HilbertLayout layout(c.layout.modes, c.layout.cutoff, 1);
  const CycleConfig cc =
      MakeCycleConfig(c, c.squeeze.r, c.reservoir.cycles, c.reservoir.omega,
                      c.layout.allow_truncated_cutoff);
  const auto traj = RunReservoir(ThermalState(layout, c.reservoir.nbar), cc);
  Escalate(traj, c.reservoir.escalation_threshold);
  const std::string csv = ctx.Name("trajectory.csv");
  ctx.out->Add(csv, TrajectoryCsv(ctx, traj));
  return {{"trajectory", csv},
          {"final", FinalRecordJson(traj)},
          {"epr", EprJson(DuanEpr(*traj.final_state))},
          {"max_top_level", traj.max_top_level}};
}

json Estimate(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const std::vector<double> ts = c.metrology.t.Values();
  const int n = static_cast<int>(ts.size());
  std::vector<EstimationRecord> records(n);
  ParallelFor(n, c.threads, [&](int i) {
    records[i] = SampleJointMeasurement(
        c.squeeze.r, {c.metrology.omega_plus, c.metrology.omega_minus, ts[i]},
        c.metrology.trials, c.seed, static_cast<std::uint64_t>(i),
        c.metrology.batch);
  });

  std::ostringstream csv;
  csv << CsvComment(ctx.hash) << "t,var_plus,var_minus,var_analytic,db_plus,db_minus\n";
  std::vector<double> var_plus, var_minus, db_plus, db_minus;
  json points = json::array();
  for (int i = 0; i < n; ++i) {
    const auto& rec = records[i];
    csv << FormatNumber(ts[i]) << ',' << FormatNumber(rec.empirical_variance[0])
        << ',' << FormatNumber(rec.empirical_variance[1]) << ','
        << FormatNumber(rec.analytic_variance[0]) << ','
        << FormatNumber(rec.enhancement_db[0]) << ','
        << FormatNumber(rec.enhancement_db[1]) << '\n';
    var_plus.push_back(rec.empirical_variance[0]);
    var_minus.push_back(rec.empirical_variance[1]);
    db_plus.push_back(rec.enhancement_db[0]);
    db_minus.push_back(rec.enhancement_db[1]);
  }
  const std::string name = ctx.Name("estimate.csv");
  ctx.out->Add(name, csv.str());

  auto mean_sd = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return json{{"mean", m},
                {"sd", v.size() > 1 ? std::sqrt(s / (v.size() - 1)) : 0.0}};
  };
  json summary = {{"table", name},
                  {"analytic_db", EnhancementDb(c.squeeze.r)},
                  {"db_plus", mean_sd(db_plus)},
                  {"db_minus", mean_sd(db_minus)}};
  if (n >= 2) {
    summary["slope_plus"] = LogLogSlope(ts, var_plus);
    summary["slope_minus"] = LogLogSlope(ts, var_minus);
  } else {
    summary["slope_plus"] = nullptr;
    summary["slope_minus"] = nullptr;
  }
  return summary;
}

struct SweepPoint {
  double epr_ideal = 0.0;
  double epr_reservoir = 0.0;
  double bound = 1.0;
  int ideal_cutoff = 0;
  int reservoir_cutoff = 0;
  double top_level = 0.0;
  double f_exact = 0.0;
};

json EprSweep(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  RequireSpin(c, "epr-sweep");
  if (c.layout.modes != 2) throw ConfigError("epr-sweep needs layout.modes = 2");
  RequireThermal(c, c.epr_sweep.reservoir_cutoff, "epr_sweep.reservoir_cutoff");
  const auto& rs = c.epr_sweep.r_values;
  const int n = static_cast<int>(rs.size());
  std::vector<SweepPoint> points(n);
  ParallelFor(n, c.threads, [&](int i) {
    const double r = rs[i];
    SweepPoint& p = points[i];
    p.ideal_cutoff = MinCutoff(r);
    const auto ideal = DuanEpr(TmssState(HilbertLayout(2, p.ideal_cutoff),
                                         {r, 0.0, {0, 1}}));
    p.epr_ideal = ideal.delta_epr;
    p.bound = ideal.bound;
    p.reservoir_cutoff = c.epr_sweep.reservoir_cutoff;
    const HilbertLayout layout(2, p.reservoir_cutoff, 1);
    const auto traj = RunReservoir(
        ThermalState(layout, c.reservoir.nbar),
        MakeCycleConfig(c, r, c.epr_sweep.cycles, c.reservoir.omega, true),
        static_cast<std::uint64_t>(i));
    p.epr_reservoir = DuanEpr(*traj.final_state).delta_epr;
    p.top_level = traj.max_top_level;
    p.f_exact = traj.records.back().f_exact;
  });

  std::ostringstream csv;
  csv << CsvComment(ctx.hash)
      << "r,epr_reservoir,epr_ideal,bound,reservoir_cutoff,top_level,f_exact\n";
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    const SweepPoint& p = points[i];
    csv << FormatNumber(rs[i]) << ',' << FormatNumber(p.epr_reservoir) << ','
        << FormatNumber(p.epr_ideal) << ',' << FormatNumber(p.bound) << ','
        << p.reservoir_cutoff << ',' << FormatNumber(p.top_level) << ','
        << FormatNumber(p.f_exact) << '\n';
    rows.push_back({{"r", rs[i]},
                    {"epr_reservoir", p.epr_reservoir},
                    {"epr_ideal", p.epr_ideal},
                    {"bound", p.bound},
                    {"ideal_cutoff", p.ideal_cutoff},
                    {"reservoir_cutoff", p.reservoir_cutoff},
                    {"top_level", p.top_level},
                    {"f_exact", p.f_exact}});
  }
  const std::string name = ctx.Name("epr_sweep.csv");
  ctx.out->Add(name, csv.str());
  return {{"table", name}, {"points", rows}};
}

json MatrixJson(const Eigen::Matrix2d& m) {
  return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
}

json Qfi(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const double r = c.squeeze.r;
  const double t = c.metrology.qfi_t;
  const HilbertLayout layout(2, c.metrology.qfi_cutoff);
  const Eigen::Matrix2d numeric =
      QfiMatrixNumeric(TmssState(layout, {r, 0.0, {0, 1}}), t);
  const Eigen::Matrix2d analytic = QfiMatrixAnalytic(r, t);
  const double scale = analytic.diagonal().cwiseAbs().maxCoeff();
  const double deviation = (numeric - analytic).cwiseAbs().maxCoeff() / scale;
  const double trace_inv = numeric.inverse().trace();
  const double trace_inv_analytic = analytic.inverse().trace();

  std::ostringstream csv;
  csv << CsvComment(ctx.hash) << "quantity,analytic,numeric\n"
      << "F_00," << FormatNumber(analytic(0, 0)) << ',' << FormatNumber(numeric(0, 0)) << '\n'
      << "F_01," << FormatNumber(analytic(0, 1)) << ',' << FormatNumber(numeric(0, 1)) << '\n'
      << "F_11," << FormatNumber(analytic(1, 1)) << ',' << FormatNumber(numeric(1, 1)) << '\n'
      << "trace_inverse," << FormatNumber(trace_inv_analytic) << ','
      << FormatNumber(trace_inv) << '\n';
  const std::string name = ctx.Name("qfi.csv");
  ctx.out->Add(name, csv.str());
  return {{"table", name},
          {"cutoff", c.metrology.qfi_cutoff},
          {"analytic", MatrixJson(analytic)},
          {"numeric", MatrixJson(numeric)},
          {"max_relative_deviation", deviation},
          {"trace_inverse", trace_inv},
          {"trace_inverse_analytic", trace_inv_analytic}};
}

ModelSpec SidebandSpec(const ExperimentConfig& c) {
  ModelSpec spec;
  spec.model = ParseSidebandModel(c.sideband.model);
  spec.rates = {{c.sideband.omega, c.sideband.gamma0, c.sideband.exponent}};
  spec.literal_paper_normalization = c.sideband.literal_paper_normalization;
  return spec;
}

PopulationTable Restrict(const PopulationTable& full, int n_max) {
  PopulationTable out;
  out.axes = full.axes;
  out.n_max = n_max;
  std::size_t size = 1;
  for (int a = 0; a < full.axes; ++a) size *= static_cast<std::size_t>(n_max + 1);
  out.values.assign(size, 0.0);
  for (std::size_t k = 0; k < size; ++k) {
    const std::vector<int> occ = out.Occupations(k);
    bool inside = true;
    for (int n : occ) inside = inside && n <= full.n_max;
    if (inside) out.values[k] = full.values[full.Flat(occ)];
  }
  return out;
}

PopulationTable TableFromConfig(const ExperimentConfig& c, int axes) {
  const std::size_t size = c.sideband.populations.size();
  int n_max = -1;
  for (int n = 0;; ++n) {
    const double s = std::pow(n + 1.0, axes);
    if (s == double(size)) n_max = n;
    if (s >= double(size)) break;
  }
  if (n_max < 0) {
    throw ConfigError("sideband.populations has " + std::to_string(size) +
                      " entries, not (n_max + 1)^" + std::to_string(axes));
  }
  PopulationTable p;
  p.axes = axes;
  p.n_max = n_max;
  p.values = c.sideband.populations;
  try {
    p.Validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("sideband.populations: ") + e.what());
  }
  return p;
}

PopulationTable MarginalTable(const std::vector<double>& pops, int n_max) {
  std::vector<double> v(n_max + 1, 0.0);
  for (int n = 0; n <= n_max && n < static_cast<int>(pops.size()); ++n) v[n] = pops[n];
  return PopulationTable::FromVector(v);
}

// One table per emitted curve.
std::vector<PopulationTable> SimulationTables(const ExperimentConfig& c,
                                              const ModelSpec& spec,
                                              json* source) {
  const int axes = spec.axes();
  const int n_max = c.sideband.n_max;
  const double r = axes == 3 ? c.three_mode.r : c.squeeze.r;
  std::vector<PopulationTable> tables;
  if (c.sideband.source == "populations") {
    tables.push_back(TableFromConfig(c, axes));
    *source = {{"kind", "populations"}};
    return tables;
  }
  if (c.sideband.source == "ideal") {
    const int modes = axes == 3 ? 3 : 2;
    const int cutoff = axes == 3 ? c.three_mode.ideal_cutoff : c.layout.cutoff;
    const HilbertLayout layout(modes, cutoff);
    const StateVector psi = SqueezedVacuum(layout, r);
    if (axes == 1) {
      tables.push_back(MarginalTable(ModePopulations(psi, 0), n_max));
    } else {
      tables.push_back(Restrict(JointFockPopulations(psi), n_max));
    }
    *source = {{"kind", "ideal"}, {"r", r}, {"modes", modes}, {"cutoff", cutoff}};
    return tables;
  }
  RequireSpin(c, "sideband simulate");
  const int modes = axes == 3 ? 3 : c.layout.modes;
  const int cutoff = axes == 3 ? c.three_mode.reservoir_cutoff : c.layout.cutoff;
  RequireThermal(c, cutoff, axes == 3 ? "three_mode.reservoir_cutoff" : "layout.cutoff");
  std::vector<double> omega = c.reservoir.omega;
  omega.resize(modes, omega.front());
  const HilbertLayout layout(modes, cutoff, 1);
  const int cycles = axes == 3 ? c.three_mode.cycles : c.reservoir.cycles;
  const auto traj =
      RunReservoir(ThermalState(layout, c.reservoir.nbar),
                   MakeCycleConfig(c, r, cycles, omega,
                                   axes == 3 || c.layout.allow_truncated_cutoff));
  Escalate(traj, c.reservoir.escalation_threshold, axes != 3);
  if (axes == 1) {
    for (int m = 0; m < modes; ++m) {
      std::vector<double> p;
      for (int n = 0; n <= std::min(n_max, cutoff); ++n) {
        p.push_back(EngineeredPopulation(*traj.final_state, r, m, n));
      }
      tables.push_back(MarginalTable(p, n_max));
    }
  } else {
    if (modes != axes) {
      throw ConfigError("model " + c.sideband.model + " needs layout.modes = " +
                        std::to_string(axes));
    }
    tables.push_back(
        Restrict(JointFockPopulations(PartialTraceSpin(*traj.final_state)), n_max));
  }
  *source = {{"kind", "reservoir"},
             {"r", r},
             {"modes", modes},
             {"cutoff", cutoff},
             {"cycles", cycles},
             {"final", FinalRecordJson(traj)}};
  return tables;
}

json SidebandSimulate(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ModelSpec spec = SidebandSpec(c);
  json source;
  const auto tables = SimulationTables(c, spec, &source);
  const auto times = TimeGrid(spec.axes(), c.sideband.t_max, c.sideband.points);
  json curves = json::array();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::mt19937_64 stream = MakeRandomStream(c.seed, i);
    const FlopCurve curve =
        SynthesizeCurve(spec, tables[i], times, c.sideband.repetitions, stream());
    std::ostringstream csv;
    csv << CsvComment(ctx.hash);
    curve.WriteCsv(csv);
    const std::string name =
        tables.size() == 1 ? ctx.Name("curve.csv")
                           : ctx.Name("curve_mode" + std::to_string(i + 1) + ".csv");
    ctx.out->Add(name, csv.str());
    curves.push_back({{"file", name},
                      {"populations", tables[i].values},
                      {"n_max", tables[i].n_max}});
  }
  return {{"model", SidebandModelName(spec.model)},
          {"source", source},
          {"curves", curves}};
}

FlopCurve ReadCurve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read curve " + path);
  return FlopCurve::ReadCsv(in, path);
}

json SidebandFit(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  if (c.sideband.curves.empty()) {
    throw ConfigError("sideband fit needs at least one curve");
  }
  FitConfig fc;
  fc.spec = SidebandSpec(c);
  fc.n_max = c.sideband.n_max;
  fc.fit_gamma0 = c.sideband.fit_gamma0;
  fc.starts = c.sideband.starts;
  fc.seed = c.seed;
  std::vector<FlopCurve> curves;
  for (const auto& path : c.sideband.curves) curves.push_back(ReadCurve(path));

  json fits = json::array();
  double f_lower = 1.0;
  double rel_var = 0.0;
  bool all_ok = true;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const PopulationEstimate est = FitPopulations(curves[i], fc);
    const bool ok = est.converged && !est.degenerate;
    all_ok = all_ok && ok;
    if (!est.converged) {
      EmitWarning({WarningKind::kNonConvergence,
                   c.sideband.curves[i] + ": fit did not converge",
                   double(est.iterations)});
    }
    if (est.degenerate) {
      EmitWarning({WarningKind::kNonConvergence,
                   c.sideband.curves[i] + ": degenerate fit", est.reduced_chi2});
    }
    const double p0 = est.values.values[0];
    f_lower *= p0;
    if (p0 > 0.0) rel_var += std::pow(est.std_errors[0] / p0, 2);
    fits.push_back({{"curve", c.sideband.curves[i]},
                    {"populations", est.values.values},
                    {"std_errors", est.std_errors},
                    {"gamma0", est.gamma0},
                    {"gamma0_std_error", est.gamma0_std_error},
                    {"residual_norm", est.residual_norm},
                    {"reduced_chi2", est.reduced_chi2},
                    {"iterations", est.iterations},
                    {"converged", est.converged},
                    {"degenerate", est.degenerate}});
  }
  json payload = {{"model", c.sideband.model}, {"fits", fits}};
  const SidebandModel model = fc.spec.model;
  if (model == SidebandModel::kSingle || model == SidebandModel::kTwoIon) {
    payload["fidelity_lower_bound"] = f_lower;
    payload["fidelity_lower_bound_std_error"] = f_lower * std::sqrt(rel_var);
  } else {
    payload["fidelity_lower_bound"] = nullptr;
    payload["fidelity_lower_bound_std_error"] = nullptr;
  }
  if (!all_ok) ctx.failure = "fit did not converge or is degenerate";
  return payload;
}

json ThreeMode(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  RequireSpin(c, "three-mode");
  RequireThermal(c, c.three_mode.reservoir_cutoff, "three_mode.reservoir_cutoff");
  const double r = c.three_mode.r;
  const HilbertLayout ideal_layout(3, c.three_mode.ideal_cutoff);
  const StateVector psi = ThreeModeState(ideal_layout, r);
  std::vector<double> k_norms;
  for (int j = 0; j < 3; ++j) {
    k_norms.push_back(
        ThreeModeBogoliubov(ideal_layout, j, r).Apply(psi.amplitudes()).norm());
  }
  const auto gains = ThreeModeGains(psi);

  std::vector<double> omega = c.reservoir.omega;
  omega.resize(3, omega.front());
  const HilbertLayout layout(3, c.three_mode.reservoir_cutoff, 1);
  const auto traj = RunReservoir(
      ThermalState(layout, c.reservoir.nbar),
      MakeCycleConfig(c, r, c.three_mode.cycles, omega, true));
  const bool truncated =
      Escalate(traj, c.reservoir.escalation_threshold, false);
  const std::string csv = ctx.Name("three_mode_trajectory.csv");
  ctx.out->Add(csv, TrajectoryCsv(ctx, traj));
  return {{"ideal",
           {{"cutoff", c.three_mode.ideal_cutoff},
            {"k_norms", k_norms},
            {"epr", EprJson(DuanEpr(psi))},
            {"gains_db", {gains[0], gains[1], gains[2]}}}},
          {"reservoir",
           {{"cutoff", c.three_mode.reservoir_cutoff},
            {"trajectory", csv},
            {"final", FinalRecordJson(traj)},
            {"epr", EprJson(DuanEpr(*traj.final_state))},
            {"max_top_level", traj.max_top_level},
            {"truncated", truncated}}}};
}

using CommandFn = json (*)(Context&);

CommandFn Lookup(const std::string& command) {
  if (command == "prepare") return Prepare;
  if (command == "estimate") return Estimate;
  if (command == "epr-sweep") return EprSweep;
  if (command == "qfi") return Qfi;
  if (command == "sideband-simulate") return SidebandSimulate;
  if (command == "sideband-fit") return SidebandFit;
  if (command == "three-mode") return ThreeMode;
  throw ConfigError("unknown command " + command);
}

std::string FileStem(const std::string& command) {
  std::string s = command;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

json WarningsJson(const std::vector<Warning>& warnings) {
  json out = json::array();
  for (const auto& w : warnings) {
    out.push_back({{"kind", WarningKindName(w.kind)},
                   {"message", w.message},
                   {"value", w.value}});
  }
  return out;
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "prepare",           "estimate",     "epr-sweep", "qfi",
      "sideband-simulate", "sideband-fit", "three-mode"};
  return names;
}

void ParallelFor(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

CommandOutcome RunCommand(const std::string& command,
                          const nlohmann::json& config_doc) {
  CommandOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    const CommandFn fn = Lookup(command);
    ExperimentConfig config = ParseConfig(config_doc);
    config.Resolve();
    config.Validate();

    OutputSet out(config.output.dir);
    Context ctx{config, config.Hash(), &out, {}};
    json payload;
    std::vector<Warning> warnings;
    {
      ScopedWarningCollector collector;
      payload = fn(ctx);
      warnings = collector.warnings();
    }

    const std::string report_name = ctx.Name(FileStem(command) + ".json");
    json outputs = json::array();
    for (const auto& f : out.files()) outputs.push_back(f.first);
    outputs.push_back(report_name);

    json report = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"command", command},
                   {"status", ctx.failure.empty() ? "ok" : "failed"},
                   {"config", config.ToJson()},
                   {"config_hash", ctx.hash},
                   {"warnings", WarningsJson(warnings)},
                   {"outputs", outputs},
                   {"payload", payload}};
    if (!ctx.failure.empty()) report["failure"] = ctx.failure;
    if (config.output.wall_clock) {
      report["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
    }
    out.Add(report_name, report.dump(2) + "\n");
    outcome.files = out.Commit();
    outcome.report = std::move(report);
    if (!ctx.failure.empty()) {
      outcome.exit_code = kExitNumerical;
      outcome.error = ctx.failure;
    }
  } catch (const ConfigError& e) {
    outcome = {kExitConfig, e.what(), {}, {}};
  } catch (const IoError& e) {
    outcome = {kExitIo, e.what(), {}, {}};
  } catch (const InvalidArgument& e) {
    outcome = {kExitConfig, e.what(), {}, {}};
  } catch (const nlohmann::json::exception& e) {
    outcome = {kExitConfig, e.what(), {}, {}};
  } catch (const std::exception& e) {
    outcome = {kExitNumerical, e.what(), {}, {}};
  }
  return outcome;
}

}  // namespace squeezelab::cli
