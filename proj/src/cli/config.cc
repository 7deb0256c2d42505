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


#include "squeezelab/cli/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "squeezelab/layout.h"
#include "squeezelab/sideband.h"
#include "squeezelab/squeeze.h"

namespace squeezelab::cli {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDefaultCoupling = kTwoPi * 6.8e3;
constexpr double kDefaultDisplacement = kTwoPi * 1e3;
constexpr double kMaxR = 5.0;

// Consumes the keys of one JSON object and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& item : obj_.items()) {
      if (!used_.count(item.key())) {
        throw ConfigError(Path(item.key()) + ": unknown key");
      }
    }
  }

  const json* Find(const std::string& key) {
    used_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void Get(const std::string& key, double* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number()) throw ConfigError(Path(key) + ": expected a number");
      *out = v->get<double>();
    }
  }

  void Get(const std::string& key, int* out) {
    if (const json* v = Find(key)) {
      if (!v->is_number_integer()) {
        throw ConfigError(Path(key) + ": expected an integer");
      }
      const auto x = v->get<std::int64_t>();
      if (x < INT32_MIN || x > INT32_MAX) {
        throw ConfigError(Path(key) + ": integer out of range");
      }
      *out = static_cast<int>(x);
    }
  }

  void Get(const std::string& key, std::uint64_t* out) {
    if (const json* v = Find(key)) {
      const bool ok = v->is_number_unsigned() ||
                      (v->is_number_integer() && v->get<std::int64_t>() >= 0);
      if (!ok) throw ConfigError(Path(key) + ": expected a non-negative integer");
      *out = v->get<std::uint64_t>();
    }
  }

  void Get(const std::string& key, bool* out) {
    if (const json* v = Find(key)) {
      if (!v->is_boolean()) throw ConfigError(Path(key) + ": expected a boolean");
      *out = v->get<bool>();
    }
  }

  void Get(const std::string& key, std::string* out) {
    if (const json* v = Find(key)) {
      if (!v->is_string()) throw ConfigError(Path(key) + ": expected a string");
      *out = v->get<std::string>();
    }
  }

  void Get(const std::string& key, std::vector<double>* out) {
    if (const json* v = Find(key)) {
      if (!v->is_array()) throw ConfigError(Path(key) + ": expected an array");
      out->clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) {
          throw ConfigError(Path(key) + "[" + std::to_string(i) +
                            "]: expected a number");
        }
        out->push_back((*v)[i].get<double>());
      }
    }
  }

  void Get(const std::string& key, std::vector<std::string>* out) {
    if (const json* v = Find(key)) {
      if (!v->is_array()) throw ConfigError(Path(key) + ": expected an array");
      out->clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) {
          throw ConfigError(Path(key) + "[" + std::to_string(i) +
                            "]: expected a string");
        }
        out->push_back((*v)[i].get<std::string>());
      }
    }
  }

  /// Cutoff fields accept an integer or "auto" (stored as 0).
  void GetCutoff(const std::string& key, int* out) {
    if (const json* v = Find(key)) {
      if (v->is_string() && v->get<std::string>() == "auto") {
        *out = 0;
        return;
      }
      if (!v->is_number_integer()) {
        throw ConfigError(Path(key) + ": expected an integer or \"auto\"");
      }
      *out = v->get<int>();
    }
  }

  void GetFrequency(const std::string& key, double* out) {
    if (const json* v = Find(key)) *out = ParseFrequency(*v, Path(key));
  }

  void GetFrequencies(const std::string& key, std::vector<double>* out) {
    if (const json* v = Find(key)) {
      out->clear();
      if (!v->is_array()) {
        out->push_back(ParseFrequency(*v, Path(key)));
        return;
      }
      for (std::size_t i = 0; i < v->size(); ++i) {
        out->push_back(
            ParseFrequency((*v)[i], Path(key) + "[" + std::to_string(i) + "]"));
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool Positive(double x) { return x > 0.0 && std::isfinite(x); }
bool NonNegative(double x) { return x >= 0.0 && std::isfinite(x); }
// Keeps cutoff searches finite.
bool UsableR(double r) { return NonNegative(r) && r <= kMaxR; }

void ParseLayout(const json& j, LayoutConfig* c) {
  ObjectReader in(j, "layout");
  in.Get("modes", &c->modes);
  in.GetCutoff("cutoff", &c->cutoff);
  in.Get("spins", &c->spins);
  in.Get("allow_truncated_cutoff", &c->allow_truncated_cutoff);
}

void ParseSqueeze(const json& j, SqueezeConfig* c) {
  ObjectReader in(j, "squeeze");
  in.Get("r", &c->r);
  in.Get("phi", &c->phi);
}

void ParseReservoir(const json& j, ReservoirConfig* c) {
  ObjectReader in(j, "reservoir");
  in.Get("nbar", &c->nbar);
  in.GetFrequencies("omega", &c->omega);
  in.Get("pulse_mode", &c->pulse_mode);
  in.Get("pulse_duration", &c->pulse_duration);
  in.Get("cycles", &c->cycles);
  in.GetFrequency("drift_sigma", &c->drift_sigma);
  in.Get("escalation_threshold", &c->escalation_threshold);
}

void ParseTimeGrid(const json& j, const std::string& path, TimeGridConfig* c) {
  ObjectReader in(j, path);
  in.Get("start", &c->start);
  in.Get("stop", &c->stop);
  in.Get("points", &c->points);
  in.Get("spacing", &c->spacing);
}

void ParseMetrology(const json& j, MetrologyConfig* c) {
  ObjectReader in(j, "metrology");
  in.GetFrequency("omega_plus", &c->omega_plus);
  in.GetFrequency("omega_minus", &c->omega_minus);
  if (const json* t = in.Find("t")) ParseTimeGrid(*t, in.Path("t"), &c->t);
  in.Get("trials", &c->trials);
  in.Get("batch", &c->batch);
  in.Get("qfi_t", &c->qfi_t);
  in.GetCutoff("qfi_cutoff", &c->qfi_cutoff);
}

void ParseEprSweep(const json& j, EprSweepConfig* c) {
  ObjectReader in(j, "epr_sweep");
  in.Get("r_values", &c->r_values);
  in.Get("cycles", &c->cycles);
  in.Get("reservoir_cutoff", &c->reservoir_cutoff);
}

void ParseSideband(const json& j, SidebandConfig* c) {
  ObjectReader in(j, "sideband");
  in.Get("model", &c->model);
  in.GetFrequency("omega", &c->omega);
  in.Get("gamma0", &c->gamma0);
  in.Get("exponent", &c->exponent);
  in.Get("n_max", &c->n_max);
  in.Get("t_max", &c->t_max);
  in.Get("points", &c->points);
  in.Get("repetitions", &c->repetitions);
  in.Get("source", &c->source);
  in.Get("populations", &c->populations);
  in.Get("fit_gamma0", &c->fit_gamma0);
  in.Get("starts", &c->starts);
  in.Get("literal_paper_normalization", &c->literal_paper_normalization);
  in.Get("curves", &c->curves);
}

void ParseThreeMode(const json& j, ThreeModeConfig* c) {
  ObjectReader in(j, "three_mode");
  in.Get("r", &c->r);
  in.Get("reservoir_cutoff", &c->reservoir_cutoff);
  in.Get("ideal_cutoff", &c->ideal_cutoff);
  in.Get("cycles", &c->cycles);
}

void ParseOutput(const json& j, OutputConfig* c) {
  ObjectReader in(j, "output");
  in.Get("dir", &c->dir);
  in.Get("prefix", &c->prefix);
  in.Get("wall_clock", &c->wall_clock);
}

void ParseConstants(const json& j, ConstantsConfig* c) {
  ObjectReader in(j, "constants");
  in.GetFrequency("trap_frequency_1", &c->trap_frequency_1);
  in.GetFrequency("trap_frequency_2", &c->trap_frequency_2);
  in.Get("lamb_dicke_1", &c->lamb_dicke_1);
  in.Get("lamb_dicke_2", &c->lamb_dicke_2);
}

}  // namespace

double ParseFrequency(const nlohmann::json& value, const std::string& path) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) {
    throw ConfigError(path + ": expected rad/s or \"2pi*<Hz>\"");
  }
  const std::string s = value.get<std::string>();
  const std::string prefix = "2pi*";
  if (s.rfind(prefix, 0) != 0) {
    throw ConfigError(path + ": frequency string must look like \"2pi*6.8e3\"");
  }
  const std::string hz = s.substr(prefix.size());
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(hz, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != hz.size() || !std::isfinite(x)) {
    throw ConfigError(path + ": cannot read \"" + hz + "\" as Hz");
  }
  return kTwoPi * x;
}

std::vector<double> TimeGridConfig::Values() const {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double u = points == 1 ? 0.0 : double(i) / (points - 1);
    out[i] = spacing == "log"
                 ? start * std::pow(stop / start, u)
                 : start + (stop - start) * u;
  }
  return out;
}

int QfiCutoff(double r) {
  if (!NonNegative(r)) throw ConfigError("r must be finite and >= 0");
  const double t = std::tanh(r);
  if (t == 0.0) return 1;
  int n = 1;
  while (std::pow(t, 2.0 * (n + 1)) >= 1e-10) ++n;
  return n;
}

int ThermalCutoff(double nbar) {
  if (!NonNegative(nbar)) throw ConfigError("nbar must be finite and >= 0");
  const double q = nbar / (1.0 + nbar);
  if (q == 0.0) return 1;
  int n = 1;
  while (std::pow(q, n + 1.0) >= kTruncationThreshold) ++n;
  return n;
}

std::uint64_t Fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig ParseConfig(const nlohmann::json& doc) {
  ExperimentConfig c;
  ObjectReader in(doc, "");
  in.Get("seed", &c.seed);
  in.Get("threads", &c.threads);
  if (const json* v = in.Find("layout")) ParseLayout(*v, &c.layout);
  if (const json* v = in.Find("squeeze")) ParseSqueeze(*v, &c.squeeze);
  if (const json* v = in.Find("reservoir")) ParseReservoir(*v, &c.reservoir);
  if (const json* v = in.Find("metrology")) ParseMetrology(*v, &c.metrology);
  if (const json* v = in.Find("epr_sweep")) ParseEprSweep(*v, &c.epr_sweep);
  if (const json* v = in.Find("sideband")) ParseSideband(*v, &c.sideband);
  if (const json* v = in.Find("three_mode")) ParseThreeMode(*v, &c.three_mode);
  if (const json* v = in.Find("output")) ParseOutput(*v, &c.output);
  if (const json* v = in.Find("constants")) ParseConstants(*v, &c.constants);
  return c;
}

nlohmann::json LoadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void ExperimentConfig::Resolve() {
  if (layout.cutoff == 0 && UsableR(squeeze.r)) {
    layout.cutoff = MinCutoff(squeeze.r);
  }
  if (reservoir.omega.empty()) {
    reservoir.omega.assign(std::max(layout.modes, 1), kDefaultCoupling);
  } else if (reservoir.omega.size() == 1 && layout.modes > 1) {
    reservoir.omega.assign(layout.modes, reservoir.omega[0]);
  }
  if (metrology.omega_plus == 0.0) metrology.omega_plus = kDefaultDisplacement;
  if (metrology.omega_minus == 0.0) metrology.omega_minus = kDefaultDisplacement;
  if (metrology.qfi_cutoff == 0 && UsableR(squeeze.r)) {
    metrology.qfi_cutoff = QfiCutoff(squeeze.r);
  }
  if (epr_sweep.r_values.empty()) {
    epr_sweep.r_values = {0.1, 0.3, 0.5, 0.79, 1.0, 1.2, 1.5};
  }
  if (sideband.omega == 0.0) sideband.omega = kDefaultCoupling;
  if (constants.trap_frequency_1 == 0.0) constants.trap_frequency_1 = kTwoPi * 1.12e6;
  if (constants.trap_frequency_2 == 0.0) constants.trap_frequency_2 = kTwoPi * 0.90e6;
}

void ExperimentConfig::Validate() const {
  Require(threads >= 1, "threads must be >= 1");
  Require(layout.modes == 2 || layout.modes == 3, "layout.modes must be 2 or 3");
  Require(layout.spins == 0 || layout.spins == 1, "layout.spins must be 0 or 1");
  Require(layout.cutoff >= 1, "layout.cutoff must be >= 1");
  Require(UsableR(squeeze.r), "squeeze.r must be in [0, 5]");
  Require(std::isfinite(squeeze.phi), "squeeze.phi must be finite");
  const int need = MinCutoff(squeeze.r);
  Require(layout.allow_truncated_cutoff || layout.cutoff >= need,
          "layout.cutoff " + std::to_string(layout.cutoff) + " is below N_min(" +
              std::to_string(squeeze.r) + ") = " + std::to_string(need));

  Require(NonNegative(reservoir.nbar) && reservoir.nbar <= 100.0,
          "reservoir.nbar must be in [0, 100]");
  Require(static_cast<int>(reservoir.omega.size()) == layout.modes,
          "reservoir.omega needs one rate per mode");
  for (double w : reservoir.omega) Require(Positive(w), "reservoir.omega must be positive");
  Require(reservoir.pulse_mode == "quarter_period" ||
              reservoir.pulse_mode == "explicit",
          "reservoir.pulse_mode must be \"quarter_period\" or \"explicit\"");
  Require(Positive(reservoir.pulse_duration), "reservoir.pulse_duration must be positive");
  Require(reservoir.cycles >= 0, "reservoir.cycles must be >= 0");
  Require(NonNegative(reservoir.drift_sigma), "reservoir.drift_sigma must be >= 0");
  Require(Positive(reservoir.escalation_threshold),
          "reservoir.escalation_threshold must be positive");

  Require(Positive(metrology.omega_plus) && Positive(metrology.omega_minus),
          "metrology rates must be positive");
  Require(Positive(metrology.t.start) && Positive(metrology.t.stop) &&
              metrology.t.stop >= metrology.t.start,
          "metrology.t needs 0 < start <= stop");
  Require(metrology.t.points >= 1, "metrology.t.points must be >= 1");
  Require(metrology.t.spacing == "log" || metrology.t.spacing == "linear",
          "metrology.t.spacing must be \"log\" or \"linear\"");
  Require(metrology.trials >= 2, "metrology.trials must be >= 2");
  Require(metrology.batch >= 1, "metrology.batch must be >= 1");
  Require(Positive(metrology.qfi_t), "metrology.qfi_t must be positive");
  Require(metrology.qfi_cutoff >= need,
          "metrology.qfi_cutoff is below N_min(r) = " + std::to_string(need));

  Require(epr_sweep.cycles >= 0, "epr_sweep.cycles must be >= 0");
  Require(epr_sweep.reservoir_cutoff >= 1, "epr_sweep.reservoir_cutoff must be >= 1");
  for (double r : epr_sweep.r_values) {
    Require(UsableR(r), "epr_sweep.r_values must be in [0, 5]");
  }

  try {
    ParseSidebandModel(sideband.model);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("sideband.model: ") + e.what());
  }
  Require(Positive(sideband.omega), "sideband.omega must be positive");
  Require(NonNegative(sideband.gamma0), "sideband.gamma0 must be >= 0");
  Require(std::isfinite(sideband.exponent), "sideband.exponent must be finite");
  Require(sideband.n_max >= 0, "sideband.n_max must be >= 0");
  Require(Positive(sideband.t_max), "sideband.t_max must be positive");
  Require(sideband.points >= 2, "sideband.points must be >= 2");
  Require(sideband.repetitions >= 0, "sideband.repetitions must be >= 0");
  Require(sideband.source == "populations" || sideband.source == "ideal" ||
              sideband.source == "reservoir",
          "sideband.source must be \"populations\", \"ideal\" or \"reservoir\"");
  Require(sideband.source != "populations" || !sideband.populations.empty(),
          "sideband.populations is empty");
  Require(sideband.starts >= 1, "sideband.starts must be >= 1");

  Require(UsableR(three_mode.r), "three_mode.r must be in [0, 5]");
  Require(three_mode.reservoir_cutoff >= 1 && three_mode.ideal_cutoff >= 1,
          "three_mode cutoffs must be >= 1");
  Require(three_mode.ideal_cutoff >= MinCutoff(three_mode.r),
          "three_mode.ideal_cutoff is below N_min(three_mode.r) = " +
              std::to_string(MinCutoff(three_mode.r)));
  Require(three_mode.cycles >= 0, "three_mode.cycles must be >= 0");

  Require(!output.dir.empty(), "output.dir must not be empty");
  Require(!output.prefix.empty() &&
              output.prefix.find('/') == std::string::npos,
          "output.prefix must be a non-empty file name prefix");
  Require(Positive(constants.trap_frequency_1) && Positive(constants.trap_frequency_2),
          "trap frequencies must be positive");
}

nlohmann::json ExperimentConfig::ToJson() const {
  json j;
  j["seed"] = seed;
  j["threads"] = threads;
  j["layout"] = {{"modes", layout.modes},
                 {"cutoff", layout.cutoff},
                 {"spins", layout.spins},
                 {"allow_truncated_cutoff", layout.allow_truncated_cutoff}};
  j["squeeze"] = {{"r", squeeze.r}, {"phi", squeeze.phi}};
  j["reservoir"] = {{"nbar", reservoir.nbar},
                    {"omega", reservoir.omega},
                    {"pulse_mode", reservoir.pulse_mode},
                    {"pulse_duration", reservoir.pulse_duration},
                    {"cycles", reservoir.cycles},
                    {"drift_sigma", reservoir.drift_sigma},
                    {"escalation_threshold", reservoir.escalation_threshold}};
  j["metrology"] = {{"omega_plus", metrology.omega_plus},
                    {"omega_minus", metrology.omega_minus},
                    {"t",
                     {{"start", metrology.t.start},
                      {"stop", metrology.t.stop},
                      {"points", metrology.t.points},
                      {"spacing", metrology.t.spacing}}},
                    {"trials", metrology.trials},
                    {"batch", metrology.batch},
                    {"qfi_t", metrology.qfi_t},
                    {"qfi_cutoff", metrology.qfi_cutoff}};
  j["epr_sweep"] = {{"r_values", epr_sweep.r_values},
                    {"cycles", epr_sweep.cycles},
                    {"reservoir_cutoff", epr_sweep.reservoir_cutoff}};
  j["sideband"] = {{"model", sideband.model},
                   {"omega", sideband.omega},
                   {"gamma0", sideband.gamma0},
                   {"exponent", sideband.exponent},
                   {"n_max", sideband.n_max},
                   {"t_max", sideband.t_max},
                   {"points", sideband.points},
                   {"repetitions", sideband.repetitions},
                   {"source", sideband.source},
                   {"populations", sideband.populations},
                   {"fit_gamma0", sideband.fit_gamma0},
                   {"starts", sideband.starts},
                   {"literal_paper_normalization", sideband.literal_paper_normalization},
                   {"curves", sideband.curves}};
  j["three_mode"] = {{"r", three_mode.r},
                     {"reservoir_cutoff", three_mode.reservoir_cutoff},
                     {"ideal_cutoff", three_mode.ideal_cutoff},
                     {"cycles", three_mode.cycles}};
  j["output"] = {{"dir", output.dir},
                 {"prefix", output.prefix},
                 {"wall_clock", output.wall_clock}};
  j["constants"] = {{"trap_frequency_1", constants.trap_frequency_1},
                    {"trap_frequency_2", constants.trap_frequency_2},
                    {"lamb_dicke_1", constants.lamb_dicke_1},
                    {"lamb_dicke_2", constants.lamb_dicke_2}};
  return j;
}

nlohmann::json ExperimentConfig::HashedJson() const {
  json j = ToJson();
  j.erase("threads");
  j.erase("output");
  return j;
}

std::string ExperimentConfig::Hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(HashedJson().dump())));
  return buf;
}

}  // namespace squeezelab::cli
