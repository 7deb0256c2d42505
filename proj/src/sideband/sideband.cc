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

#include "squeezelab/sideband.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "squeezelab/errors.h"
#include "squeezelab/format.h"
#include "squeezelab/random.h"

namespace squeezelab {
namespace {

constexpr double kExactCurveSigma = 1e-3;
constexpr double kDegenerateChi2 = 25.0;

// Per-axis factor f_n(t) and its derivative with respect to gamma0.
struct AxisFactors {
  std::vector<double> value;
  std::vector<double> d_gamma;
};

AxisFactors Factors(const ModelSpec& spec, int axis, int n_max, double t,
                    double gamma0) {
  const RateLaw& law = spec.rate(axis);
  AxisFactors f;
  f.value.resize(n_max + 1);
  f.d_gamma.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double w = std::pow(n + 1.0, law.exponent);
    const double decay = std::exp(-gamma0 * w * t);
    if (spec.model == SidebandModel::kSingle ||
        spec.model == SidebandModel::kFock2d) {
      const double c = std::cos(law.Rabi(n) * t);
      f.value[n] = 1.0 + decay * c;
      f.d_gamma[n] = -w * t * decay * c;
    } else {
      const double w0 = law.Rabi(n), w1 = law.Rabi(n + 1);
      const double s = w0 * w0 + w1 * w1;
      double c = std::cos(0.5 * std::sqrt(s) * t);
      c *= c;
      if (spec.literal_paper_normalization) c /= s * s;
      f.value[n] = decay * c;
      f.d_gamma[n] = -w * t * decay * c;
    }
  }
  return f;
}

double Prefactor(const ModelSpec& spec) {
  switch (spec.model) {
    case SidebandModel::kSingle:
      return 0.5;
    case SidebandModel::kFock2d:
      return spec.literal_paper_normalization ? 0.5 : 0.25;
    default:
      return 1.0;
  }
}

void CheckTimes(const ModelSpec& spec, const std::vector<double>& times) {
  if (static_cast<int>(times.size()) != spec.axes()) {
    throw InvalidArgument(std::string(SidebandModelName(spec.model)) +
                          " model needs " + std::to_string(spec.axes()) +
                          " pulse durations, got " +
                          std::to_string(times.size()));
  }
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InvalidArgument("pulse durations must be finite and >= 0");
    }
  }
}

// Model value, gradient with respect to the populations and derivative with
// respect to a gamma0 shared by all axes. A null `gamma0` keeps the per-axis
// rate-law values.
double Evaluate(const ModelSpec& spec, int n_max, const std::vector<double>& p,
                const std::vector<double>& times, const double* gamma0,
                double* grad_p, double* d_gamma) {
  const int axes = spec.axes();
  std::vector<AxisFactors> f;
  for (int a = 0; a < axes; ++a) {
    f.push_back(Factors(spec, a, n_max, times[a],
                        gamma0 ? *gamma0 : spec.rate(a).gamma0));
  }
  const double pref = Prefactor(spec);
  const int d = n_max + 1;
  double total = 0.0;
  double dg = 0.0;
  std::vector<int> occ(axes, 0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::size_t rest = k;
    for (int a = axes - 1; a >= 0; --a) {
      occ[a] = static_cast<int>(rest % d);
      rest /= d;
    }
    double prod = pref;
    for (int a = 0; a < axes; ++a) prod *= f[a].value[occ[a]];
    total += p[k] * prod;
    if (grad_p) grad_p[k] = prod;
    if (d_gamma) {
      for (int a = 0; a < axes; ++a) {
        double term = pref * f[a].d_gamma[occ[a]];
        for (int b = 0; b < axes; ++b) {
          if (b != a) term *= f[b].value[occ[b]];
        }
        dg += p[k] * term;
      }
    }
  }
  if (d_gamma) *d_gamma = dg;
  return total;
}

std::size_t IntPow(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

PopulationTable FromProbabilities(const HilbertLayout& layout,
                                  const Eigen::VectorXd& diag) {
  if (layout.modes() < 1 || layout.modes() > 3) {
    throw InvalidArgument("Fock populations support 1 to 3 modes");
  }
  const int n = layout.cutoff(0);
  for (int m = 1; m < layout.modes(); ++m) {
    if (layout.cutoff(m) != n) {
      throw InvalidArgument("Fock populations need equal cutoffs");
    }
  }
  PopulationTable out;
  out.axes = layout.modes();
  out.n_max = n;
  const std::size_t md = layout.motional_dimension();
  out.values.assign(md, 0.0);
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    out.values[static_cast<std::size_t>(i) % md] += diag(i);
  }
  return out;
}

}  // namespace

const char* SidebandModelName(SidebandModel model) {
  switch (model) {
    case SidebandModel::kSingle:
      return "single";
    case SidebandModel::kFock2d:
      return "fock2d";
    case SidebandModel::kTwoIon:
      return "two_ion";
    case SidebandModel::kThreeMode:
      return "three_mode";
  }
  return "unknown";
}

SidebandModel ParseSidebandModel(const std::string& name) {
  for (auto m : {SidebandModel::kSingle, SidebandModel::kFock2d,
                 SidebandModel::kTwoIon, SidebandModel::kThreeMode}) {
    if (name == SidebandModelName(m)) return m;
  }
  throw InvalidArgument("unknown sideband model '" + name +
                        "' (single, fock2d, two_ion, three_mode)");
}

int ModelAxes(SidebandModel model) {
  switch (model) {
    case SidebandModel::kFock2d:
      return 2;
    case SidebandModel::kThreeMode:
      return 3;
    default:
      return 1;
  }
}

double RateLaw::Rabi(int n) const { return omega * std::sqrt(n + 1.0); }

double RateLaw::Decay(int n) const {
  return gamma0 * std::pow(n + 1.0, exponent);
}

void RateLaw::Validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("Rabi rate must be finite and > 0");
  }
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
    throw InvalidArgument("gamma0 must be finite and >= 0");
  }
  if (!std::isfinite(exponent)) {
    throw InvalidArgument("decay exponent must be finite");
  }
}

const RateLaw& ModelSpec::rate(int axis) const {
  if (rates.size() == 1) return rates[0];
  return rates.at(static_cast<std::size_t>(axis));
}

void ModelSpec::Validate() const {
  if (rates.size() != 1 && static_cast<int>(rates.size()) != axes()) {
    throw InvalidArgument(std::string(SidebandModelName(model)) + " needs 1 or " +
                          std::to_string(axes()) + " rate laws, got " +
                          std::to_string(rates.size()));
  }
  for (const auto& r : rates) r.Validate();
}

PopulationTable PopulationTable::FromVector(std::vector<double> p) {
  if (p.empty()) throw InvalidArgument("empty population vector");
  PopulationTable t;
  t.axes = 1;
  t.n_max = static_cast<int>(p.size()) - 1;
  t.values = std::move(p);
  return t;
}

double PopulationTable::Total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

std::vector<int> PopulationTable::Occupations(std::size_t flat) const {
  std::vector<int> occ(axes);
  for (int a = axes - 1; a >= 0; --a) {
    occ[a] = static_cast<int>(flat % (n_max + 1));
    flat /= (n_max + 1);
  }
  return occ;
}

std::size_t PopulationTable::Flat(const std::vector<int>& occupations) const {
  if (static_cast<int>(occupations.size()) != axes) {
    throw InvalidArgument("population label has the wrong number of modes");
  }
  std::size_t k = 0;
  for (int n : occupations) {
    if (n < 0 || n > n_max) throw InvalidArgument("occupation out of range");
    k = k * (n_max + 1) + n;
  }
  return k;
}

void PopulationTable::Validate(double tolerance) const {
  if (axes < 1 || axes > 3 || n_max < 0) {
    throw InvalidArgument("population table needs 1-3 axes and n_max >= 0");
  }
  if (values.size() != IntPow(n_max + 1, axes)) {
    throw InvalidArgument("population table has " +
                          std::to_string(values.size()) + " entries, expected " +
                          std::to_string(IntPow(n_max + 1, axes)));
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("population " + FormatNumber(v) +
                            " outside [0, 1]");
    }
  }
  if (Total() > 1.0 + tolerance) {
    throw InvalidArgument("populations sum to " + FormatNumber(Total()) +
                          " > 1");
  }
}

PopulationTable JointFockPopulations(const StateVector& psi) {
  return FromProbabilities(psi.layout(), psi.amplitudes().cwiseAbs2());
}

PopulationTable JointFockPopulations(const DensityOperator& rho) {
  return FromProbabilities(rho.layout(),
                           rho.entries().diagonal().real().cwiseMax(0.0));
}

double ModelProbability(const ModelSpec& spec, const PopulationTable& p,
                        const std::vector<double>& times) {
  spec.Validate();
  if (p.axes != spec.axes()) {
    throw InvalidArgument("population table has " + std::to_string(p.axes) +
                          " axes, model needs " + std::to_string(spec.axes()));
  }
  p.Validate();
  CheckTimes(spec, times);
  return Evaluate(spec, p.n_max, p.values, times, nullptr, nullptr, nullptr);
}

std::vector<std::vector<double>> TimeGrid(int axes, double t_max, int points) {
  if (axes < 1 || axes > 3) throw InvalidArgument("grid needs 1-3 axes");
  if (points < 2 || !(t_max > 0.0)) {
    throw InvalidArgument("grid needs >= 2 points and t_max > 0");
  }
  std::vector<double> axis(points);
  for (int i = 0; i < points; ++i) axis[i] = t_max * i / (points - 1);
  std::vector<std::vector<double>> out;
  const std::size_t total = IntPow(points, axes);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> row(axes);
    std::size_t rest = k;
    for (int a = axes - 1; a >= 0; --a) {
      row[a] = axis[rest % points];
      rest /= points;
    }
    out.push_back(std::move(row));
  }
  return out;
}

FlopCurve SynthesizeCurve(const ModelSpec& spec, const PopulationTable& p,
                          const std::vector<std::vector<double>>& times,
                          int repetitions, std::uint64_t seed) {
  if (repetitions < 0) throw InvalidArgument("repetitions must be >= 0");
  FlopCurve curve;
  curve.dimensionality = spec.axes();
  curve.repetitions = repetitions;
  curve.times = times;
  std::mt19937_64 rng = MakeRandomStream(seed, 0);
  for (const auto& t : times) {
    double prob = ModelProbability(spec, p, t);
    if (prob < -1e-12 || prob > 1.0 + 1e-12) {
      throw InvalidArgument("model value " + FormatNumber(prob) +
                            " is not a probability");
    }
    prob = std::clamp(prob, 0.0, 1.0);
    if (repetitions == 0) {
      curve.p_down.push_back(prob);
    } else {
      std::binomial_distribution<int> draw(repetitions, prob);
      curve.p_down.push_back(double(draw(rng)) / repetitions);
    }
  }
  curve.Validate();
  return curve;
}

void FitConfig::Validate() const {
  spec.Validate();
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  if (starts < 1) throw InvalidArgument("need at least one start");
  const std::size_t k = IntPow(n_max + 1, spec.axes());
  if (!initial_guess.empty() && initial_guess.size() != k) {
    throw InvalidArgument("initial guess has " +
                          std::to_string(initial_guess.size()) +
                          " populations, expected " + std::to_string(k));
  }
}

PopulationEstimate FitPopulations(const FlopCurve& curve,
                                  const FitConfig& config) {
  config.Validate();
  curve.Validate();
  const ModelSpec& spec = config.spec;
  const int axes = spec.axes();
  if (curve.dimensionality != axes) {
    throw InvalidArgument("curve is " + std::to_string(curve.dimensionality) +
                          "-D but the " + SidebandModelName(spec.model) +
                          " model is " + std::to_string(axes) + "-D");
  }
  const int k_pop = static_cast<int>(IntPow(config.n_max + 1, axes));
  const int k = k_pop + (config.fit_gamma0 ? 1 : 0);
  const int m = static_cast<int>(curve.size());
  if (m <= k) {
    throw InvalidArgument("degenerate grid: " + std::to_string(m) +
                          " points for " + std::to_string(k) + " parameters");
  }
  double t_scale = 0.0;
  for (const auto& row : curve.times) {
    for (double t : row) t_scale = std::max(t_scale, t);
  }
  if (t_scale == 0.0) t_scale = 1.0;
  const double gamma_start = spec.rate(0).gamma0;
  auto evaluate = [&](const Eigen::VectorXd& x, int row, double* grad,
                      double* d_gamma) {
    const std::vector<double> p(x.data(), x.data() + k_pop);
    if (!config.fit_gamma0) {
      return Evaluate(spec, config.n_max, p, curve.times[row], nullptr, grad,
                      nullptr);
    }
    const double gamma0 = x(k_pop) / t_scale;
    return Evaluate(spec, config.n_max, p, curve.times[row], &gamma0, grad,
                    d_gamma);
  };

  ResidualFunction residual = [&](const Eigen::VectorXd& x,
                                  Eigen::VectorXd* r, Eigen::MatrixXd* jac) {
    r->resize(m);
    if (jac) jac->resize(m, k);
    std::vector<double> grad(k_pop);
    for (int i = 0; i < m; ++i) {
      double dg = 0.0;
      const double v = evaluate(x, i, jac ? grad.data() : nullptr,
                                jac && config.fit_gamma0 ? &dg : nullptr);
      (*r)(i) = v - curve.p_down[i];
      if (jac) {
        for (int j = 0; j < k_pop; ++j) (*jac)(i, j) = grad[j];
        if (config.fit_gamma0) (*jac)(i, k_pop) = dg / t_scale;
      }
    }
  };
  BoxSimplexConstraints bounds;
  bounds.lower = Eigen::VectorXd::Zero(k);
  bounds.upper = Eigen::VectorXd::Ones(k);
  bounds.simplex_size = k_pop;
  if (config.fit_gamma0) bounds.upper(k_pop) = 1e3;

  std::mt19937_64 rng = MakeRandomStream(config.seed, 0);
  std::gamma_distribution<double> dirichlet(1.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  LevMarResult best;
  best.cost = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (int s = 0; s < config.starts; ++s) {
    Eigen::VectorXd x0(k);
    if (s == 0) {
      if (config.initial_guess.empty()) {
        x0.head(k_pop).setConstant(1.0 / k_pop);
      } else {
        for (int j = 0; j < k_pop; ++j) x0(j) = config.initial_guess[j];
      }
    } else {
      double sum = 0.0;
      for (int j = 0; j < k_pop; ++j) sum += (x0(j) = dirichlet(rng));
      x0.head(k_pop) *= 0.95 / sum;
    }
    if (config.fit_gamma0) {
      x0(k_pop) = s == 0 ? gamma_start * t_scale : uniform(rng);
    }
    LevMarResult res = ProjectedLevMar(residual, bounds, x0, config.solver);
    total_iterations += res.iterations;
    if (res.cost < best.cost) best = std::move(res);
  }

  PopulationEstimate est;
  est.values.axes = axes;
  est.values.n_max = config.n_max;
  est.values.values.assign(best.x.data(), best.x.data() + k_pop);
  est.gamma0 = config.fit_gamma0 ? best.x(k_pop) / t_scale : gamma_start;
  est.residual_norm = best.residual.norm();
  est.iterations = total_iterations;
  est.converged = best.converged;

  const Eigen::MatrixXd jtj = best.jacobian.transpose() * best.jacobian;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jtj);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(ev.maxCoeff(), 1e-300);
  Eigen::VectorXd inv(ev.size());
  bool rank_deficient = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) {
      inv(i) = 1.0 / ev(i);
    } else {
      inv(i) = 0.0;
      rank_deficient = true;
    }
  }
  const Eigen::MatrixXd cov_unit =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  const double s2 = best.residual.squaredNorm() / double(m - k);
  est.std_errors.resize(k_pop);
  for (int j = 0; j < k_pop; ++j) {
    est.std_errors[j] = std::sqrt(std::max(0.0, s2 * cov_unit(j, j)));
  }
  if (config.fit_gamma0) {
    est.gamma0_std_error =
        std::sqrt(std::max(0.0, s2 * cov_unit(k_pop, k_pop))) / t_scale;
  }

  double chi2 = 0.0;
  for (int i = 0; i < m; ++i) {
    double sigma2 = kExactCurveSigma * kExactCurveSigma;
    if (curve.repetitions > 0) {
      const double pm =
          std::clamp(curve.p_down[i] + best.residual(i), 0.0, 1.0);
      const double n = curve.repetitions;
      sigma2 = (pm * (1.0 - pm) + 1.0 / n) / n;
    }
    chi2 += best.residual(i) * best.residual(i) / sigma2;
  }
  est.reduced_chi2 = chi2 / double(m - k);
  est.degenerate = rank_deficient || est.reduced_chi2 > kDegenerateChi2;
  return est;
}

FidelityBoundResult FidelityBoundCheck(double a, double b, double c,
                                       double d) {
  for (double v : {a, b, c, d}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("A, B, C, D must be finite and >= 0");
    }
  }
  if (std::abs(a + b + c + d - 1.0) > 1e-9) {
    throw InvalidArgument("A + B + C + D = " + FormatNumber(a + b + c + d) +
                          ", expected 1");
  }
  FidelityBoundResult out;
  out.margin = a - (a + b) * (a + c);
  out.holds = out.margin >= 0.0;
  return out;
}

FidelityBoundSweep SweepFidelityBound(double p1, double p2, double a_min,
                                      double step) {
  if (!(step > 0.0)) throw InvalidArgument("sweep step must be > 0");
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
    throw InvalidArgument("marginal ground populations must lie in [0, 1]");
  }
  FidelityBoundSweep out;
  out.min_margin = std::numeric_limits<double>::infinity();
  out.threshold_a = std::numeric_limits<double>::quiet_NaN();
  const double a_max = std::min(p1, p2);
  const int count = static_cast<int>(std::floor((a_max - a_min) / step + 1e-9));
  for (int i = 0; i <= count; ++i) {
    const double a = a_min + i * step;
    const double b = p1 - a, c = p2 - a;
    const double d = 1.0 - a - b - c;
    if (b < -1e-12 || c < -1e-12 || d < -1e-12) continue;
    const auto r = FidelityBoundCheck(a, std::max(b, 0.0), std::max(c, 0.0),
                                      std::max(d, 0.0));
    ++out.points;
    if (!r.holds) ++out.violations;
    if (r.margin < out.min_margin) {
      out.min_margin = r.margin;
      out.argmin_a = a;
    }
    if (r.holds && std::isnan(out.threshold_a)) out.threshold_a = a;
  }
  if (out.points == 0) throw InvalidArgument("sweep region is empty");
  return out;
}

}  // namespace squeezelab
