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

#include "squeezelab/reservoir.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "squeezelab/errors.h"
#include "squeezelab/random.h"
#include "squeezelab/evolve.h"
#include "squeezelab/format.h"
#include "squeezelab/squeeze.h"

namespace squeezelab {
namespace {

std::vector<int> ModeOrder(const CycleConfig& config, int modes) {
  if (!config.mode_order.empty()) return config.mode_order;
  std::vector<int> order(modes);
  for (int m = 0; m < modes; ++m) order[m] = m;
  return order;
}

CutoffPolicy Policy(const CycleConfig& config) {
  return config.allow_truncated_cutoff ? CutoffPolicy::kWarn
                                       : CutoffPolicy::kThrow;
}

ComplexMatrix MotionBlock(const HilbertLayout& layout, const ComplexMatrix& rho) {
  const Eigen::Index md = static_cast<Eigen::Index>(layout.motional_dimension());
  ComplexMatrix out = ComplexMatrix::Zero(md, md);
  for (std::size_t s = 0; s < layout.spin_dimension(); ++s) {
    const Eigen::Index o = static_cast<Eigen::Index>(s) * md;
    out += rho.block(o, o, md, md);
  }
  return out;
}

// Pulses and analysis shared by PumpPulse and RunReservoir.
class Engine {
 public:
  Engine(const HilbertLayout& layout, const CycleConfig& config)
      : layout_(layout),
        config_(config),
        motion_(layout.Motional()),
        rotation_(SqueezeGenerator(motion_, config.r, Policy(config)), 1.0),
        target_(SqueezedVacuum(motion_, config.r, Policy(config))) {
    for (int m = 0; m < layout.modes(); ++m) {
      couplings_.push_back(CouplingHamiltonian(layout, m, config.omega[m], config.r));
      numbers_.push_back(BuildNumber(layout, m));
    }
  }

  ComplexMatrix Pulse(const ComplexMatrix& rho, int mode, std::mt19937_64& rng) {
    const double tau = config_.PulseDuration(mode);
    if (config_.drift_sigma == 0.0) {
      if (!cached_[mode]) {
        cached_[mode] = std::make_unique<BlockUnitary>(couplings_[mode], tau);
      }
      return cached_[mode]->Conjugate(rho);
    }
    std::normal_distribution<double> normal(0.0, config_.drift_sigma);
    OperatorMatrix h = couplings_[mode];
    for (int k = 0; k < layout_.modes(); ++k) h = h + numbers_[k] * normal(rng);
    return BlockUnitary(h.AsHermitian(), tau).Conjugate(rho);
  }

  ComplexMatrix Pump(const ComplexMatrix& rho) const {
    const Eigen::Index md = static_cast<Eigen::Index>(layout_.motional_dimension());
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    out.topLeftCorner(md, md) = MotionBlock(layout_, rho);
    return out;
  }

  CycleRecord Record(const ComplexMatrix& rho, int cycle) const {
    CycleRecord rec;
    rec.cycle = cycle;
    const ComplexMatrix m = MotionBlock(layout_, rho);
    rec.trace_deficit = std::abs(1.0 - m.trace().real());
    const ComplexMatrix rotated = rotation_.ConjugateInverse(m);
    rec.f_lower = 1.0;
    for (int k = 0; k < motion_.modes(); ++k) {
      const int site = motion_.mode_site(k);
      const std::size_t stride = motion_.stride(site);
      const int d = motion_.site_dimension(site);
      double p0 = 0.0;
      for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
        if ((static_cast<std::size_t>(i) / stride) % d == 0) p0 += rotated(i, i).real();
      }
      rec.p0k.push_back(p0);
      rec.f_lower *= p0;
    }
    const ComplexVector& t = target_.amplitudes();
    rec.f_exact = t.dot(m * t).real();
    return rec;
  }

 private:
  HilbertLayout layout_;
  CycleConfig config_;
  HilbertLayout motion_;
  BlockUnitary rotation_;
  StateVector target_;
  std::vector<OperatorMatrix> couplings_;
  std::vector<OperatorMatrix> numbers_;
  std::unique_ptr<BlockUnitary> cached_[3];
};

double TopLevel(const HilbertLayout& layout, const ComplexMatrix& rho) {
  double worst = 0.0;
  for (int m = 0; m < layout.modes(); ++m) {
    const int site = layout.mode_site(m);
    const std::size_t stride = layout.stride(site);
    const int d = layout.site_dimension(site);
    double top = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      if (static_cast<int>((static_cast<std::size_t>(i) / stride) % d) >= d - 2) {
        top += rho(i, i).real();
      }
    }
    worst = std::max(worst, top);
  }
  return worst;
}

}  // namespace

void CycleConfig::Validate(const HilbertLayout& layout) const {
  if (layout.spins() < 1) throw InvalidArgument("reservoir needs a spin");
  if (layout.modes() != 2 && layout.modes() != 3) {
    throw InvalidArgument("reservoir supports two or three modes");
  }
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be >= 0");
  if (static_cast<int>(omega.size()) != layout.modes()) {
    throw InvalidArgument("need one coupling rate per mode");
  }
  for (double w : omega) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("coupling rates must be positive");
    }
  }
  if (pulse_mode == PulseMode::kExplicit &&
      (!(pulse_duration > 0.0) || !std::isfinite(pulse_duration))) {
    throw InvalidArgument("explicit pulse duration must be positive");
  }
  if (cycles < 0) throw InvalidArgument("cycles must be >= 0");
  if (!(drift_sigma >= 0.0) || !std::isfinite(drift_sigma)) {
    throw InvalidArgument("drift_sigma must be >= 0");
  }
  for (int m : mode_order) layout.CheckMode(m);
}

double CycleConfig::PulseDuration(int mode) const {
  if (pulse_mode == PulseMode::kExplicit) return pulse_duration;
  return M_PI / (2.0 * omega.at(mode));
}

DensityOperator PumpPulse(const DensityOperator& rho, int mode,
                          const CycleConfig& config, std::mt19937_64& rng) {
  config.Validate(rho.layout());
  rho.layout().CheckMode(mode);
  Engine engine(rho.layout(), config);
  return DensityOperator(rho.layout(), engine.Pulse(rho.entries(), mode, rng));
}

DensityOperator OpticalPump(const DensityOperator& rho) {
  return AttachSpinsDown(rho.layout(), PartialTraceSpin(rho));
}

double EngineeredPopulation(const DensityOperator& rho, double r, int mode,
                            int n) {
  const HilbertLayout motion = rho.layout().Motional();
  motion.CheckMode(mode);
  if (n < 0 || n > motion.cutoff(mode)) {
    throw InvalidArgument("engineered Fock index " + std::to_string(n) +
                          " outside 0.." + std::to_string(motion.cutoff(mode)));
  }
  const ComplexMatrix m = rho.layout().spins() > 0
                              ? MotionBlock(rho.layout(), rho.entries())
                              : rho.entries();
  const BlockUnitary rotation(SqueezeGenerator(motion, r), 1.0);
  const ComplexMatrix rotated = rotation.ConjugateInverse(m);
  const int site = motion.mode_site(mode);
  const std::size_t stride = motion.stride(site);
  const int d = motion.site_dimension(site);
  double p = 0.0;
  for (Eigen::Index i = 0; i < rotated.rows(); ++i) {
    if (static_cast<int>((static_cast<std::size_t>(i) / stride) % d) == n) {
      p += rotated(i, i).real();
    }
  }
  return p;
}

std::vector<double> EngineeredGroundPopulations(const DensityOperator& rho,
                                                double r) {
  std::vector<double> out;
  for (int m = 0; m < rho.layout().modes(); ++m) {
    out.push_back(EngineeredPopulation(rho, r, m, 0));
  }
  return out;
}

void FidelityTrajectory::WriteCsv(std::ostream& out) const {
  const std::size_t modes = records.empty() ? 2 : records.front().p0k.size();
  out << "cycle,F_lower,F_exact";
  for (std::size_t k = 0; k < modes; ++k) out << ",P0K" << k + 1;
  out << ",trace_deficit\n";
  for (const auto& r : records) {
    out << r.cycle << ',' << FormatNumber(r.f_lower) << ','
        << FormatNumber(r.f_exact);
    for (double p : r.p0k) out << ',' << FormatNumber(p);
    out << ',' << FormatNumber(r.trace_deficit) << '\n';
  }
}

FidelityTrajectory RunReservoir(const DensityOperator& initial,
                                const CycleConfig& config,
                                std::uint64_t stream) {
  const HilbertLayout& layout = initial.layout();
  config.Validate(layout);
  Engine engine(layout, config);
  std::mt19937_64 rng = MakeRandomStream(config.seed, stream);
  const std::vector<int> order = ModeOrder(config, layout.modes());

  FidelityTrajectory traj;
  ComplexMatrix rho = initial.entries();
  traj.records.push_back(engine.Record(rho, 0));
  traj.max_top_level = TopLevel(layout, rho);
  for (int c = 1; c <= config.cycles; ++c) {
    for (int mode : order) {
      rho = engine.Pump(engine.Pulse(rho, mode, rng));
    }
    traj.records.push_back(engine.Record(rho, c));
    traj.max_top_level = std::max(traj.max_top_level, TopLevel(layout, rho));
  }
  auto final_state = std::make_shared<const DensityOperator>(layout, std::move(rho));
  CheckTruncation(*final_state, "reservoir output");
  traj.final_state = std::move(final_state);
  return traj;
}

}  // namespace squeezelab
