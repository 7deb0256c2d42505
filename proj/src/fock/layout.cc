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

#include "squeezelab/layout.h"

#include <sstream>
#include <utility>

#include "squeezelab/errors.h"

namespace squeezelab {

HilbertLayout::HilbertLayout(int modes, int cutoff, int spins)
    : HilbertLayout(std::vector<int>(modes < 0 ? 0 : modes, cutoff), spins) {}

HilbertLayout::HilbertLayout(std::vector<int> cutoffs, int spins)
    : cutoffs_(std::move(cutoffs)), spins_(spins) {
  if (cutoffs_.empty()) {
    throw InvalidArgument("layout needs at least one mode");
  }
  if (spins_ < 0 || spins_ > 8) {
    throw InvalidArgument("spin count must be in [0, 8], got " +
                          std::to_string(spins_));
  }
  for (int n : cutoffs_) {
    if (n < 1) {
      throw InvalidArgument("Fock cutoff must be >= 1, got " +
                            std::to_string(n));
    }
  }
  site_dims_.assign(spins_, 2);
  for (int n : cutoffs_) site_dims_.push_back(n + 1);

  strides_.assign(site_dims_.size(), 1);
  std::size_t dim = 1;
  for (int s = num_sites() - 1; s >= 0; --s) {
    strides_[s] = dim;
    if (dim > kMaxDimension / site_dims_[s]) {
      throw InvalidArgument("layout dimension exceeds the memory budget of " +
                            std::to_string(kMaxDimension));
    }
    dim *= site_dims_[s];
  }
  dimension_ = dim;
}

int HilbertLayout::cutoff(int mode) const {
  CheckMode(mode);
  return cutoffs_[mode];
}

int HilbertLayout::spin_site(int spin) const {
  CheckSpin(spin);
  return spin;
}

int HilbertLayout::mode_site(int mode) const {
  CheckMode(mode);
  return spins_ + mode;
}

BasisLabel HilbertLayout::Labels(std::size_t index) const {
  if (index >= dimension_) {
    throw InvalidArgument("basis index " + std::to_string(index) +
                          " out of range");
  }
  BasisLabel label;
  label.spins.resize(spins_);
  label.occupations.resize(cutoffs_.size());
  for (int s = 0; s < num_sites(); ++s) {
    const int digit = static_cast<int>(index / strides_[s]);
    index %= strides_[s];
    if (s < spins_) {
      label.spins[s] = digit;
    } else {
      label.occupations[s - spins_] = digit;
    }
  }
  return label;
}

std::size_t HilbertLayout::Index(const BasisLabel& label) const {
  if (static_cast<int>(label.spins.size()) != spins_ ||
      label.occupations.size() != cutoffs_.size()) {
    throw InvalidArgument("basis label shape does not match layout");
  }
  std::size_t index = 0;
  for (int s = 0; s < num_sites(); ++s) {
    const int digit =
        s < spins_ ? label.spins[s] : label.occupations[s - spins_];
    if (digit < 0 || digit >= site_dims_[s]) {
      throw InvalidArgument("basis label digit out of range at site " +
                            std::to_string(s));
    }
    index += static_cast<std::size_t>(digit) * strides_[s];
  }
  return index;
}

HilbertLayout HilbertLayout::Motional() const { return WithSpins(0); }

HilbertLayout HilbertLayout::WithSpins(int spins) const {
  return HilbertLayout(cutoffs_, spins);
}

void HilbertLayout::CheckMode(int mode) const {
  if (mode < 0 || mode >= modes()) {
    throw InvalidArgument("mode index " + std::to_string(mode) +
                          " out of range for " + std::to_string(modes()) +
                          " mode(s)");
  }
}

void HilbertLayout::CheckSpin(int spin) const {
  if (spin < 0 || spin >= spins_) {
    throw InvalidArgument("spin index " + std::to_string(spin) +
                          " out of range for " + std::to_string(spins_) +
                          " spin(s)");
  }
}

std::string HilbertLayout::ToString() const {
  std::ostringstream out;
  out << "spins=" << spins_ << " cutoffs=[";
  for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
    out << (i ? "," : "") << cutoffs_[i];
  }
  out << "] dim=" << dimension_;
  return out.str();
}

void RequireSameLayout(const HilbertLayout& a, const HilbertLayout& b,
                       const char* what) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(what) + ": layouts differ (" +
                            a.ToString() + " vs " + b.ToString() + ")");
  }
}

}  // namespace squeezelab
