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

#ifndef SQUEEZELAB_LAYOUT_H_
#define SQUEEZELAB_LAYOUT_H_

#include <cstddef>
#include <string>
#include <vector>

namespace squeezelab {

/// Largest joint dimension a layout may describe (state vectors only).
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 23;

/// Largest dimension for which dense matrices are materialized. Beyond this
/// operators must be applied factor-wise.
inline constexpr std::size_t kMaxDenseDimension = 16384;

/// Population allowed on the top two Fock levels of any mode before a
/// truncation warning is raised.
inline constexpr double kTruncationThreshold = 1e-6;

/// Spin bits and Fock occupations of one basis vector. Spin value 0 is |down>,
/// 1 is |up>.
struct BasisLabel {
  std::vector<int> spins;
  std::vector<int> occupations;

  bool operator==(const BasisLabel&) const = default;
};

/// Tensor-product structure spin_1 (x) ... (x) spin_S (x) mode_1 (x) ... (x)
/// mode_M. Sites are numbered in that order; the first site is the most
/// significant digit of the joint index, so all spin-down states occupy the
/// leading contiguous block.
class HilbertLayout {
 public:
  HilbertLayout(int modes, int cutoff, int spins = 0);
  HilbertLayout(std::vector<int> cutoffs, int spins);

  int modes() const { return static_cast<int>(cutoffs_.size()); }
  int spins() const { return spins_; }
  int cutoff(int mode) const;
  const std::vector<int>& cutoffs() const { return cutoffs_; }

  std::size_t dimension() const { return dimension_; }
  std::size_t motional_dimension() const { return dimension_ >> spins_; }
  std::size_t spin_dimension() const { return std::size_t{1} << spins_; }

  int num_sites() const { return static_cast<int>(site_dims_.size()); }
  int site_dimension(int site) const { return site_dims_.at(site); }
  std::size_t stride(int site) const { return strides_.at(site); }
  int spin_site(int spin) const;
  int mode_site(int mode) const;

  BasisLabel Labels(std::size_t index) const;
  std::size_t Index(const BasisLabel& label) const;

  /// Same modes and cutoffs with the spins removed.
  HilbertLayout Motional() const;
  /// Same modes and cutoffs with `spins` spins.
  HilbertLayout WithSpins(int spins) const;

  void CheckMode(int mode) const;
  void CheckSpin(int spin) const;

  std::string ToString() const;

  bool operator==(const HilbertLayout& other) const {
    return cutoffs_ == other.cutoffs_ && spins_ == other.spins_;
  }

 private:
  std::vector<int> cutoffs_;
  int spins_ = 0;
  std::vector<int> site_dims_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 0;
};

void RequireSameLayout(const HilbertLayout& a, const HilbertLayout& b,
                       const char* what);

}  // namespace squeezelab

#endif  // SQUEEZELAB_LAYOUT_H_
