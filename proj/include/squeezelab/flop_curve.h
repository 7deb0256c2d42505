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

#ifndef SQUEEZELAB_FLOP_CURVE_H_
#define SQUEEZELAB_FLOP_CURVE_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace squeezelab {

/// Spin-down probability sampled on a 1-, 2- or 3-D grid of pulse durations.
/// Multi-dimensional grids are stored long-form, one time tuple per row.
struct FlopCurve {
  int dimensionality = 1;
  std::vector<std::vector<double>> times;
  std::vector<double> p_down;
  /// Shots per point; 0 marks an exact (noise-free) curve.
  int repetitions = 0;

  std::size_t size() const { return p_down.size(); }
  /// Throws InvalidArgument: p_down outside [0,1], bad tuple widths, negative
  /// or non-finite times, 1-D times not strictly increasing, repeated tuples.
  void Validate() const;

  /// t[,t2[,t3]],p_down,shots
  void WriteCsv(std::ostream& out) const;
  /// Parses WriteCsv output; '#' lines are skipped. Errors name the line and
  /// column.
  static FlopCurve ReadCsv(std::istream& in, const std::string& source);
};

}  // namespace squeezelab

#endif  // SQUEEZELAB_FLOP_CURVE_H_
