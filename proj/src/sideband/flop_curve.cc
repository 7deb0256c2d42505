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

#include "squeezelab/flop_curve.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "squeezelab/errors.h"
#include "squeezelab/format.h"

namespace squeezelab {
namespace {

double ParseField(const std::string& text, const std::string& source, int line,
                  int column) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument(source + ":" + std::to_string(line) + ":" +
                          std::to_string(column) + ": not a number: '" + text +
                          "'");
  }
  return v;
}

}  // namespace

void FlopCurve::Validate() const {
  if (dimensionality < 1 || dimensionality > 3) {
    throw InvalidArgument("curve dimensionality must be 1, 2 or 3");
  }
  if (times.size() != p_down.size()) {
    throw InvalidArgument("curve has " + std::to_string(times.size()) +
                          " time rows but " + std::to_string(p_down.size()) +
                          " probabilities");
  }
  if (repetitions < 0) throw InvalidArgument("repetitions must be >= 0");
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (static_cast<int>(times[i].size()) != dimensionality) {
      throw InvalidArgument("row " + std::to_string(i) + " has " +
                            std::to_string(times[i].size()) + " times");
    }
    for (double t : times[i]) {
      if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("row " + std::to_string(i) +
                              ": times must be finite and >= 0");
      }
    }
    if (!(p_down[i] >= 0.0 && p_down[i] <= 1.0)) {
      throw InvalidArgument("row " + std::to_string(i) + ": p_down " +
                            FormatNumber(p_down[i]) + " outside [0,1]");
    }
    if (dimensionality == 1 && i > 0 && !(times[i][0] > times[i - 1][0])) {
      throw InvalidArgument("row " + std::to_string(i) +
                            ": times must be strictly increasing");
    }
    if (!seen.insert(times[i]).second) {
      throw InvalidArgument("row " + std::to_string(i) + ": repeated time tuple");
    }
  }
}

void FlopCurve::WriteCsv(std::ostream& out) const {
  static const char* kNames[] = {"t1", "t2", "t3"};
  if (dimensionality == 1) {
    out << "t";
  } else {
    for (int d = 0; d < dimensionality; ++d) out << (d ? "," : "") << kNames[d];
  }
  out << ",p_down,shots\n";
  for (std::size_t i = 0; i < size(); ++i) {
    for (double t : times[i]) out << FormatNumber(t) << ',';
    out << FormatNumber(p_down[i]) << ',' << repetitions << '\n';
  }
}

FlopCurve FlopCurve::ReadCsv(std::istream& in, const std::string& source) {
  FlopCurve curve;
  std::string line;
  int line_no = 0;
  bool header = false;
  int width = 0;
  bool shots_set = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!header) {
      header = true;
      width = static_cast<int>(fields.size());
      if (width < 3 || width > 5 || fields[width - 1] != "shots" ||
          fields[width - 2] != "p_down") {
        throw InvalidArgument(source + ":" + std::to_string(line_no) +
                              ": expected header t[,t2[,t3]],p_down,shots");
      }
      curve.dimensionality = width - 2;
      continue;
    }
    if (static_cast<int>(fields.size()) != width) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) +
                            ": expected " + std::to_string(width) +
                            " columns, found " + std::to_string(fields.size()));
    }
    std::vector<double> t;
    for (int d = 0; d < curve.dimensionality; ++d) {
      t.push_back(ParseField(fields[d], source, line_no, d + 1));
    }
    const double p = ParseField(fields[width - 2], source, line_no, width - 1);
    const double shots = ParseField(fields[width - 1], source, line_no, width);
    if (shots < 0 || shots != std::floor(shots)) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ":" +
                            std::to_string(width) +
                            ": shots must be a non-negative integer");
    }
    if (shots_set && static_cast<int>(shots) != curve.repetitions) {
      throw InvalidArgument(source + ":" + std::to_string(line_no) + ":" +
                            std::to_string(width) +
                            ": shots must be the same on every row");
    }
    curve.repetitions = static_cast<int>(shots);
    shots_set = true;
    curve.times.push_back(std::move(t));
    curve.p_down.push_back(p);
  }
  if (!header) throw InvalidArgument(source + ": empty curve file");
  curve.Validate();
  return curve;
}

}  // namespace squeezelab
