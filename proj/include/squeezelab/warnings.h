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

#ifndef SQUEEZELAB_WARNINGS_H_
#define SQUEEZELAB_WARNINGS_H_

#include <memory>
#include <string>
#include <vector>

namespace squeezelab {

enum class WarningKind {
  kTruncation,
  kNonConvergence,
  kOther,
};

const char* WarningKindName(WarningKind kind);

struct Warning {
  WarningKind kind = WarningKind::kOther;
  std::string message;
  double value = 0.0;  // offending magnitude, when there is one
};

/// Routes `warning` to the innermost live ScopedWarningCollector. With none
/// alive the warning is printed to stderr. Thread-safe.
void EmitWarning(Warning warning);

/// Installs a handler for the lifetime of the object that records every
/// warning emitted (from any thread) while it is alive.
class ScopedWarningCollector {
 public:
  ScopedWarningCollector();
  ~ScopedWarningCollector();
  ScopedWarningCollector(const ScopedWarningCollector&) = delete;
  ScopedWarningCollector& operator=(const ScopedWarningCollector&) = delete;

  std::vector<Warning> warnings() const;
  bool Has(WarningKind kind) const;

  struct State;

 private:
  std::unique_ptr<State> state_;
};

}  // namespace squeezelab

#endif  // SQUEEZELAB_WARNINGS_H_
