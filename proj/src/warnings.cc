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

#include "squeezelab/warnings.h"

#include <algorithm>
#include <iostream>
#include <mutex>

namespace squeezelab {

struct ScopedWarningCollector::State {
  mutable std::mutex mutex;
  std::vector<Warning> warnings;
};

namespace {

std::mutex& RegistryMutex() {
  static std::mutex mutex;
  return mutex;
}

std::vector<ScopedWarningCollector::State*>& Collectors() {
  static std::vector<ScopedWarningCollector::State*> stack;
  return stack;
}

}  // namespace

const char* WarningKindName(WarningKind kind) {
  switch (kind) {
    case WarningKind::kTruncation:
      return "truncation";
    case WarningKind::kNonConvergence:
      return "non-convergence";
    case WarningKind::kOther:
      return "other";
  }
  return "other";
}

void EmitWarning(Warning warning) {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  auto& stack = Collectors();
  if (stack.empty()) {
    std::cerr << "warning [" << WarningKindName(warning.kind)
              << "]: " << warning.message << "\n";
    return;
  }
  ScopedWarningCollector::State* top = stack.back();
  std::lock_guard<std::mutex> inner(top->mutex);
  top->warnings.push_back(std::move(warning));
}

ScopedWarningCollector::ScopedWarningCollector()
    : state_(std::make_unique<State>()) {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  Collectors().push_back(state_.get());
}

ScopedWarningCollector::~ScopedWarningCollector() {
  std::lock_guard<std::mutex> lock(RegistryMutex());
  auto& stack = Collectors();
  stack.erase(std::remove(stack.begin(), stack.end(), state_.get()),
              stack.end());
}

std::vector<Warning> ScopedWarningCollector::warnings() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->warnings;
}

bool ScopedWarningCollector::Has(WarningKind kind) const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return std::any_of(state_->warnings.begin(), state_->warnings.end(),
                     [kind](const Warning& w) { return w.kind == kind; });
}

}  // namespace squeezelab
