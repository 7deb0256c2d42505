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


#ifndef SQUEEZELAB_CLI_COMMANDS_H_
#define SQUEEZELAB_CLI_COMMANDS_H_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "squeezelab/cli/config.h"

namespace squeezelab::cli {

enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

/// "prepare", "estimate", "epr-sweep", "qfi", "sideband-simulate",
/// "sideband-fit", "three-mode".
const std::vector<std::string>& CommandNames();

struct CommandOutcome {
  int exit_code = kExitOk;
  std::string error;  // empty on success
  std::vector<std::string> files;
  nlohmann::json report;
};

/// Parses, resolves and validates `config_doc`, runs `command` and commits
/// its CSV and JSON outputs. Never throws: failures map to exit codes 2
/// (config or malformed input), 3 (truncation, numerical failure or a fit
/// that did not converge) and 4 (I/O). Only a completed command writes
/// files; a non-converged fit writes its report and returns 3.
CommandOutcome RunCommand(const std::string& command,
                          const nlohmann::json& config_doc);

/// Runs fn(0) .. fn(count - 1) on up to `threads` threads. Rethrows the
/// first exception.
void ParallelFor(int count, int threads, const std::function<void(int)>& fn);

}  // namespace squeezelab::cli

#endif  // SQUEEZELAB_CLI_COMMANDS_H_
