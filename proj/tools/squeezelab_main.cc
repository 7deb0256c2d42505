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


// Command-line front end. Precedence: built-in defaults < --config file <
// flags.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "squeezelab/cli/commands.h"
#include "squeezelab/cli/config.h"

namespace {

using nlohmann::json;
using squeezelab::cli::ConfigError;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> prefix;
  std::optional<double> r;
  std::optional<int> cutoff;
  std::optional<int> cycles;
  std::optional<int> trials;
  std::vector<std::string> curves;
  bool print_config = false;
};

json BuildDocument(const Flags& f, const std::string& command) {
  json doc = f.config_path.empty() ? json::object()
                                   : squeezelab::cli::LoadJsonFile(f.config_path);
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  auto section = [&doc](const char* key) -> json& {
    json& s = doc[key];
    if (s.is_null()) s = json::object();
    if (!s.is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return s;
  };
  if (f.seed) doc["seed"] = *f.seed;
  if (f.threads) doc["threads"] = *f.threads;
  if (f.out_dir) section("output")["dir"] = *f.out_dir;
  if (f.prefix) section("output")["prefix"] = *f.prefix;
  if (f.cutoff) section("layout")["cutoff"] = *f.cutoff;
  if (f.trials) section("metrology")["trials"] = *f.trials;
  if (f.r) {
    section(command == "three-mode" ? "three_mode" : "squeeze")["r"] = *f.r;
  }
  if (f.cycles) {
    const char* key = command == "three-mode"  ? "three_mode"
                      : command == "epr-sweep" ? "epr_sweep"
                                               : "reservoir";
    section(key)["cycles"] = *f.cycles;
  }
  if (!f.curves.empty()) section("sideband")["curves"] = f.curves;
  return doc;
}

int PrintConfig(const json& doc) {
  auto config = squeezelab::cli::ParseConfig(doc);
  config.Resolve();
  config.Validate();
  std::cout << config.ToJson().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed motional state preparation, metrology and sideband fitting"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("-c,--config", f.config_path, "JSON experiment config");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--threads", f.threads, "Worker threads (1 is bit-reproducible)");
  app.add_option("-o,--out", f.out_dir, "Output directory");
  app.add_option("--prefix", f.prefix, "Output file prefix");
  app.add_option("--r", f.r, "Squeezing parameter");
  app.add_option("--cutoff", f.cutoff, "Fock cutoff per mode");
  app.add_option("--cycles", f.cycles, "Reservoir cycles");
  app.add_option("--trials", f.trials, "Monte Carlo trials per point");
  app.add_flag("--print-config", f.print_config,
               "Print the resolved config and exit");

  app.add_subcommand("prepare", "Reservoir preparation from a thermal state");
  app.add_subcommand("estimate", "Monte Carlo displacement estimation over a t grid");
  app.add_subcommand("epr-sweep", "Duan quantity against r, reservoir and ideal");
  app.add_subcommand("qfi", "Analytic and numeric quantum Fisher matrix");
  app.add_subcommand("three-mode", "Three-mode state, reservoir, Duan and gains");
  CLI::App* sideband = app.add_subcommand("sideband", "Sideband flop curves");
  sideband->require_subcommand(1);
  sideband->add_subcommand("simulate", "Synthesize flop curves");
  CLI::App* fit = sideband->add_subcommand("fit", "Fit populations to curves");
  fit->add_option("curves", f.curves, "Curve CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : squeezelab::cli::kExitConfig;
  }

  std::string command = app.get_subcommands().front()->get_name();
  if (command == "sideband") {
    command += "-" + sideband->get_subcommands().front()->get_name();
  }

  try {
    const json doc = BuildDocument(f, command);
    if (f.print_config) return PrintConfig(doc);
    const auto outcome = squeezelab::cli::RunCommand(command, doc);
    for (const auto& file : outcome.files) std::cout << file << "\n";
    if (outcome.exit_code != 0) {
      std::cerr << "squeezelab " << command << ": " << outcome.error << "\n";
    }
    return outcome.exit_code;
  } catch (const squeezelab::cli::IoError& e) {
    std::cerr << "squeezelab: " << e.what() << "\n";
    return squeezelab::cli::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "squeezelab: " << e.what() << "\n";
    return squeezelab::cli::kExitConfig;
  }
}
