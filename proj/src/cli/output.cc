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


#include "squeezelab/cli/output.h"

#include <filesystem>
#include <fstream>
#include <system_error>

#include "squeezelab/cli/config.h"

namespace squeezelab::cli {

namespace fs = std::filesystem;

void OutputSet::Add(std::string name, std::string contents) {
  for (const auto& f : files_) {
    if (f.first == name) throw Error("output " + name + " staged twice");
  }
  files_.emplace_back(std::move(name), std::move(contents));
}

std::vector<std::string> OutputSet::Commit() const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create " + dir_ + ": " + ec.message());

  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
  };
  for (const auto& [name, contents] : files_) {
    const fs::path tmp = fs::path(dir_) / (name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::vector<std::string> written;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    const fs::path target = fs::path(dir_) / files_[i].first;
    fs::rename(temps[i], target, ec);
    if (ec) {
      cleanup();
      std::error_code ignored;
      for (const auto& w : written) fs::remove(w, ignored);
      throw IoError("cannot rename to " + target.string() + ": " + ec.message());
    }
    written.push_back(target.string());
  }
  return written;
}

std::string CsvComment(const std::string& config_hash) {
  return std::string("# ") + kToolName + " " + kToolVersion +
         " config_hash=" + config_hash + "\n";
}

}  // namespace squeezelab::cli
