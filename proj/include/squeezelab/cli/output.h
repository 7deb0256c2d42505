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


#ifndef SQUEEZELAB_CLI_OUTPUT_H_
#define SQUEEZELAB_CLI_OUTPUT_H_

#include <string>
#include <utility>
#include <vector>

namespace squeezelab::cli {

/// Files staged in memory and written together by Commit(). Nothing touches
/// the file system before Commit(), so a failed command leaves no output.
class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

  /// `name` is relative to the output directory.
  void Add(std::string name, std::string contents);

  /// Writes every file to "<path>.tmp" and renames them into place. On any
  /// failure removes the temporaries and the files already renamed by this
  /// call, then throws IoError.
  std::vector<std::string> Commit() const;

  const std::string& dir() const { return dir_; }
  const std::vector<std::pair<std::string, std::string>>& files() const {
    return files_;
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

/// "# squeezelab <version> config_hash=<hash>\n"
std::string CsvComment(const std::string& config_hash);

}  // namespace squeezelab::cli

#endif  // SQUEEZELAB_CLI_OUTPUT_H_
