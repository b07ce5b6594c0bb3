// Copyright 2026 The termforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run manifests: one key=value text file per CLI invocation recording the
// command line, effective configuration, seeds, summary results (statistics
// and warnings) and SHA-256 digests of inputs and outputs.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace termforge::cli {

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Digest of a file, or of every regular file under a directory (relative
/// paths and digests hashed in sorted order). Throws DataError if missing.
std::string sha256_path(const std::filesystem::path& path);

struct Manifest {
  std::string tool;                                       // "termforge <version>"
  std::string subcommand;                                 // "tszx encode"
  std::vector<std::string> argv;                          // without the program name
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> seeds;
  std::vector<std::pair<std::string, std::string>> results;
  std::map<std::string, std::string> inputs;              // path -> digest
  std::map<std::string, std::string> outputs;             // path -> digest

  void add_input(const std::filesystem::path& p);
  void add_output(const std::filesystem::path& p);

  std::string serialize() const;
  /// Throws DataError on malformed text.
  static Manifest parse(std::string_view text);
};

/// Sidecar location for an output path: "<out>.manifest".
std::filesystem::path manifest_path(const std::filesystem::path& out);

/// Argument quoting used for the argv line; round-trips through split_argv.
std::string join_argv(const std::vector<std::string>& args);
std::vector<std::string> split_argv(std::string_view line);

}  // namespace termforge::cli
