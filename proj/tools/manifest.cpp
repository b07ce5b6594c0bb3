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

#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "termforge/acttok.hpp"
#include "termforge/common.hpp"

namespace termforge::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string sha256_path(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(fs::relative(e.path(), path));
    }
    std::sort(files.begin(), files.end());
    std::string listing;
    for (const auto& f : files) listing += f.generic_string() + '\t' + sha256_hex(read_file(path / f)) + '\n';
    return sha256_hex(listing);
  }
  return sha256_hex(read_file(path));
}

void Manifest::add_input(const fs::path& p) { inputs[p.generic_string()] = sha256_path(p); }
void Manifest::add_output(const fs::path& p) { outputs[p.generic_string()] = sha256_path(p); }

namespace {

// Keys and values are escaped so '=' and newlines cannot break a line.
std::string esc(std::string_view s) {
  std::string out;
  for (char c : acttok::escape(s)) {
    if (c == '=') {
      out += "\\x3d";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string Manifest::serialize() const {
  std::string out;
  auto line = [&](const std::string& k, std::string_view v) { out += esc(k) + '=' + esc(v) + '\n'; };
  line("tool", tool);
  line("subcommand", subcommand);
  line("argv", join_argv(argv));
  for (const auto& [k, v] : config) line("config." + k, v);
  for (const auto& [k, v] : seeds) line("seed." + k, v);
  for (const auto& [k, v] : results) line("result." + k, v);
  for (const auto& [k, v] : inputs) line("input." + k, v);
  for (const auto& [k, v] : outputs) line("output." + k, v);
  return out;
}

Manifest Manifest::parse(std::string_view text) {
  Manifest m;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DataError("manifest line without '='");
    std::string key, value;
    try {
      key = acttok::unescape(line.substr(0, eq));
      value = acttok::unescape(line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw DataError(std::string("manifest: ") + e.what());
    }
    auto rest = [&](std::string_view prefix) { return key.substr(prefix.size()); };
    if (key == "tool") {
      m.tool = value;
    } else if (key == "subcommand") {
      m.subcommand = value;
    } else if (key == "argv") {
      m.argv = split_argv(value);
    } else if (key.starts_with("config.")) {
      m.config.emplace_back(rest("config."), value);
    } else if (key.starts_with("seed.")) {
      m.seeds.emplace_back(rest("seed."), value);
    } else if (key.starts_with("result.")) {
      m.results.emplace_back(rest("result."), value);
    } else if (key.starts_with("input.")) {
      m.inputs[rest("input.")] = value;
    } else if (key.starts_with("output.")) {
      m.outputs[rest("output.")] = value;
    } else {
      throw DataError("unknown manifest key " + key);
    }
  }
  if (m.tool.empty() || m.argv.empty()) throw DataError("manifest lacks tool or argv");
  return m;
}

fs::path manifest_path(const fs::path& out) {
  auto p = out;
  if (!p.has_filename()) p = p.parent_path();  // "dir/" -> "dir"
  p += ".manifest";
  return p;
}

std::string join_argv(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ' ';
    if (args[i].empty()) {
      out += "\\e";
      continue;
    }
    for (char c : acttok::escape(args[i])) {
      if (c == ' ') {
        out += "\\x20";
      } else {
        out += c;
      }
    }
  }
  return out;
}

std::vector<std::string> split_argv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= line.size() && !line.empty()) {
    auto sp = line.find(' ', start);
    if (sp == std::string_view::npos) sp = line.size();
    const auto tok = line.substr(start, sp - start);
    if (tok == "\\e") {
      out.emplace_back();
    } else {
      try {
        out.push_back(acttok::unescape(tok));
      } catch (const InvalidArgument& e) {
        throw DataError(std::string("manifest argv: ") + e.what());
      }
    }
    start = sp + 1;
  }
  return out;
}

}  // namespace termforge::cli
