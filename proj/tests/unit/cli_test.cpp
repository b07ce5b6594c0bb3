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

#include "cli.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "fixture_repo.hpp"
#include "manifest.hpp"
#include "termforge/common.hpp"
#include "termforge/scaling.hpp"
#include "termforge/term.hpp"
#include "termforge/tszx.hpp"

namespace termforge::cli {
namespace {

namespace fs = std::filesystem;
using termforge::testing::TempDir;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const TempDir& t, const std::string& name) { return (t.path() / name).string(); }

TEST(Cli, HelpExitsZero) {
  for (auto args : std::vector<std::vector<std::string>>{{"--help"}, {"tszx", "encode", "--help"}}) {
    const auto r = invoke(args);
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("Usage"), std::string::npos);
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"nope"}).code, kExitUsage);
  EXPECT_EQ(invoke({"tszx"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scaling", "flops", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"maze", "gen", "--p", "2", "--out", "x"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scaling", "flops", "--N-f", "7681"}).code, kExitUsage);
}

TEST(Cli, DataErrors) {
  TempDir t;
  write_file(p(t, "junk"), "not a stream");
  const auto r = invoke({"tszx", "decode", "--in", p(t, "junk"), "--out", p(t, "x")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("bad-magic"), std::string::npos);
  EXPECT_FALSE(fs::exists(p(t, "x")));
}

TEST(Cli, TszxRoundTrip) {
  TempDir t;
  term::Session s({40, 12});
  tszx::Stream stream{40, 12, {s.frame()}, {}};
  for (const auto& a : term::synthetic_workload(300, 5)) {
    s.apply(a);
    stream.actions.push_back(a);
    stream.frames.push_back(s.frame());
  }
  write_file(p(t, "in.raw"), tszx::write_raw(stream));
  for (const char* zlib : {"", "--zlib"}) {
    std::vector<std::string> enc{"tszx", "encode", "--in", p(t, "in.raw"), "--out", p(t, "s.tszx")};
    if (*zlib) enc.push_back(zlib);
    ASSERT_EQ(invoke(enc).code, kExitOk);
    ASSERT_EQ(invoke({"tszx", "decode", "--in", p(t, "s.tszx"), "--out", p(t, "out.raw")}).code, kExitOk);
    const auto back = tszx::read_raw(read_file(p(t, "out.raw")));
    ASSERT_EQ(back.frames.size(), stream.frames.size());
    for (std::size_t i = 0; i < back.frames.size(); ++i) ASSERT_EQ(back.frames[i], stream.frames[i]) << i;
    EXPECT_EQ(read_file(p(t, "out.raw")), read_file(p(t, "in.raw")));
  }
  const auto r = invoke({"tszx", "inspect", "--in", p(t, "s.tszx")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("frames: 301"), std::string::npos);
}

TEST(Cli, ActionsEncodeMatchesRawEncode) {
  TempDir t;
  const auto actions = term::synthetic_workload(200, 9);
  write_file(p(t, "a.log"), term::join_actions(actions));
  ASSERT_EQ(invoke({"tszx", "encode", "--actions", p(t, "a.log"), "--width", "50", "--height", "10", "--out",
                    p(t, "a.tszx")})
                .code,
            kExitOk);
  const auto s = tszx::decode(read_file(p(t, "a.tszx")));
  EXPECT_EQ(s.width, 50);
  EXPECT_EQ(s.actions.size(), actions.size());
  EXPECT_EQ(invoke({"tszx", "encode", "--out", p(t, "b.tszx")}).code, kExitUsage);
}

TEST(Cli, ManifestAndRerun) {
  TempDir t;
  const auto out = p(t, "f.tsv");
  ASSERT_EQ(invoke({"frjt", "gen", "--max-depth", "3", "--per-depth", "40", "--seed", "11", "--out", out}).code,
            kExitOk);
  const auto m = Manifest::parse(read_file(out + ".manifest"));
  EXPECT_EQ(m.subcommand, "frjt gen");
  EXPECT_EQ(m.outputs.count(out), 1u);
  EXPECT_EQ(m.outputs.count(out + ".stats"), 1u);
  EXPECT_EQ(m.outputs.at(out), sha256_path(out));
  ASSERT_GE(m.seeds.size(), 2u);
  EXPECT_EQ(m.seeds[0], (std::pair<std::string, std::string>{"root", "11"}));
  EXPECT_EQ(m.seeds[1].second, std::to_string(derive_seed(11, "frjt", 0)));
  bool has_examples = false;
  for (const auto& [k, v] : m.results) has_examples |= k == "examples" && v == "120";
  EXPECT_TRUE(has_examples);

  const auto first = read_file(out);
  fs::remove(out);
  const auto r = invoke({"rerun", out + ".manifest"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_file(out), first);

  auto tampered = read_file(out + ".manifest");
  const auto at = tampered.find("output." + out + "=") + ("output." + out + "=").size();
  tampered[at] = tampered[at] == 'a' ? 'b' : 'a';
  write_file(p(t, "bad.manifest"), tampered);
  EXPECT_EQ(invoke({"rerun", p(t, "bad.manifest")}).code, kExitAssertion);
}

TEST(Cli, SameSeedSameBytes) {
  TempDir t;
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(invoke({"maze", "gen", "--count", "30", "--depth", "8", "--seed", "4", "--out", p(t, name)}).code,
              kExitOk);
  }
  EXPECT_EQ(read_file(p(t, "a")), read_file(p(t, "b")));
  EXPECT_EQ(read_file(p(t, "a.maze")), read_file(p(t, "b.maze")));
  ASSERT_EQ(invoke({"maze", "gen", "--count", "30", "--depth", "8", "--seed", "5", "--out", p(t, "c")}).code,
            kExitOk);
  EXPECT_NE(read_file(p(t, "a")), read_file(p(t, "c")));
}

TEST(Cli, StdoutReportsAreDigested) {
  TempDir t;
  const auto m = p(t, "m");
  const auto r = invoke({"scaling", "flops", "--manifest", m});
  ASSERT_EQ(r.code, kExitOk);
  const auto parsed = Manifest::parse(read_file(m));
  EXPECT_EQ(parsed.outputs.at("<stdout>"), sha256_hex(r.out));
  EXPECT_EQ(invoke({"rerun", m}).code, kExitOk);
  // Without --out or --manifest the manifest goes to stderr.
  EXPECT_NE(invoke({"scaling", "flops"}).err.find("subcommand=scaling flops"), std::string::npos);
}

TEST(Cli, ConfigFile) {
  TempDir t;
  write_file(p(t, "c.toml"), "# comment\n[scaling.flops]\nB = 1\nP = \"1\"\ntable = false\n");
  auto r = invoke({"scaling", "flops", "--config", p(t, "c.toml"), "--manifest", p(t, "m")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  scaling::FlopConfig c;
  c.B = 1;
  c.P = 1;
  char want[64];
  std::snprintf(want, sizeof want, "total=%.10g\n", scaling::estimate_flops(c).total);
  EXPECT_NE(r.out.find(want), std::string::npos) << r.out;
  const auto m = Manifest::parse(read_file(p(t, "m")));
  EXPECT_EQ(m.inputs.count(p(t, "c.toml")), 1u);
  EXPECT_EQ(invoke({"rerun", p(t, "m")}).code, kExitOk);

  // Explicit flags override the file.
  r = invoke({"scaling", "flops", "--config", p(t, "c.toml"), "--B", "2"});
  c.B = 2;
  std::snprintf(want, sizeof want, "total=%.10g\n", scaling::estimate_flops(c).total);
  EXPECT_NE(r.out.find(want), std::string::npos);

  write_file(p(t, "bad.toml"), "nonsense = 3\n");
  EXPECT_EQ(invoke({"scaling", "flops", "--config", p(t, "bad.toml")}).code, kExitUsage);
  write_file(p(t, "list.toml"), "lengths = [2, 8, 32]\n");
  r = invoke({"scaling", "amortize", "--config", p(t, "list.toml")});
  EXPECT_NE(r.out.find("pairs=3\n"), std::string::npos) << r.out;
}

TEST(Cli, FlopsTableMatchesLibrary) {
  const auto r = invoke({"scaling", "flops", "--table"});
  EXPECT_EQ(r.out, scaling::format_flops(scaling::estimate_flops({})));
}

TEST(Cli, SynthAndDiffbench) {
  TempDir t;
  termforge::testing::build_history_repo(t.path() / "repo", 7, 12);
  const auto repo = p(t, "repo");
  auto r = invoke({"synth", "--repo", repo, "--out", p(t, "s.tszx")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("commits=12\n"), std::string::npos);
  EXPECT_EQ(invoke({"rerun", p(t, "s.tszx.manifest")}).code, kExitOk);
  // Replaying the recorded actions rebuilds the same stream.
  ASSERT_EQ(invoke({"tszx", "encode", "--actions", p(t, "s.tszx.actions"), "--out", p(t, "again.tszx")}).code,
            kExitOk);
  EXPECT_EQ(read_file(p(t, "again.tszx")), read_file(p(t, "s.tszx")));

  EXPECT_EQ(invoke({"synth", "--repo", p(t, "s.tszx"), "--out", p(t, "x")}).code, kExitUsage);
  fs::create_directories(t.path() / "plain");
  EXPECT_EQ(invoke({"synth", "--repo", p(t, "plain"), "--out", p(t, "x")}).code, kExitData);
  EXPECT_EQ(invoke({"diffbench", "--repo", repo, "--file", "missing.txt", "--n", "2", "--out", p(t, "d")}).code,
            kExitUsage);
}

TEST(Cli, TokenizerRoundTrip) {
  TempDir t;
  write_file(p(t, "corpus"), "int main() { return fooBar + foo_bar; }\n");
  ASSERT_EQ(invoke({"tok", "train", "--corpus", p(t, "corpus"), "--vocab-size", "280", "--out", p(t, "v")}).code,
            kExitOk);
  write_file(p(t, "text"), "return fooBar;\n\xc3\xa9");
  ASSERT_EQ(invoke({"tok", "encode", "--vocab", p(t, "v"), "--in", p(t, "text"), "--out", p(t, "ids")}).code,
            kExitOk);
  const auto r = invoke({"tok", "decode", "--vocab", p(t, "v"), "--in", p(t, "ids")});
  EXPECT_EQ(r.out, read_file(p(t, "text")));
  write_file(p(t, "bad"), "12 x");
  EXPECT_EQ(invoke({"tok", "decode", "--vocab", p(t, "v"), "--in", p(t, "bad")}).code, kExitData);
}

TEST(Manifest, RoundTrip) {
  Manifest m;
  m.tool = "termforge 1";
  m.subcommand = "a b";
  m.argv = {"x", "with space", "", "k=v", "tab\there", "\xc3\xa9"};
  m.config = {{"seed", "3"}, {"path", "a=b\nc"}};
  m.seeds = {{"root", "3"}};
  m.results = {{"warning", "too = low"}};
  m.inputs = {{"in put", "abc"}};
  m.outputs = {{"<stdout>", "def"}};
  const auto back = Manifest::parse(m.serialize());
  EXPECT_EQ(back.tool, m.tool);
  EXPECT_EQ(back.subcommand, m.subcommand);
  EXPECT_EQ(back.argv, m.argv);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.seeds, m.seeds);
  EXPECT_EQ(back.results, m.results);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_THROW(Manifest::parse("tool=x\nno equals\n"), DataError);
  EXPECT_THROW(Manifest::parse("tool=x\nargv=a\nweird=1\n"), DataError);
  EXPECT_THROW(Manifest::parse("subcommand=x\n"), DataError);
}

TEST(Manifest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, DirectoryDigestIsOrderIndependent) {
  TempDir a, b;
  write_file(a.path() / "x", "1");
  write_file(a.path() / "y", "2");
  write_file(b.path() / "y", "2");
  write_file(b.path() / "x", "1");
  EXPECT_EQ(sha256_path(a.path()), sha256_path(b.path()));
  write_file(b.path() / "x", "3");
  EXPECT_NE(sha256_path(a.path()), sha256_path(b.path()));
  EXPECT_EQ(manifest_path("out/dir/"), fs::path("out/dir.manifest"));
}

}  // namespace
}  // namespace termforge::cli
