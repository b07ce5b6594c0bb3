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

// Acceptance checks. Prints one PASS/FAIL line per criterion with the
// measured values; exits 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "fixture_repo.hpp"
#include "manifest.hpp"
#include "oracles.hpp"
#include "termforge/acttok.hpp"
#include "termforge/frjt.hpp"
#include "termforge/gitsynth.hpp"
#include "termforge/maze.hpp"
#include "termforge/scaling.hpp"
#include "termforge/term.hpp"
#include "termforge/tszx.hpp"
#include "termforge/utf8.hpp"

namespace termforge::acceptance {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs the CLI in-process and parses its key=value stdout.
std::map<std::string, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != cli::kExitOk) throw std::runtime_error("termforge exited " + std::to_string(code) + ": " + err.str());
  std::map<std::string, std::string> kv;
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing key " + key);
  return std::stod(it->second);
}

Outcome flop_table() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto kv = cli({"scaling", "flops", "--B", "512", "--D", "768", "--N-f", "7680", "--P", "2", "--L-t", "3",
                       "--T-s", "1024", "--L-s", "2", "--H", "768", "--manifest", "/dev/null"});
  const double secs = seconds_since(t0);
  const double total = num(kv, "total"), head = num(kv, "frame_head_share"), main = num(kv, "main_share");
  // Shares are printed with two decimals, so they are compared at that precision.
  const bool ok = rel(total, 2.8767e14) <= 1e-4 && std::abs(head * 100 - 93.12) < 0.005 &&
                  std::abs(main * 100 - 6.88) < 0.005 && secs < 1;
  return {ok, "total=" + fmt("%.5e", total) + " frame_head=" + fmt("%.4f%%", head * 100) +
                  " main=" + fmt("%.4f%%", main * 100) + " seconds=" + fmt("%.4f", secs)};
}

Outcome power_law(const fs::path& dir) {
  const auto pts = dir / "step4000.txt";
  write_file(pts, "2 4.69\n4 3.01\n16 1.88\n128 1.01\n512 0.71\n1024 0.61\n");
  const auto t0 = std::chrono::steady_clock::now();
  const auto kv = cli({"scaling", "fit", "--points", pts.string(), "--step", "4000", "--manifest", "/dev/null"});
  const double secs = seconds_since(t0);
  const double a = num(kv, "alpha"), A = num(kv, "A"), r2 = num(kv, "r2");
  const bool ok = std::abs(a - 0.318) <= 0.02 && std::abs(A - 4.96) <= 0.35 && r2 >= 0.98 && secs < 1;
  return {ok, "alpha=" + fmt("%.4f", a) + " A=" + fmt("%.4f", A) + " r2=" + fmt("%.4f", r2) +
                  " seconds=" + fmt("%.4f", secs)};
}

Outcome alpha_dynamics(const fs::path& dir) {
  const auto pts = dir / "alpha.txt";
  write_file(pts, "400 0.129\n650 0.196\n4000 0.318\n");
  const auto kv = cli({"scaling", "alpha", "--points", pts.string(), "--manifest", "/dev/null"});
  const double a = num(kv, "alpha_inf"), tau = num(kv, "tau");
  const bool ok = a >= 0.28 && a <= 0.34 && tau >= 570 && tau <= 870;
  return {ok, "alpha_inf=" + fmt("%.4f", a) + " tau=" + fmt("%.1f", tau)};
}

Outcome amortization() {
  const auto d = scaling::fit_alpha_dynamics({{400, 0.129}, {650, 0.196}, {4000, 0.318}});
  const auto r = scaling::equal_time_curves(scaling::reference_model(d), {2, 4, 16, 128, 512, 1024},
                                            scaling::log_grid(1e-2, 1e6, 4000));
  std::size_t ok = 0;
  double latest = 0;
  std::string bad;
  for (const auto& c : r.crossovers) {
    // Re-check dominance from the settling point to the grid end directly.
    bool holds = c.settled.has_value() && *c.settled < r.t.back();
    if (holds) {
      const auto i = std::find(r.lengths.begin(), r.lengths.end(), c.L1) - r.lengths.begin();
      const auto j = std::find(r.lengths.begin(), r.lengths.end(), c.L2) - r.lengths.begin();
      for (std::size_t k = 0; k < r.t.size(); ++k) {
        if (r.t[k] >= *c.settled && !(r.loss[j][k] < r.loss[i][k])) holds = false;
      }
      latest = std::max(latest, *c.settled);
    }
    if (holds) {
      ++ok;
    } else {
      bad += " (" + fmt("%g", c.L1) + "," + fmt("%g", c.L2) + ")";
    }
  }
  return {ok == 15 && r.crossovers.size() == 15,
          "pairs_settled=" + std::to_string(ok) + "/15 latest_settle_t=" + fmt("%.1f", latest) +
              (bad.empty() ? "" : " failing:" + bad)};
}

Outcome codec(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(2026, "acceptance/codec"));
  std::size_t identical = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = testing::random_stream(rng);
    const auto bytes = tszx::encode(s);
    if (tszx::decode(bytes) == s && tszx::encode(tszx::decode(bytes)) == bytes) ++identical;
  }
  testing::build_history_repo(dir / "codec_repo", 17, 60);
  gitsynth::GitCliReader reader(dir / "codec_repo");
  const auto res = gitsynth::synthesize(reader);  // outer stage none
  const auto rep = tszx::compression_report(res.stream);
  const double secs = seconds_since(t0);
  const bool ok = identical == 1000 && rep.stage == tszx::OuterStage::None && rep.ratio >= 100 && secs < 60;
  return {ok, "round_trips=" + std::to_string(identical) + "/1000 fixture_frames=" + std::to_string(rep.frames) +
                  " fixture_ratio=" + fmt("%.1f", rep.ratio) + "x seconds=" + fmt("%.2f", secs)};
}

/// Compares the replayed VFS with the checked-out work tree, read straight
/// from disk. Non-text files must be absent from the VFS.
std::size_t worktree_mismatches(const fs::path& repo, const term::Vfs& vfs, std::size_t* files) {
  std::size_t bad = 0, seen = 0;
  for (auto it = fs::recursive_directory_iterator(repo); it != fs::recursive_directory_iterator(); ++it) {
    if (it->path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    const auto rel = fs::relative(it->path(), repo).generic_string();
    const auto content = read_file(it->path());
    const auto v = vfs.find(rel);
    if (term::typable(content)) {
      ++seen;
      bad += v == vfs.end() || v->second != content;
    } else {
      bad += v != vfs.end();
    }
  }
  *files = seen;
  return bad + (vfs.size() != seen);
}

Outcome git_replay(const fs::path& dir) {
  struct Fixture {
    std::string name;
    std::function<void(const fs::path&)> build;
  };
  const std::vector<Fixture> fixtures{
      {"hello", [](const fs::path& p) { testing::build_hello_repo(p); }},
      {"history60", [](const fs::path& p) { testing::build_history_repo(p, 5, 60); }},
      {"history120", [](const fs::path& p) { testing::build_history_repo(p, 6, 120); }},
      {"renames", [](const fs::path& p) { testing::build_rename_repo(p, 7); }},
      {"merge", [](const fs::path& p) { testing::build_merge_repo(p, 8); }},
  };
  std::size_t mismatches = 0, commits = 0, files = 0;
  std::string detail;
  bool has_50 = false;
  for (const auto& f : fixtures) {
    const auto repo = dir / ("replay_" + f.name);
    f.build(repo);
    std::size_t n = 0, m = 0;
    try {
      const auto r = gitsynth::synthesize_repo(repo, dir / (f.name + ".tszx"));
      m = worktree_mismatches(repo, r.final_vfs, &n);
      // The emulator's own VFS after replaying the recorded actions must agree.
      term::Session s;
      term::replay(s, r.actions);
      m += s.vfs() != r.final_vfs;
      commits += r.commits;
      has_50 |= r.commits >= 50;
    } catch (const std::exception& e) {
      m = 1;
      detail += " " + f.name + ":" + e.what();
    }
    mismatches += m;
    files += n;
  }
  return {mismatches == 0 && has_50 && fixtures.size() >= 3,
          "repos=" + std::to_string(fixtures.size()) + " commits=" + std::to_string(commits) +
              " files_checked=" + std::to_string(files) + " mismatches=" + std::to_string(mismatches) + detail};
}

Outcome frjt_stats(const fs::path& dir) {
  const auto out = dir / "frjt.tsv";
  cli({"frjt", "gen", "--max-depth", "8", "--per-depth", "8000", "--seed", "0", "--out", out.string()});
  std::istringstream in(read_file(out));
  std::size_t n = 0, a = 0, agree = 0;
  double coverage = 0;
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    const auto text = frjt::serialize(frjt::parse_token_stream(line.substr(tab + 1)));
    std::vector<int> visits;
    char oracle = '?';
    try {
      oracle = testing::frjt_naive_run(text, &visits);
    } catch (const std::exception&) {
    }
    ++n;
    a += line[0] == 'A';
    agree += oracle == line[0] && oracle == frjt::to_char(frjt::interpret(frjt::parse(text)).halt);
    std::size_t hit = 0;
    for (int v : visits) hit += v > 0;
    coverage += visits.empty() ? 0 : double(hit) / double(visits.size());
  }
  const double af = n ? double(a) / double(n) : 0, cov = n ? coverage / double(n) : 0;
  const bool ok = n == 64000 && af >= 0.47 && af <= 0.53 && cov >= 0.40 && cov <= 0.60 && agree == n;
  return {ok, "examples=" + std::to_string(n) + " a_fraction=" + fmt("%.4f", af) + " mean_coverage=" +
                  fmt("%.4f", cov) + " oracle_agreement=" + std::to_string(agree) + "/" + std::to_string(n)};
}

Outcome maze_check(const fs::path& dir) {
  // Emitted datasets: exact withheld depth, steps consistent with the wall bitmap.
  std::size_t records = 0, exact = 0, consistent = 0;
  for (auto [depth, p] : std::vector<std::pair<int, double>>{{8, 0.1}, {32, 0.2}, {64, 0.2}, {64, 0.5}}) {
    const auto out = dir / ("maze_" + std::to_string(depth) + "_" + fmt("%g", p) + ".tsv");
    cli({"maze", "gen", "--variant", "withheld", "--p", fmt("%g", p), "--depth", std::to_string(depth), "--count",
         "500", "--seed", "3", "--out", out.string()});
    std::map<std::string, std::string> meta;
    std::istringstream ms(read_file(out.string() + ".maze"));
    for (std::string l; std::getline(ms, l);) meta[l.substr(0, l.find('='))] = l.substr(l.find('=') + 1);
    std::vector<std::uint32_t> rows;
    std::istringstream ws(meta.at("walls"));
    for (std::string h; ws >> h;) rows.push_back(static_cast<std::uint32_t>(std::stoul(h, nullptr, 16)));
    auto open = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < 32 && y < 32 && !((rows.at(std::size_t(y)) >> x) & 1u);
    };
    const auto comma = meta.at("start").find(',');
    const int sx = std::stoi(meta.at("start").substr(0, comma)), sy = std::stoi(meta.at("start").substr(comma + 1));

    std::istringstream in(read_file(out));
    for (std::string line; std::getline(in, line);) {
      ++records;
      std::vector<std::string> f;
      std::istringstream ls(line);
      for (std::string field; std::getline(ls, field, '\t');) f.push_back(field);
      std::vector<std::string> steps, pos;
      std::istringstream ss(f.at(1)), ps(f.at(2));
      for (std::string t; ss >> t;) steps.push_back(t);
      for (std::string t; ps >> t;) pos.push_back(t);
      int withheld = 0;
      bool good = steps.size() == pos.size();
      int x = sx, y = sy;
      for (std::size_t i = 0; good && i < steps.size(); ++i) {
        const auto colon = steps[i].find(':');
        const auto intent = steps[i].substr(0, colon), fb = steps[i].substr(colon + 1);
        const int dx = intent == "RIGHT" ? 1 : intent == "LEFT" ? -1 : 0;
        const int dy = intent == "DOWN" ? 1 : intent == "UP" ? -1 : 0;
        const bool moves = open(x + dx, y + dy);
        if (moves) {
          x += dx;
          y += dy;
        }
        withheld += fb == "WITHHELD";
        if (fb != "WITHHELD" && fb != (moves ? intent : std::string("UNCHANGED"))) good = false;
        const auto c = pos[i].find(',');
        if (std::stoi(pos[i].substr(0, c)) != x || std::stoi(pos[i].substr(c + 1)) != y) good = false;
      }
      exact += withheld == depth;
      consistent += good;
    }
  }
  // Position oracle on 10 000 simulated trajectories over 100 mazes.
  std::size_t trajectories = 0, faults = 0;
  for (std::uint64_t mz = 0; mz < 100; ++mz) {
    const auto m = maze::Maze::generate(derive_seed(4, "acceptance/maze", mz));
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto intents = maze::random_intents(64, derive_seed(mz, "acceptance/intents", i));
      faults += !testing::maze_trajectory_fault(m, intents, maze::simulate(m, intents)).empty();
      ++trajectories;
    }
  }
  const bool ok = exact == records && consistent == records && records == 2000 && trajectories == 10000 && faults == 0;
  return {ok, "records=" + std::to_string(records) + " exact_depth=" + std::to_string(exact) +
                  " bitmap_consistent=" + std::to_string(consistent) + " oracle_trajectories=" +
                  std::to_string(trajectories) + " faults=" + std::to_string(faults)};
}

std::string random_utf8(Rng& rng) {
  std::string s;
  const auto n = rng.uniform(0, 64);
  for (std::uint64_t i = 0; i < n; ++i) {
    char32_t cp;
    switch (rng.uniform(0, 3)) {
      case 0: cp = static_cast<char32_t>(rng.uniform(0, 0x7f)); break;
      case 1: cp = static_cast<char32_t>(rng.uniform(0x80, 0x7ff)); break;
      case 2: cp = static_cast<char32_t>(rng.uniform(0x800, 0xd7ff)); break;
      default: cp = static_cast<char32_t>(rng.uniform(0x10000, 0x10ffff)); break;
    }
    utf8::append(s, cp);
  }
  return s;
}

Outcome tokenizer(const fs::path& dir) {
  testing::build_history_repo(dir / "tok_repo", 101, 400);
  gitsynth::GitCliReader reader(dir / "tok_repo");
  const auto corpus = acttok::action_text(gitsynth::synthesize(reader).actions);
  const auto v = acttok::train(corpus, 20000);
  Rng rng(derive_seed(2026, "acceptance/tok"));
  std::size_t same = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = random_utf8(rng);
    same += v.decode(v.encode(s)) == s;
  }
  const auto ids = v.encode(corpus);
  const bool ok = same == 10000 && v.size() == 20000 && v.decode(ids) == corpus;
  return {ok, "round_trips=" + std::to_string(same) + "/10000 vocab_size=" + std::to_string(v.size()) +
                  " corpus_bytes=" + std::to_string(corpus.size()) + " coverage=" + fmt("%.4f", acttok::coverage(ids))};
}

Outcome throughput(const fs::path& dir) {
  // Synthetic editing workload through the CLI benchmark, then a replay of a
  // recorded git synthesis log. Both must clear the floor.
  std::ostringstream out, err;
  const int code = cli::run({"term", "bench", "--count", "1000000", "--seed", "1", "--manifest",
                             (dir / "bench.manifest").string()},
                            out, err);
  if (code != cli::kExitOk) return {false, "term bench exited " + std::to_string(code)};
  const auto bench = cli::Manifest::parse(read_file(dir / "bench.manifest"));
  double synthetic = 0;
  for (const auto& [k, v] : bench.results) {
    if (k == "actions_per_second") synthetic = std::stod(v);
  }
  testing::build_history_repo(dir / "bench_repo", 23, 120);
  gitsynth::synthesize_repo(dir / "bench_repo", dir / "bench.tszx");
  const auto actions = term::split_actions(read_file(dir / "bench.tszx.actions"));
  term::Session s;
  const auto r = term::replay(s, actions);
  const double floor = 50000;
  return {synthetic >= floor && r.actions_per_second >= floor,
          "synthetic_actions_per_second=" + fmt("%.0f", synthetic) + " git_replay_actions_per_second=" +
              fmt("%.0f", r.actions_per_second) + " (" + std::to_string(r.actions) + " actions)"};
}

}  // namespace
}  // namespace termforge::acceptance

int main() {
  using namespace termforge::acceptance;
  TempDir tmp("termforge-acceptance");
  const auto dir = tmp.path();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"flop-table", [] { return flop_table(); }},
      {"power-law-fit", [&] { return power_law(dir); }},
      {"alpha-dynamics", [&] { return alpha_dynamics(dir); }},
      {"amortization", [] { return amortization(); }},
      {"codec", [&] { return codec(dir); }},
      {"git-replay", [&] { return git_replay(dir); }},
      {"frjt-statistics", [&] { return frjt_stats(dir); }},
      {"maze", [&] { return maze_check(dir); }},
      {"tokenizer", [&] { return tokenizer(dir); }},
      {"throughput", [&] { return throughput(dir); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-16s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
