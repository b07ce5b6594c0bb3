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

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "manifest.hpp"
#include "termforge/acttok.hpp"
#include "termforge/common.hpp"
#include "termforge/frjt.hpp"
#include "termforge/gitsynth.hpp"
#include "termforge/maze.hpp"
#include "termforge/scaling.hpp"
#include "termforge/term.hpp"
#include "termforge/tszx.hpp"

#ifndef TERMFORGE_VERSION
#define TERMFORGE_VERSION "0.0.0"
#endif

namespace termforge::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Report text goes to --out when given, stdout otherwise.
struct Sink {
  std::ostream& out;
  std::string path;
  Manifest& manifest;
  void emit(const std::string& text) {
    if (path.empty()) {
      out << text;
    } else {
      write_file(path, text);
      manifest.add_output(path);
    }
  }
};

std::vector<std::pair<double, double>> read_points(const fs::path& path) {
  std::vector<std::pair<double, double>> pts;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    for (char& c : line) {
      if (c == ',' || c == '\t') c = ' ';
    }
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double a, b;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw DataError(path.string() + ":" + std::to_string(n) + ": expected two numbers");
    }
    pts.emplace_back(a, b);
  }
  return pts;
}

std::vector<std::uint32_t> read_ids(const fs::path& path) {
  std::vector<std::uint32_t> ids;
  const auto text = read_file(path);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\n' || text[i] == '\t' || text[i] == '\r') {
      ++i;
      continue;
    }
    std::uint32_t v = 0;
    const auto [p, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc()) throw DataError(path.string() + ": bad token id at byte " + std::to_string(i));
    ids.push_back(v);
    i = static_cast<std::size_t>(p - text.data());
  }
  return ids;
}

term::Geometry geometry(int w, int h) {
  if (w < 1 || h < 1 || w > 0xffff || h > 0xffff) throw InvalidArgument("width and height must be in 1..65535");
  return {w, h};
}

/// Encodes the frames produced by replaying `actions`.
std::string encode_replay(const std::vector<term::Action>& actions, term::Geometry g, tszx::Options opts) {
  term::Session s(g);
  tszx::Encoder enc(g.width, g.height, opts);
  enc.add_frame(s.frame());
  for (const auto& a : actions) {
    s.apply(a);
    enc.add_action(a);
    enc.add_frame(s.frame());
  }
  return enc.finish();
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : real_out_(out), err_(err), app_("termforge: terminal stream datasets, codecs and scaling tools", "termforge") {
    app_.set_version_flag("--version", TERMFORGE_VERSION);
    app_.require_subcommand(1);
    app_.option_defaults()->always_capture_default();
    build_frjt();
    build_maze();
    build_term();
    build_synth();
    build_diffbench();
    build_tszx();
    build_tok();
    build_scaling();
    build_rerun();
  }

  int run(const std::vector<std::string>& args) { return run(args, args, false); }

 private:
  /// `recorded` is the argv written to the manifest; `expanded` is set once
  /// config-file values have been spliced into `args`.
  int run(const std::vector<std::string>& args, const std::vector<std::string>& recorded, bool expanded) {
    std::vector<std::string> storage{"termforge"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
      app_.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      return app_.exit(e, real_out_, err_) == 0 ? kExitOk : kExitUsage;
    }
    if (!action_) {
      err_ << "error: incomplete command\n" << app_.help();
      return kExitUsage;
    }
    try {
      if (!config_path_.empty() && !expanded) {
        Cli again(real_out_, err_);
        again.write_manifest_ = write_manifest_;
        const int code = again.run(expand_config(args), recorded, true);
        manifest_ = again.manifest_;
        return code;
      }
      manifest_.tool = std::string("termforge ") + TERMFORGE_VERSION;
      manifest_.argv = recorded;
      manifest_.subcommand = leaf_name_;
      if (!config_path_.empty()) manifest_.add_input(config_path_);
      record_config();
      action_();
      flush();
      if (write_manifest_) {
        if (!manifest_arg_.empty()) {
          write_file(manifest_arg_, manifest_.serialize());
        } else if (!manifest_out_.empty()) {
          write_file(manifest_path(manifest_out_), manifest_.serialize());
        } else {
          err_ << "# manifest\n" << manifest_.serialize();
        }
      }
      return kExitOk;
    } catch (const InvalidArgument& e) {
      flush();
      err_ << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const DataError& e) {
      flush();
      err_ << "data error: " << e.what() << '\n';
      return kExitData;
    } catch (const AssertionFailure& e) {
      flush();
      err_ << "assertion failed: " << e.what() << '\n';
      return kExitAssertion;
    } catch (const std::exception& e) {
      flush();
      err_ << "error: " << e.what() << '\n';
      return kExitOther;
    }
  }

  /// Forwards captured report text; its digest is the "<stdout>" output.
  void flush() {
    const auto text = out_.str();
    out_.str("");
    if (text.empty()) return;
    real_out_ << text;
    manifest_.outputs["<stdout>"] = sha256_hex(text);
  }

  /// Splices flat `key = value` lines from the config file in front of the
  /// leaf's own arguments, so explicit flags still win. Section headers and
  /// comments are ignored; unknown keys are errors.
  std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    const auto depth = static_cast<std::size_t>(std::count(leaf_name_.begin(), leaf_name_.end(), ' ') + 1);
    std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(depth));
    std::istringstream in(read_file(config_path_));
    std::string line;
    std::size_t n = 0;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    while (std::getline(in, line)) {
      ++n;
      line = trim(line);
      if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
      const auto eq = line.find('=');
      const auto where = config_path_ + ":" + std::to_string(n);
      if (eq == std::string::npos) throw InvalidArgument(where + ": expected key = value");
      auto key = trim(line.substr(0, eq));
      auto value = trim(line.substr(eq + 1));
      if (key.starts_with("--")) key = key.substr(2);
      if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
      } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
        value = value.substr(1, value.size() - 2);
        value.erase(std::remove(value.begin(), value.end(), ' '), value.end());
      }
      const CLI::Option* o = leaf_->get_option_no_throw("--" + key);
      if (o == nullptr || key == "config") throw InvalidArgument(where + ": unknown key '" + key + "'");
      if (o->count() > 0) continue;  // the command line wins
      if (o->get_expected_min() == 0) {
        if (value == "true" || value == "1") {
          out.push_back("--" + key);
        } else if (value != "false" && value != "0") {
          throw InvalidArgument(where + ": '" + key + "' takes true or false");
        }
      } else {
        out.push_back("--" + key);
        out.push_back(value);
      }
    }
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(depth), args.end());
    return out;
  }

  /// Registers a leaf command; `fn` runs after a successful parse.
  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc, std::function<void()> fn) {
    auto* sub = parent->add_subcommand(name, desc);
    sub->add_option("--config", config_path_, "Flat key = value file of option defaults")->check(CLI::ExistingFile);
    sub->add_option("--manifest", manifest_arg_, "Manifest path (default: <out>.manifest, or stderr)");
    const std::string full = parent == &app_ ? name : parent->get_name() + " " + name;
    sub->callback([this, sub, full, fn] {
      leaf_ = sub;
      leaf_name_ = full;
      action_ = fn;
    });
    return sub;
  }

  CLI::App* group(const std::string& name, const std::string& desc) {
    auto* g = app_.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  }

  void add_seed(CLI::App* sub) { sub->add_option("--seed", seed_, "Root seed; module seeds are derived from it"); }

  std::uint64_t derived(std::string_view stream) {
    const auto s = derive_seed(seed_, stream, 0);
    manifest_.seeds.emplace_back("root", std::to_string(seed_));
    manifest_.seeds.emplace_back(std::string(stream), std::to_string(s));
    return s;
  }

  void record_config() {
    for (const CLI::Option* o : leaf_->get_options()) {
      const auto name = o->get_single_name();
      if (name == "help" || name == "config" || name == "manifest" || name.empty()) continue;
      std::string value;
      if (o->count() > 0) {
        for (const auto& r : o->results()) value += (value.empty() ? "" : ",") + r;
      } else {
        value = o->get_default_str();
        if (value.empty() && o->get_expected_min() == 0) value = "false";
      }
      manifest_.config.emplace_back(name, value);
    }
  }

  void set_out(const std::string& path) { manifest_out_ = path; }

  // frjt ------------------------------------------------------------------------

  void build_frjt() {
    auto* g = group("frjt", "Forward-referencing jump programs");
    auto* gen = leaf(g, "gen", "Generate a labelled dataset", [this] {
      frjt::DatasetOptions o;
      o.max_depth = frjt_.max_depth;
      o.per_depth = frjt_.per_depth;
      o.seed = derived("frjt");
      const auto summary = frjt::emit_dataset(o, out_path_);
      manifest_.add_output(out_path_);
      manifest_.add_output(out_path_ + ".stats");
      set_out(out_path_);
      auto& r = manifest_.results;
      r.emplace_back("examples", std::to_string(summary.total.examples));
      r.emplace_back("a_fraction", num(summary.total.a_fraction()));
      r.emplace_back("mean_coverage", num(summary.total.mean_coverage()));
      r.emplace_back("flipped", std::to_string(summary.total.flipped));
      for (const auto& w : summary.warnings) r.emplace_back("warning", w);
      for (const auto& [k, v] : r) {
        if (k != "warning") out_ << k << '=' << v << '\n';
      }
      for (const auto& w : summary.warnings) err_ << "warning: " << w << '\n';
    });
    gen->add_option("--max-depth", frjt_.max_depth, "Largest program depth")->check(CLI::Range(1u, 4096u));
    gen->add_option("--per-depth", frjt_.per_depth, "Programs per depth")->check(CLI::Range(1u, 100000000u));
    add_seed(gen);
    gen->add_option("--out", out_path_, "Dataset path")->required();
  }

  // maze ------------------------------------------------------------------------

  void build_maze() {
    auto* g = group("maze", "Maze navigation trajectories");
    auto* gen = leaf(g, "gen", "Generate trajectories", [this] {
      maze::DatasetOptions o;
      o.variant = maze_.variant == "withheld" ? maze::Variant::Withheld : maze::Variant::Unwithheld;
      o.p = maze_.p;
      o.target_depth = maze_.depth;
      o.count = maze_.count;
      o.length = maze_.length;
      o.maze_seed = derived("maze/layout");
      o.seed = derive_seed(seed_, "maze/records", 0);
      manifest_.seeds.emplace_back("maze/records", std::to_string(o.seed));
      maze::emit_dataset(o, out_path_);
      manifest_.add_output(out_path_);
      manifest_.add_output(out_path_ + ".maze");
      set_out(out_path_);
      manifest_.results.emplace_back("records", std::to_string(o.count));
      out_ << "records=" << o.count << '\n';
    });
    gen->add_option("--variant", maze_.variant, "withheld or unwithheld")
        ->check(CLI::IsMember({"withheld", "unwithheld"}));
    gen->add_option("--p", maze_.p, "Feedback withholding probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--depth", maze_.depth, "Withheld steps per record (or length when unwithheld)");
    gen->add_option("--count", maze_.count, "Records");
    gen->add_option("--length", maze_.length, "Steps per record (0: derived from depth and p)");
    add_seed(gen);
    gen->add_option("--out", out_path_, "Dataset path")->required();
  }

  // term ------------------------------------------------------------------------

  void build_term() {
    auto* g = group("term", "Terminal emulator");
    auto* replay = leaf(g, "replay", "Replay an action log", [this] {
      const auto actions = term::split_actions(read_file(in_path_));
      manifest_.add_input(in_path_);
      term::Session s(geometry(width_, height_));
      std::vector<term::Frame> frames;
      const bool dump = !dump_dir_.empty();
      if (dump) frames.push_back(s.frame());
      const auto r = term::replay(s, actions, dump ? &frames : nullptr);
      if (dump) {
        fs::create_directories(dump_dir_);
        for (std::size_t i = 0; i < frames.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "frame_%06zu.txt", i);
          write_file(fs::path(dump_dir_) / name, frames[i].to_text());
        }
        manifest_.add_output(dump_dir_);
        set_out(dump_dir_);
      }
      std::string report = "actions=" + std::to_string(r.actions) + "\nfiles=" + std::to_string(s.vfs().size()) +
                           "\ncommits=" + std::to_string(s.commits()) + '\n';
      Sink{out_, out_path_, manifest_}.emit(report);
      if (!out_path_.empty()) set_out(out_path_);
      manifest_.results.emplace_back("actions_per_second", num(r.actions_per_second));
      err_ << "actions_per_second=" << num(r.actions_per_second) << '\n';
    });
    replay->add_option("--actions", in_path_, "NUL-framed action log")->required()->check(CLI::ExistingFile);
    replay->add_option("--dump-frames", dump_dir_, "Write one text file per frame into this directory");
    replay->add_option("--width", width_, "Terminal columns");
    replay->add_option("--height", height_, "Terminal rows");
    replay->add_option("--out", out_path_, "Report path (stdout if omitted)");

    auto* bench = leaf(g, "bench", "Replay a synthetic workload and report throughput", [this] {
      const auto actions = term::synthetic_workload(count_, derived("term/bench"));
      term::Session s(geometry(width_, height_));
      const auto r = term::replay(s, actions);
      // Timings vary between runs, so they stay out of the report and its digest.
      Sink{out_, out_path_, manifest_}.emit("actions=" + std::to_string(r.actions) + '\n');
      if (!out_path_.empty()) set_out(out_path_);
      manifest_.results.emplace_back("seconds", num(r.seconds));
      manifest_.results.emplace_back("actions_per_second", num(r.actions_per_second));
      err_ << "seconds=" << num(r.seconds) << "\nactions_per_second=" << num(r.actions_per_second) << '\n';
    });
    bench->add_option("--count", count_, "Actions to replay");
    bench->add_option("--width", width_, "Terminal columns");
    bench->add_option("--height", height_, "Terminal rows");
    add_seed(bench);
    bench->add_option("--out", out_path_, "Report path (stdout if omitted)");
  }

  // synth / diffbench -----------------------------------------------------------

  void build_synth() {
    auto* synth = leaf(&app_, "synth", "Replay a git history into a frame stream", [this] {
      gitsynth::SynthOptions o;
      o.geometry = geometry(width_, height_);
      o.max_commits = max_commits_;
      o.codec.stage = zlib_ ? tszx::OuterStage::Zlib : tszx::OuterStage::None;
      gitsynth::GitCliReader reader(repo_);
      const auto commits = reader.first_parent_commits();
      manifest_.inputs[repo_] = "git:" + (commits.empty() ? std::string("empty") : commits.back());
      const auto r = gitsynth::synthesize_repo(repo_, out_path_, o);
      manifest_.add_output(out_path_);
      manifest_.add_output(out_path_ + ".actions");
      set_out(out_path_);
      const auto rep = tszx::compression_report(r.stream);
      out_ << "commits=" << r.commits << "\nfile_edits=" << r.file_edits << "\nframes=" << r.frames
           << "\nactions=" << r.actions.size() << "\nskipped=" << r.skipped.size() << "\nbytes=" << r.stream.size()
           << "\nratio=" << num(rep.ratio) << '\n';
      for (const auto& s : r.skipped) err_ << "skipped " << s << '\n';
    });
    synth->add_option("--repo", repo_, "Git repository")->required()->check(CLI::ExistingDirectory);
    synth->add_option("--out", out_path_, "Output .tszx path")->required();
    synth->add_option("--max-commits", max_commits_, "Stop after this many first-parent commits (0: all)");
    synth->add_flag("--zlib", zlib_, "Apply the zlib outer stage");
    synth->add_option("--width", width_, "Terminal columns");
    synth->add_option("--height", height_, "Terminal rows");
  }

  void build_diffbench() {
    auto* db = leaf(&app_, "diffbench", "Emit a diff-inflate case for one file", [this] {
      gitsynth::GitCliReader reader(repo_);
      const auto commits = reader.first_parent_commits();
      manifest_.inputs[repo_] = "git:" + (commits.empty() ? std::string("empty") : commits.back());
      const auto c = gitsynth::diff_inflate_case(reader, file_, n_, gitsynth::parse_context(context_));
      gitsynth::write_case(c, out_path_);
      manifest_.add_output(out_path_);
      set_out(out_path_);
      out_ << "patches=" << c.patches.size() << "\ncontext=" << gitsynth::to_string(c.context) << '\n';
    });
    db->add_option("--repo", repo_, "Git repository")->required()->check(CLI::ExistingDirectory);
    db->add_option("--file", file_, "Path inside the repository")->required();
    db->add_option("--n", n_, "Number of patches")->check(CLI::Range(1u, 1000000u));
    db->add_option("--context", context_, "full, u1 or u0")->check(CLI::IsMember({"full", "u1", "u0"}));
    db->add_option("--out", out_path_, "Output directory")->required();
  }

  // tszx ------------------------------------------------------------------------

  void build_tszx() {
    auto* g = group("tszx", "Frame stream codec");
    auto* enc = leaf(g, "encode", "Encode raw frames or an action log", [this] {
      const tszx::Options o{zlib_ ? tszx::OuterStage::Zlib : tszx::OuterStage::None};
      std::string bytes;
      if (!in_path_.empty() == !actions_path_.empty()) throw InvalidArgument("give exactly one of --in and --actions");
      if (!in_path_.empty()) {
        manifest_.add_input(in_path_);
        bytes = tszx::encode(tszx::read_raw(read_file(in_path_)), o);
      } else {
        manifest_.add_input(actions_path_);
        bytes = encode_replay(term::split_actions(read_file(actions_path_)), geometry(width_, height_), o);
      }
      write_file(out_path_, bytes);
      manifest_.add_output(out_path_);
      set_out(out_path_);
      out_ << tszx::format_report(tszx::compression_report(bytes));
    });
    enc->add_option("--in", in_path_, "Raw frame dump (TFRM)")->check(CLI::ExistingFile);
    enc->add_option("--actions", actions_path_, "NUL-framed action log to replay")->check(CLI::ExistingFile);
    enc->add_option("--width", width_, "Terminal columns for --actions");
    enc->add_option("--height", height_, "Terminal rows for --actions");
    enc->add_flag("--zlib", zlib_, "Apply the zlib outer stage");
    enc->add_option("--out", out_path_, "Output .tszx path")->required();

    auto* dec = leaf(g, "decode", "Decode to a raw frame dump", [this] {
      manifest_.add_input(in_path_);
      const auto s = tszx::decode(read_file(in_path_));
      write_file(out_path_, tszx::write_raw(s));
      manifest_.add_output(out_path_);
      set_out(out_path_);
      out_ << "frames=" << s.frames.size() << "\nactions=" << s.actions.size() << '\n';
    });
    dec->add_option("--in", in_path_, "Input .tszx")->required()->check(CLI::ExistingFile);
    dec->add_option("--out", out_path_, "Raw frame dump path")->required();

    auto* ins = leaf(g, "inspect", "Print header fields and token statistics", [this] {
      manifest_.add_input(in_path_);
      Sink{out_, out_path_, manifest_}.emit(tszx::format_report(tszx::compression_report(read_file(in_path_))));
      if (!out_path_.empty()) set_out(out_path_);
    });
    ins->add_option("--in", in_path_, "Input .tszx")->required()->check(CLI::ExistingFile);
    ins->add_option("--out", out_path_, "Report path (stdout if omitted)");
  }

  // tok -------------------------------------------------------------------------

  void build_tok() {
    auto* g = group("tok", "Action text tokenizer");
    auto* train = leaf(g, "train", "Build a vocabulary", [this] {
      manifest_.add_input(in_path_);
      auto corpus = read_file(in_path_);
      if (corpus_format_ == "actions") corpus = acttok::action_text(term::split_actions(corpus));
      const auto v = acttok::train(corpus, vocab_size_);
      write_file(out_path_, v.serialize());
      manifest_.add_output(out_path_);
      set_out(out_path_);
      const auto ids = v.encode(corpus);
      out_ << "vocab_size=" << v.size() << "\ncorpus_bytes=" << corpus.size() << "\ntokens=" << ids.size()
           << "\ncoverage=" << num(acttok::coverage(ids)) << '\n';
    });
    train->add_option("--corpus", in_path_, "Training text")->required()->check(CLI::ExistingFile);
    train->add_option("--format", corpus_format_, "text, or actions for a NUL-framed action log")
        ->check(CLI::IsMember({"text", "actions"}));
    train->add_option("--vocab-size", vocab_size_, "Vocabulary size including the 256 byte tokens");
    train->add_option("--out", out_path_, "Vocabulary file")->required();

    auto* enc = leaf(g, "encode", "Text to token ids", [this] {
      manifest_.add_input(vocab_path_);
      manifest_.add_input(in_path_);
      const auto v = acttok::Vocab::parse(read_file(vocab_path_));
      const auto ids = v.encode(read_file(in_path_));
      std::string text;
      for (std::size_t i = 0; i < ids.size(); ++i) text += (i ? " " : "") + std::to_string(ids[i]);
      Sink{out_, out_path_, manifest_}.emit(text + '\n');
      if (!out_path_.empty()) set_out(out_path_);
    });
    enc->add_option("--vocab", vocab_path_, "Vocabulary file")->required()->check(CLI::ExistingFile);
    enc->add_option("--in", in_path_, "Input text")->required()->check(CLI::ExistingFile);
    enc->add_option("--out", out_path_, "Output ids (stdout if omitted)");

    auto* dec = leaf(g, "decode", "Token ids to text", [this] {
      manifest_.add_input(vocab_path_);
      manifest_.add_input(in_path_);
      const auto v = acttok::Vocab::parse(read_file(vocab_path_));
      const auto ids = read_ids(in_path_);
      std::string text;
      try {
        text = v.decode(ids);
      } catch (const InvalidArgument& e) {
        throw DataError(e.what());
      }
      Sink{out_, out_path_, manifest_}.emit(text);
      if (!out_path_.empty()) set_out(out_path_);
    });
    dec->add_option("--vocab", vocab_path_, "Vocabulary file")->required()->check(CLI::ExistingFile);
    dec->add_option("--in", in_path_, "Whitespace-separated ids")->required()->check(CLI::ExistingFile);
    dec->add_option("--out", out_path_, "Output text (stdout if omitted)");
  }

  // scaling ---------------------------------------------------------------------

  void build_scaling() {
    auto* g = group("scaling", "Scaling-law fits and FLOP accounting");
    auto* fit = leaf(g, "fit", "Power law loss = A * L^-alpha", [this] {
      manifest_.add_input(in_path_);
      const auto f = scaling::fit_power_law(read_points(in_path_), step_);
      Sink{out_, out_path_, manifest_}.emit("A=" + num(f.A) + "\nalpha=" + num(f.alpha) + "\nr2=" + num(f.r2) +
                                            "\nper_doubling=" + num(std::pow(2.0, -f.alpha)) + "\nstep=" + num(f.s) +
                                            '\n');
      if (!out_path_.empty()) set_out(out_path_);
    });
    fit->add_option("--points", in_path_, "Lines of 'L loss'")->required()->check(CLI::ExistingFile);
    fit->add_option("--step", step_, "Step count the points were measured at");
    fit->add_option("--out", out_path_, "Report path (stdout if omitted)");

    auto* alpha = leaf(g, "alpha", "Fit alpha(s) = alpha_inf * (1 - exp(-s / tau))", [this] {
      manifest_.add_input(in_path_);
      const auto d = scaling::fit_alpha_dynamics(read_points(in_path_));
      Sink{out_, out_path_, manifest_}.emit("alpha_inf=" + num(d.alpha_inf) + "\ntau=" + num(d.tau) +
                                            "\nrss=" + num(d.rss) + '\n');
      if (!out_path_.empty()) set_out(out_path_);
    });
    alpha->add_option("--points", in_path_, "Lines of 's alpha'")->required()->check(CLI::ExistingFile);
    alpha->add_option("--out", out_path_, "Report path (stdout if omitted)");

    auto* am = leaf(g, "amortize", "Equal wall-time crossovers between sequence lengths", [this] {
      std::vector<std::pair<double, double>> pts;
      if (in_path_.empty()) {
        for (const auto& f : scaling::reference_fits()) pts.emplace_back(f.s, f.alpha);
      } else {
        manifest_.add_input(in_path_);
        pts = read_points(in_path_);
      }
      const auto d = scaling::fit_alpha_dynamics(pts);
      auto model = scaling::reference_model(d);
      model.gamma = gamma_;
      const auto r = scaling::equal_time_curves(model, lengths_, scaling::log_grid(t_min_, t_max_, grid_));
      std::string text = "alpha_inf=" + num(d.alpha_inf) + "\ntau=" + num(d.tau) + "\ngamma=" + num(gamma_) + '\n';
      std::size_t ok = 0;
      for (const auto& c : r.crossovers) {
        text += "pair=" + num(c.L1) + "," + num(c.L2) + " first=" + (c.first ? num(*c.first) : "none") +
                " settled=" + (c.settled ? num(*c.settled) : "none") + " persistent=" +
                (c.persistent ? "yes" : "no") + '\n';
        ok += c.settled.has_value();
      }
      text += "pairs=" + std::to_string(r.crossovers.size()) + "\nsettled_pairs=" + std::to_string(ok) + '\n';
      Sink{out_, out_path_, manifest_}.emit(text);
      if (!out_path_.empty()) set_out(out_path_);
    });
    am->add_option("--points", in_path_, "Lines of 's alpha' (default: the reference fits)")
        ->check(CLI::ExistingFile);
    am->add_option("--lengths", lengths_, "Sequence lengths")->delimiter(',');
    am->add_option("--gamma", gamma_, "Steps per unit time at L = 1");
    am->add_option("--t-min", t_min_, "Grid start");
    am->add_option("--t-max", t_max_, "Grid end");
    am->add_option("--grid", grid_, "Grid points");
    am->add_option("--out", out_path_, "Report path (stdout if omitted)");

    auto* fl = leaf(g, "flops", "Forward FLOPs per component", [this] {
      const auto t = scaling::estimate_flops(flops_);
      std::string text;
      if (table_) {
        text = scaling::format_flops(t);
      } else {
        for (const auto& r : t.rows) text += "row=" + r.label + "|" + num(r.flops) + "|" + num(r.share) + '\n';
        text += "frame_head=" + num(t.frame_head) + "\nmain=" + num(t.main) + "\ntotal=" + num(t.total) +
                "\nframe_head_share=" + num(t.frame_head / t.total) + "\nmain_share=" + num(t.main / t.total) + '\n';
      }
      Sink{out_, out_path_, manifest_}.emit(text);
      if (!out_path_.empty()) set_out(out_path_);
    });
    fl->add_option("--B", flops_.B, "Batch size");
    fl->add_option("--D", flops_.D, "Model width");
    fl->add_option("--N-f", flops_.N_f, "Tokens per frame");
    fl->add_option("--P", flops_.P, "Pooling stages");
    fl->add_option("--L-t", flops_.L_t, "Transformer blocks after pooling");
    fl->add_option("--T-s", flops_.T_s, "Main sequence length");
    fl->add_option("--L-s", flops_.L_s, "Main layers");
    fl->add_option("--H", flops_.H, "Recurrent hidden size");
    fl->add_flag("--table", table_, "Aligned text table instead of key=value lines");
    fl->add_option("--out", out_path_, "Report path (stdout if omitted)");
  }

  // rerun -----------------------------------------------------------------------

  void build_rerun() {
    auto* rr = leaf(&app_, "rerun", "Re-run a manifest and compare output digests", [this] {
      write_manifest_ = false;
      const auto m = Manifest::parse(read_file(in_path_));
      std::ostringstream sink;
      Cli again(sink, err_);
      again.write_manifest_ = false;  // keep the recorded manifest intact
      const int code = again.run(m.argv);
      if (code != kExitOk) throw AssertionFailure("re-run exited with " + std::to_string(code));
      std::size_t same = 0;
      std::string diff;
      for (const auto& [path, digest] : m.outputs) {
        const auto it = again.manifest_.outputs.find(path);
        if (it != again.manifest_.outputs.end() && it->second == digest) {
          ++same;
        } else {
          diff += "\n  " + path;
        }
      }
      if (!diff.empty()) throw AssertionFailure("outputs differ from the manifest:" + diff);
      out_ << "reproduced=" << same << '\n';
    });
    rr->add_option("file", in_path_, "Manifest file to re-run")->required()->check(CLI::ExistingFile);
  }

  std::ostream& real_out_;
  std::ostringstream out_;
  std::ostream& err_;
  CLI::App app_;
  CLI::App* leaf_ = nullptr;
  std::string leaf_name_;
  std::function<void()> action_;
  Manifest manifest_;
  std::string manifest_out_, manifest_arg_, config_path_;
  bool write_manifest_ = true;

  // Option storage.
  std::uint64_t seed_ = 0;
  std::string out_path_, in_path_, actions_path_, dump_dir_, vocab_path_;
  std::string repo_, file_, context_ = "full", corpus_format_ = "text";
  int width_ = term::Frame::kDefaultWidth, height_ = term::Frame::kDefaultHeight;
  std::size_t max_commits_ = 0, n_ = 1, count_ = 1000000, vocab_size_ = 20000, grid_ = 4000;
  bool zlib_ = false, table_ = false;
  double step_ = 0, gamma_ = 1024, t_min_ = 1e-2, t_max_ = 1e6;
  std::vector<double> lengths_{2, 4, 16, 128, 512, 1024};
  scaling::FlopConfig flops_;
  struct {
    std::uint32_t max_depth = 8, per_depth = 8000;
  } frjt_;
  struct {
    std::string variant = "withheld";
    double p = 0.2;
    std::size_t depth = 32, count = 1000, length = 0;
  } maze_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace termforge::cli
