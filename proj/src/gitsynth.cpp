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

#include "termforge/gitsynth.hpp"

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "termforge/utf8.hpp"

namespace termforge::gitsynth {

namespace fs = std::filesystem;
using term::Action;
using term::ActionKind;

// History access ----------------------------------------------------------------

namespace {

std::string shell_quote(std::string_view s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

/// Runs a shell command and returns stdout; `status` receives the exit code.
std::string run(const std::string& command, int& status) {
  FILE* p = popen(command.c_str(), "r");
  if (!p) throw DataError("cannot run: " + command);
  std::string out;
  std::array<char, 65536> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int raw = pclose(p);
  status = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  return out;
}

bool is_hex_id(std::string_view s) {
  if (s.size() < 40) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

GitCliReader::GitCliReader(fs::path repo) : repo_(std::move(repo)) {
  bool failed = false;
  git("rev-parse --git-dir", true, &failed);
  if (failed) throw DataError("not a readable git repository: " + repo_.string());
}

std::string GitCliReader::git(const std::string& args, bool allow_failure, bool* failed) const {
  int status = 0;
  auto out = run("git -C " + shell_quote(repo_.string()) + " -c core.quotepath=off " + args + " 2>/dev/null", status);
  if (failed) *failed = status != 0;
  if (status != 0 && !allow_failure) throw DataError("git " + args + " failed in " + repo_.string());
  return out;
}

std::vector<std::string> GitCliReader::first_parent_commits() {
  bool failed = false;
  git("rev-parse -q --verify HEAD^{commit}", true, &failed);
  if (failed) return {};  // no commits yet
  const auto out = git("rev-list --first-parent --reverse HEAD");
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start < out.size()) {
    auto nl = out.find('\n', start);
    if (nl == std::string::npos) nl = out.size();
    const auto id = out.substr(start, nl - start);
    if (!is_hex_id(id)) throw DataError("unexpected rev-list output");
    ids.push_back(id);
    start = nl + 1;
  }
  return ids;
}

std::string GitCliReader::message(const std::string& commit) {
  if (!is_hex_id(commit)) throw InvalidArgument("bad commit id");
  return git("log -1 --format=%B " + commit);
}

Tree GitCliReader::tree(const std::string& commit) {
  if (!is_hex_id(commit)) throw InvalidArgument("bad commit id");
  const auto out = git("ls-tree -r -z --full-tree " + commit);
  Tree t;
  std::size_t start = 0;
  while (start < out.size()) {
    auto end = out.find('\0', start);
    if (end == std::string::npos) end = out.size();
    const std::string_view rec(out.data() + start, end - start);
    start = end + 1;
    // "<mode> <type> <object>\t<path>"
    const auto s1 = rec.find(' ');
    const auto s2 = rec.find(' ', s1 + 1);
    const auto tab = rec.find('\t', s2 + 1);
    if (s1 == std::string_view::npos || s2 == std::string_view::npos || tab == std::string_view::npos) {
      throw DataError("unexpected ls-tree output");
    }
    t[std::string(rec.substr(tab + 1))] = {std::string(rec.substr(0, s1)), std::string(rec.substr(s2 + 1, tab - s2 - 1))};
  }
  return t;
}

std::string GitCliReader::blob(const std::string& object) {
  if (!is_hex_id(object)) throw InvalidArgument("bad object id");
  if (auto it = blob_cache_.find(object); it != blob_cache_.end()) return it->second;
  auto content = git("cat-file blob " + object);
  if (blob_cache_.size() > 4096) blob_cache_.clear();
  blob_cache_[object] = content;
  return content;
}

bool replayable(const std::string& path, const TreeEntry& entry, std::string_view content) {
  if (entry.mode != "100644" && entry.mode != "100755") return false;
  if (path.empty() || !term::typable(path)) return false;
  for (unsigned char c : path) {
    if (c < 0x20) return false;
  }
  return term::typable(content);
}

std::map<std::string, std::string> for_each_delta(HistoryReader& reader, std::size_t max_commits,
                                                  const std::function<void(const CommitDelta&)>& visit) {
  auto commits = reader.first_parent_commits();
  if (max_commits && commits.size() > max_commits) commits.resize(max_commits);
  Tree prev_tree;
  std::map<std::string, std::string> text;  // replayable files of the previous commit
  for (const auto& id : commits) {
    Tree tree = reader.tree(id);
    CommitDelta d;
    d.commit = id;
    d.message = reader.message(id);
    std::map<std::string, std::string> next_text;
    // Carry unchanged entries over without re-reading blobs.
    for (const auto& [path, entry] : tree) {
      auto old = prev_tree.find(path);
      if (old != prev_tree.end() && old->second == entry) {
        if (auto t = text.find(path); t != text.end()) next_text.emplace(path, t->second);
        continue;
      }
      std::string content = reader.blob(entry.object);
      if (replayable(path, entry, content)) {
        next_text.emplace(path, std::move(content));
      } else {
        d.skipped.push_back(path);
      }
    }
    // Merge the two sorted path sets into changes.
    auto a = text.begin();
    auto b = next_text.begin();
    while (a != text.end() || b != next_text.end()) {
      if (b == next_text.end() || (a != text.end() && a->first < b->first)) {
        d.changes.push_back({a->first, a->second, std::nullopt});
        ++a;
      } else if (a == text.end() || b->first < a->first) {
        d.changes.push_back({b->first, std::nullopt, b->second});
        ++b;
      } else {
        if (a->second != b->second) d.changes.push_back({a->first, a->second, b->second});
        ++a;
        ++b;
      }
    }
    visit(d);
    prev_tree = std::move(tree);
    text = std::move(next_text);
  }
  return text;
}

// Planning ----------------------------------------------------------------------

namespace {

/// Emits actions while mirroring them on a scratch editor.
class Planner {
 public:
  Planner(term::Editor editor, EditPlan& plan) : ed_(std::move(editor)), plan_(plan) {}

  term::Editor& editor() { return ed_; }

  void key(ActionKind k) {
    switch (k) {
      case ActionKind::CursorUp: ed_.up(); break;
      case ActionKind::CursorDown: ed_.down(); break;
      case ActionKind::CursorLeft: ed_.left(); break;
      case ActionKind::CursorRight: ed_.right(); break;
      case ActionKind::LineHome: ed_.home(); break;
      case ActionKind::LineEnd: ed_.end(); break;
      case ActionKind::PageUp: ed_.page_up(); break;
      case ActionKind::PageDown: ed_.page_down(); break;
      case ActionKind::DeleteBackward: ed_.backspace(); break;
      case ActionKind::Newline: ed_.newline(); break;
      case ActionKind::ModeToggle:
        ed_.set_mode(ed_.mode() == term::Mode::Insert ? term::Mode::Normal : term::Mode::Insert);
        break;
      default: break;
    }
    record(Action::key(k));
  }

  void record(Action a) {
    plan_.actions.push_back(std::move(a));
    plan_.cursor.push_back({ed_.row(), ed_.col()});
  }

  void type(std::u32string_view text) {
    for (char32_t cp : text) {
      ed_.insert(cp);
      record(Action::insert(cp));
    }
  }

  void backspace(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) key(ActionKind::DeleteBackward);
  }

  void repeat(ActionKind k, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) key(k);
  }

  /// Moves the cursor to (row, col): pages and arrows vertically, then the
  /// cheapest of arrows, Home+arrows or End+arrows horizontally.
  void seek(std::size_t row, std::size_t col) {
    const auto page = static_cast<std::size_t>(ed_.pane_rows());
    while (ed_.row() != row) {
      const bool down = row > ed_.row();
      const std::size_t dist = down ? row - ed_.row() : ed_.row() - row;
      if (dist >= page) {
        key(down ? ActionKind::PageDown : ActionKind::PageUp);
      } else {
        key(down ? ActionKind::CursorDown : ActionKind::CursorUp);
      }
    }
    const std::size_t len = ed_.lines()[row].size();
    if (col > len) throw AssertionFailure("planner seek past end of line");
    const std::size_t c = ed_.col();
    const std::size_t arrows = c > col ? c - col : col - c;
    const std::size_t via_home = 1 + col;
    const std::size_t via_end = 1 + (len - col);
    if (arrows <= via_home && arrows <= via_end) {
      repeat(c > col ? ActionKind::CursorLeft : ActionKind::CursorRight, arrows);
    } else if (via_home <= via_end) {
      key(ActionKind::LineHome);
      repeat(ActionKind::CursorRight, col);
    } else {
      key(ActionKind::LineEnd);
      repeat(ActionKind::CursorLeft, len - col);
    }
  }

 private:
  term::Editor ed_;
  EditPlan& plan_;
};

std::u32string decode_text(std::string_view s) {
  auto d = utf8::decode(s);
  if (!d) throw DataError("file content is not valid UTF-8");
  return *d;
}

}  // namespace

EditPlan plan_actions(const std::string& path, const std::optional<std::string>& old_content,
                      const std::string& new_content, term::Geometry geometry) {
  if (!term::typable(new_content) || (old_content && !term::typable(*old_content))) {
    throw InvalidArgument("plan_actions needs typable text for " + path);
  }
  EditPlan plan;
  Planner p(term::Session::editor_for(geometry), plan);
  const std::string old_text = old_content.value_or("");
  p.editor().load(decode_text(old_text));
  p.record(Action::open(path));

  if (old_text != new_content) {
    p.key(ActionKind::ModeToggle);
    const auto old_pieces = diff::split_pieces(old_text);
    std::ptrdiff_t delta = 0;  // buffer row = old piece index + delta
    for (const auto& e : diff::diff_lines(old_text, new_content)) {
      const std::size_t base = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.at) + delta);
      const std::size_t paired = std::min(e.remove, e.insert.size());

      for (std::size_t i = 0; i < paired; ++i) {
        const auto before = decode_text(old_pieces[e.at + i]);
        const auto after = decode_text(e.insert[i]);
        std::ptrdiff_t shift = 0;
        for (const auto& ce : diff::diff_chars(before, after)) {
          const auto at = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(ce.at) + shift);
          p.seek(base + i, at + ce.remove);
          p.backspace(ce.remove);
          p.type(ce.insert);
          shift += static_cast<std::ptrdiff_t>(ce.insert.size()) - static_cast<std::ptrdiff_t>(ce.remove);
        }
      }

      const std::size_t row = base + paired;
      if (e.remove > paired) {
        const std::size_t m = e.remove - paired;
        const auto& lines = p.editor().lines();
        std::size_t chars = 0;
        for (std::size_t k = 0; k < m; ++k) chars += lines[row + k].size();
        if (row + m < lines.size()) {
          // Join from the start of the first surviving line.
          p.seek(row + m, 0);
        } else {
          // Deleting through the end also removes the newline before `row`.
          if (row == 0) throw AssertionFailure("planner cannot delete every piece");
          p.seek(row + m - 1, lines[row + m - 1].size());
        }
        p.backspace(chars + m);
      } else if (e.insert.size() > paired) {
        const auto& lines = p.editor().lines();
        if (row < lines.size()) {
          p.seek(row, 0);
          for (std::size_t k = paired; k < e.insert.size(); ++k) {
            p.type(decode_text(e.insert[k]));
            p.key(ActionKind::Newline);
          }
        } else {
          p.seek(row - 1, lines[row - 1].size());
          for (std::size_t k = paired; k < e.insert.size(); ++k) {
            p.key(ActionKind::Newline);
            p.type(decode_text(e.insert[k]));
          }
        }
      }
      delta += static_cast<std::ptrdiff_t>(e.insert.size()) - static_cast<std::ptrdiff_t>(e.remove);
    }
    if (p.editor().text_utf8() != new_content) {
      throw AssertionFailure("planner produced different content for " + path + ": " +
                             first_divergence(new_content, p.editor().text_utf8()));
    }
  }
  if (old_text != new_content || !old_content) p.record(Action::key(ActionKind::Save));
  p.record(Action::key(ActionKind::Close));
  return plan;
}

std::vector<Action> commit_actions(std::string_view message) {
  const auto subject = message.substr(0, message.find('\n'));
  std::vector<Action> out{Action::key(ActionKind::ShellToggle)};
  std::u32string cmd = U"git commit -m \"";
  if (auto d = utf8::decode(subject)) {
    for (char32_t cp : *d) {
      if (cp >= 0x20 && cp != 0x7f) cmd += cp;
    }
  }
  cmd += U'"';
  for (char32_t cp : cmd) out.push_back(Action::insert(cp));
  out.push_back(Action::key(ActionKind::Newline));
  out.push_back(Action::key(ActionKind::ShellToggle));
  return out;
}

// Synthesis ---------------------------------------------------------------------

std::string first_divergence(std::string_view expected, std::string_view actual) {
  std::size_t i = 0;
  const std::size_t n = std::min(expected.size(), actual.size());
  while (i < n && expected[i] == actual[i]) ++i;
  if (i == expected.size() && i == actual.size()) return {};
  std::size_t line = 1;
  for (std::size_t k = 0; k < i; ++k) line += expected[k] == '\n';
  auto excerpt = [&](std::string_view s) {
    if (i >= s.size()) return std::string("<end of file>");
    auto e = s.substr(i, 24);
    std::string out = "\"";
    for (char c : e) {
      if (c == '\n') {
        out += "\\n";
      } else {
        out += c;
      }
    }
    return out + "\"";
  };
  return "byte " + std::to_string(i) + " (line " + std::to_string(line) + "): expected " + excerpt(expected) +
         ", got " + excerpt(actual);
}

SynthResult synthesize(HistoryReader& reader, const SynthOptions& options) {
  SynthResult result;
  term::Session session(options.geometry);
  tszx::Encoder encoder(options.geometry.width, options.geometry.height, options.codec);

  auto step = [&](const Action& a) {
    if (result.actions.empty()) {
      encoder.add_frame(session.frame());
      ++result.frames;
    }
    session.apply(a);
    encoder.add_action(a);
    encoder.add_frame(session.frame());
    ++result.frames;
    result.actions.push_back(a);
  };

  const auto final_text = for_each_delta(reader, options.max_commits, [&](const CommitDelta& d) {
    for (const auto& path : d.skipped) result.skipped.push_back(d.commit.substr(0, 12) + " " + path);
    for (const auto& ch : d.changes) {
      if (!ch.new_content) {
        step(Action::remove(ch.path));
        if (session.vfs().contains(ch.path)) {
          throw ReplayMismatch("commit " + d.commit + ": " + ch.path + " still present after removal");
        }
        continue;
      }
      const auto plan = plan_actions(ch.path, ch.old_content, *ch.new_content, options.geometry);
      for (const auto& a : plan.actions) step(a);
      ++result.file_edits;
      const auto it = session.vfs().find(ch.path);
      const std::string got = it == session.vfs().end() ? std::string() : it->second;
      if (it == session.vfs().end() || got != *ch.new_content) {
        throw ReplayMismatch("commit " + d.commit + ": " + ch.path + " differs from its blob at " +
                             first_divergence(*ch.new_content, got));
      }
    }
    for (const auto& a : commit_actions(d.message)) step(a);
    ++result.commits;
  });

  // End-state check against the tree as read from the repository.
  const auto& vfs = session.vfs();
  std::string report;
  for (const auto& [path, content] : final_text) {
    auto it = vfs.find(path);
    if (it == vfs.end()) {
      report += "\n  missing " + path;
    } else if (it->second != content) {
      report += "\n  " + path + ": " + first_divergence(content, it->second);
    }
  }
  for (const auto& [path, content] : vfs) {
    if (!final_text.contains(path)) report += "\n  unexpected " + path;
  }
  if (!report.empty()) throw ReplayMismatch("final VFS differs from the git tree:" + report);

  result.final_vfs = vfs;
  result.stream = encoder.finish();
  return result;
}

SynthResult synthesize_repo(const fs::path& repo, const fs::path& out, const SynthOptions& options) {
  GitCliReader reader(repo);
  auto result = synthesize(reader, options);
  write_file(out, result.stream);
  auto actions_path = out;
  actions_path += ".actions";
  write_file(actions_path, term::join_actions(result.actions));
  return result;
}

// Diff-inflate cases ------------------------------------------------------------

ContextLevel parse_context(std::string_view s) {
  if (s == "full") return ContextLevel::Full;
  if (s == "u1") return ContextLevel::U1;
  if (s == "u0") return ContextLevel::U0;
  throw InvalidArgument("context must be full, u1 or u0");
}

std::string_view to_string(ContextLevel c) {
  switch (c) {
    case ContextLevel::Full: return "full";
    case ContextLevel::U1: return "u1";
    case ContextLevel::U0: return "u0";
  }
  return "full";
}

DiffInflateCase diff_inflate_case(HistoryReader& reader, const std::string& path, std::size_t n,
                                  ContextLevel context) {
  if (n == 0) throw InvalidArgument("need at least one patch");
  std::vector<std::string> states;
  for (const auto& id : reader.first_parent_commits()) {
    const auto tree = reader.tree(id);
    auto it = tree.find(path);
    if (it == tree.end()) continue;
    auto content = reader.blob(it->second.object);
    if (!states.empty() && states.back() == content) continue;
    if (!term::typable(content)) throw DataError(path + " is not a text file");
    states.push_back(std::move(content));
    if (states.size() == n + 1) break;
  }
  if (states.size() < n + 1) {
    throw InvalidArgument(path + " has " + std::to_string(states.size()) + " states; " +
                          std::to_string(n + 1) + " needed");
  }
  const std::size_t ctx = context == ContextLevel::Full ? diff::kFullContext : context == ContextLevel::U1 ? 1 : 0;
  DiffInflateCase c;
  c.path = path;
  c.context = context;
  c.initial = states.front();
  c.truth = states.back();
  for (std::size_t i = 1; i < states.size(); ++i) {
    c.patches.push_back(diff::unified_diff(states[i - 1], states[i], ctx, path));
  }
  if (apply_case(c) != c.truth) throw AssertionFailure("diff-inflate patches do not reproduce " + path);
  return c;
}

std::string apply_case(const DiffInflateCase& c) {
  std::string text = c.initial;
  for (const auto& p : c.patches) text = diff::apply_unified(text, p);
  return text;
}

void write_case(const DiffInflateCase& c, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "initial.txt", c.initial);
  for (std::size_t i = 0; i < c.patches.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "patch_%04zu.diff", i + 1);
    write_file(dir / name, c.patches[i]);
  }
  write_file(dir / "truth.txt", c.truth);
}

}  // namespace termforge::gitsynth
