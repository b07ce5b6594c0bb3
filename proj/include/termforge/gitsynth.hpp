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

// Turns git history into editor sessions: every file change becomes a plan of
// terminal actions that the emulator replays, every commit is typed into the
// dummy shell, and one frame is captured per action.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "termforge/common.hpp"
#include "termforge/diff.hpp"
#include "termforge/term.hpp"
#include "termforge/tszx.hpp"

namespace termforge::gitsynth {

// History access ----------------------------------------------------------------

struct TreeEntry {
  std::string mode;    // e.g. "100644"
  std::string object;  // blob id
  friend bool operator==(const TreeEntry&, const TreeEntry&) = default;
};
using Tree = std::map<std::string, TreeEntry>;

/// Thin read-only view of a repository.
class HistoryReader {
 public:
  virtual ~HistoryReader() = default;
  /// First-parent chain of HEAD, oldest first. Empty for a repo without commits.
  virtual std::vector<std::string> first_parent_commits() = 0;
  virtual std::string message(const std::string& commit) = 0;
  virtual Tree tree(const std::string& commit) = 0;
  virtual std::string blob(const std::string& object) = 0;
};

/// Reads through the git command line. Throws DataError if `repo` is not a
/// readable git repository.
class GitCliReader : public HistoryReader {
 public:
  explicit GitCliReader(std::filesystem::path repo);
  std::vector<std::string> first_parent_commits() override;
  std::string message(const std::string& commit) override;
  Tree tree(const std::string& commit) override;
  std::string blob(const std::string& object) override;

 private:
  std::string git(const std::string& args, bool allow_failure = false, bool* failed = nullptr) const;
  std::filesystem::path repo_;
  std::map<std::string, std::string> blob_cache_;
};

/// Regular file whose path and content can be typed into the editor.
bool replayable(const std::string& path, const TreeEntry& entry, std::string_view content);

struct FileChange {
  std::string path;
  std::optional<std::string> old_content;  // nullopt: absent or not replayable
  std::optional<std::string> new_content;  // nullopt: deleted or not replayable
};

struct CommitDelta {
  std::string commit;
  std::string message;
  std::vector<FileChange> changes;   // lexicographic by path
  std::vector<std::string> skipped;  // paths changed but not replayable
};

/// Streams first-parent deltas (at most `max_commits`, 0 = all). Renames show
/// up as a deletion plus an addition. Returns the final replayable tree.
std::map<std::string, std::string> for_each_delta(HistoryReader& reader, std::size_t max_commits,
                                                  const std::function<void(const CommitDelta&)>& visit);

// Planning ----------------------------------------------------------------------

struct CursorPos {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const CursorPos&, const CursorPos&) = default;
};

struct EditPlan {
  std::vector<term::Action> actions;
  std::vector<CursorPos> cursor;  // editor cursor after each action
};

/// Actions that take the editor from `old_content` (nullopt: file does not
/// exist yet) to `new_content` for `path`: open, mode toggle, seeks, deletes
/// and inserts from the line/char scripts, save, close. An unchanged file
/// yields just open and close.
EditPlan plan_actions(const std::string& path, const std::optional<std::string>& old_content,
                      const std::string& new_content, term::Geometry geometry = {});

/// Shell keystrokes for `git commit -m "<subject>"` using the message's first line.
std::vector<term::Action> commit_actions(std::string_view message);

// Synthesis ---------------------------------------------------------------------

class ReplayMismatch : public AssertionFailure {
 public:
  using AssertionFailure::AssertionFailure;
};

/// Human-readable first difference between two file contents, or "" if equal.
std::string first_divergence(std::string_view expected, std::string_view actual);

struct SynthOptions {
  term::Geometry geometry{};
  std::size_t max_commits = 0;  // 0 = all
  tszx::Options codec{};
};

struct SynthResult {
  std::size_t commits = 0;
  std::size_t file_edits = 0;
  std::size_t frames = 0;
  std::vector<term::Action> actions;
  std::vector<std::string> skipped;  // "commit path" of non-replayable changes
  std::string stream;                // encoded tszx bytes
  term::Vfs final_vfs;
};

/// Replays the history through a fresh session. Throws ReplayMismatch if a
/// saved file differs from its blob or the final VFS differs from the tree.
SynthResult synthesize(HistoryReader& reader, const SynthOptions& options = {});

/// Synthesizes `repo` and writes `out` (tszx) plus `out.actions` (NUL-framed).
SynthResult synthesize_repo(const std::filesystem::path& repo, const std::filesystem::path& out,
                            const SynthOptions& options = {});

// Diff-inflate cases ------------------------------------------------------------

enum class ContextLevel { Full, U1, U0 };
ContextLevel parse_context(std::string_view s);
std::string_view to_string(ContextLevel c);

struct DiffInflateCase {
  std::string path;
  ContextLevel context = ContextLevel::Full;
  std::string initial;
  std::vector<std::string> patches;
  std::string truth;
};

/// The first n+1 distinct states of `path` along first-parent history, as an
/// initial state, n unified diffs and the final state. Throws InvalidArgument
/// when the file has fewer states and DataError when it is not text.
DiffInflateCase diff_inflate_case(HistoryReader& reader, const std::string& path, std::size_t n,
                                  ContextLevel context);

/// Applies the patches in order with the built-in applier.
std::string apply_case(const DiffInflateCase& c);

/// Writes initial.txt, patch_0001.diff ... and truth.txt into `dir`.
void write_case(const DiffInflateCase& c, const std::filesystem::path& dir);

}  // namespace termforge::gitsynth
