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

// Character frame-buffer terminal hosting a file browser, a modal text
// editor and a one-line dummy shell over an in-memory file system. The
// terminal is driven by Actions (single characters or ESC-prefixed control
// groups) and exposes the resulting frame after every action.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "termforge/common.hpp"

namespace termforge::term {

// Cells and frames ------------------------------------------------------------

/// 8-bit style: bits 0-2 foreground, 3-5 background, 6 bold, 7 inverse.
struct Style {
  std::uint8_t fg = 0;
  std::uint8_t bg = 0;
  bool bold = false;
  bool inverse = false;

  constexpr std::uint8_t pack() const {
    return static_cast<std::uint8_t>((fg & 7) | ((bg & 7) << 3) | (bold ? 0x40 : 0) |
                                     (inverse ? 0x80 : 0));
  }
  static constexpr Style unpack(std::uint8_t b) {
    return {static_cast<std::uint8_t>(b & 7), static_cast<std::uint8_t>((b >> 3) & 7),
            (b & 0x40) != 0, (b & 0x80) != 0};
  }
};

struct Cell {
  char32_t cp = U' ';
  std::uint8_t style = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

inline constexpr Cell kBlank{};

class Frame {
 public:
  static constexpr int kDefaultWidth = 160;
  static constexpr int kDefaultHeight = 48;

  /// Blank frame. Throws InvalidArgument unless 1 <= width, height <= 65535.
  Frame(int width = kDefaultWidth, int height = kDefaultHeight);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  Cell& at(int x, int y) { return cells_[std::size_t(y) * width_ + x]; }
  const Cell& at(int x, int y) const { return cells_[std::size_t(y) * width_ + x]; }
  std::span<Cell> cells() { return cells_; }
  std::span<const Cell> cells() const { return cells_; }
  std::span<Cell> row(int y) { return {cells_.data() + std::size_t(y) * width_, std::size_t(width_)}; }

  /// Rows as UTF-8 text, styles dropped. Debug aid.
  std::string to_text() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_;
  int height_;
  std::vector<Cell> cells_;
};

// Actions ---------------------------------------------------------------------

enum class ActionKind : std::uint8_t {
  Insert,          // one printable codepoint
  Newline,         // "\n"
  DeleteBackward,  // DEL (0x7f)
  CursorUp,
  CursorDown,
  CursorRight,
  CursorLeft,
  LineHome,
  LineEnd,
  PageUp,
  PageDown,
  ModeToggle,
  Save,
  Close,
  OpenPath,    // path payload
  RemovePath,  // path payload
  TreeUp,
  TreeDown,
  TreeEnter,
  ShellToggle,
};

namespace keys {
inline constexpr std::string_view kCursorUp = "\x1b[A";
inline constexpr std::string_view kCursorDown = "\x1b[B";
inline constexpr std::string_view kCursorRight = "\x1b[C";
inline constexpr std::string_view kCursorLeft = "\x1b[D";
inline constexpr std::string_view kLineHome = "\x1b[H";
inline constexpr std::string_view kLineEnd = "\x1b[F";
inline constexpr std::string_view kPageUp = "\x1b[5~";
inline constexpr std::string_view kPageDown = "\x1b[6~";
inline constexpr std::string_view kModeToggle = "\x1b[2~";
inline constexpr std::string_view kTreeUp = "\x1b[1;3A";
inline constexpr std::string_view kTreeDown = "\x1b[1;3B";
inline constexpr std::string_view kTreeEnter = "\x1b[1;3C";
inline constexpr std::string_view kSave = "\x1b]save";
inline constexpr std::string_view kClose = "\x1b]close";
inline constexpr std::string_view kShellToggle = "\x1b]shell";
inline constexpr std::string_view kOpenPrefix = "\x1b]open;";
inline constexpr std::string_view kRemovePrefix = "\x1b]rm;";
inline constexpr std::string_view kDeleteBackward = "\x7f";
inline constexpr std::string_view kNewline = "\n";
}  // namespace keys

/// Raw action payload: UTF-8 for one codepoint, or an ESC-prefixed group.
struct Action {
  std::string payload;

  static Action key(ActionKind kind);
  static Action insert(char32_t cp);
  static Action open(std::string_view path);
  static Action remove(std::string_view path);

  friend bool operator==(const Action&, const Action&) = default;
};

struct ParsedAction {
  ActionKind kind;
  char32_t cp = 0;   // Insert
  std::string path;  // OpenPath, RemovePath
};

class UnsupportedAction : public DataError {
 public:
  using DataError::DataError;
};

/// Classifies a payload. Throws UnsupportedAction for empty payloads, unknown
/// ESC groups, invalid UTF-8, more than one codepoint, or NUL/ESC/DEL used
/// as text.
ParsedAction parse_action(std::string_view payload);

/// True when every codepoint of `text` can be typed as an Insert/Newline
/// action (valid UTF-8 without NUL, ESC or DEL).
bool typable(std::string_view text);

/// Action log framing shared with the stream codec: each payload followed by NUL.
std::string join_actions(std::span<const Action> actions);
std::vector<Action> split_actions(std::string_view bytes);

// Editor ----------------------------------------------------------------------

enum class Mode : std::uint8_t { Normal, Insert };

/// Buffer, cursor and viewport of the text editor. Knows its pane size so the
/// scroll state is a pure function of the operations applied.
class Editor {
 public:
  Editor(int pane_rows = 46, int pane_cols = 127);

  void load(std::u32string_view text);
  std::u32string text() const;
  std::string text_utf8() const;

  const std::vector<std::u32string>& lines() const { return lines_; }
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }
  std::size_t top() const { return top_; }
  std::size_t left_col() const { return left_; }
  Mode mode() const { return mode_; }
  int pane_rows() const { return pane_rows_; }
  int gutter_width() const;
  int text_cols() const;

  void set_mode(Mode m) { mode_ = m; }
  void insert(char32_t cp);
  void newline();
  void backspace();
  void up();
  void down();
  void left();
  void right();
  void home();
  void end();
  void page_up();
  void page_down();
  /// Moves the viewport; the cursor is pulled into view if needed.
  void scroll_to(std::size_t top);

 private:
  void clamp_col();
  void follow_cursor();

  std::vector<std::u32string> lines_{std::u32string{}};
  std::size_t row_ = 0;
  std::size_t col_ = 0;
  std::size_t top_ = 0;
  std::size_t left_ = 0;
  Mode mode_ = Mode::Normal;
  int pane_rows_;
  int pane_cols_;
};

// Session ---------------------------------------------------------------------

using Vfs = std::map<std::string, std::string>;

struct Geometry {
  int width = Frame::kDefaultWidth;
  int height = Frame::kDefaultHeight;
};

enum class Focus : std::uint8_t { Editor, Shell };

struct TreeEntry {
  std::string path;  // full path; directories end without '/'
  int depth = 0;
  bool directory = false;
};

/// Terminal session. apply() mutates state and updates the frame buffer
/// incrementally; render() redraws from scratch and is the reference.
class Session {
 public:
  /// Throws InvalidArgument for geometries below 16x3 and DataError for VFS
  /// content that is not typable text.
  explicit Session(Geometry geometry = {}, Vfs vfs = {});

  void apply(const Action& action);
  void apply(const ParsedAction& action);

  const Frame& frame() const { return frame_; }
  const Vfs& vfs() const { return vfs_; }
  const Editor& editor() const { return editor_; }
  /// Mutable editor for viewport manipulation in tests and debugging; the
  /// next apply() repaints everything.
  Editor& editor_mut() {
    full_dirty_ = true;
    return editor_;
  }
  const std::optional<std::string>& open_path() const { return open_path_; }
  const std::vector<TreeEntry>& tree() const { return tree_; }
  std::optional<std::size_t> tree_highlight() const { return highlight_; }
  Focus focus() const { return focus_; }
  const std::string& shell_output() const { return shell_output_; }
  std::size_t commits() const { return commits_; }
  Geometry geometry() const { return geometry_; }

  /// Editor with the pane size a session of this geometry uses, so planners
  /// can simulate cursor motion exactly.
  static Editor editor_for(Geometry geometry);

  /// Layout shared by renderer and planner.
  int tree_width() const;
  int pane_rows() const { return geometry_.height - 2; }
  int editor_x() const { return tree_width() + 1; }
  int editor_cols() const { return geometry_.width - editor_x(); }

  /// Paints everything into `frame` (must match the geometry).
  void paint(Frame& frame) const;

 private:
  void rebuild_tree();
  void select_path(const std::string& path);
  void run_shell();
  void open(const std::string& path);
  void close();
  void flush();
  bool apply_shell(const ParsedAction& a);
  bool apply_editor(const ParsedAction& a);

  void paint_tree(Frame& f) const;
  void paint_editor_row(Frame& f, int screen_row) const;
  void paint_status(Frame& f) const;
  void paint_shell(Frame& f) const;

  Geometry geometry_;
  Vfs vfs_;
  Editor editor_;
  std::optional<std::string> open_path_;
  std::vector<TreeEntry> tree_;
  std::optional<std::size_t> highlight_;
  std::size_t tree_top_ = 0;
  Focus focus_ = Focus::Editor;
  std::u32string shell_input_;
  std::string shell_output_;
  std::size_t commits_ = 0;

  Frame frame_;
  bool full_dirty_ = true;
  bool tree_dirty_ = false;
  std::vector<int> dirty_rows_;
};

Frame render(const Session& session);

/// Applies `actions` to a fresh session, optionally collecting every frame.
struct ReplayResult {
  std::size_t actions = 0;
  double seconds = 0;
  double actions_per_second = 0;
};
ReplayResult replay(Session& session, std::span<const Action> actions,
                    std::vector<Frame>* frames = nullptr);

/// Synthetic editing workload for the throughput benchmark: opens a file and
/// types code-like text with occasional navigation and deletes.
std::vector<Action> synthetic_workload(std::size_t count, std::uint64_t seed);

}  // namespace termforge::term
