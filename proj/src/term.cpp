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

#include "termforge/term.hpp"

#include <algorithm>
#include <chrono>

#include "termforge/utf8.hpp"

namespace termforge::term {

// Frame -------------------------------------------------------------------------

Frame::Frame(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1 || width > 0xffff || height > 0xffff) {
    throw InvalidArgument("frame geometry must be within 1..65535, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  cells_.assign(std::size_t(width) * std::size_t(height), kBlank);
}

std::string Frame::to_text() const {
  std::string out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) utf8::append(out, at(x, y).cp);
    out += '\n';
  }
  return out;
}

// Actions -----------------------------------------------------------------------

namespace {

struct KeyName {
  std::string_view seq;
  ActionKind kind;
};

constexpr KeyName kKeys[] = {
    {keys::kCursorUp, ActionKind::CursorUp},     {keys::kCursorDown, ActionKind::CursorDown},
    {keys::kCursorRight, ActionKind::CursorRight}, {keys::kCursorLeft, ActionKind::CursorLeft},
    {keys::kLineHome, ActionKind::LineHome},     {keys::kLineEnd, ActionKind::LineEnd},
    {keys::kPageUp, ActionKind::PageUp},         {keys::kPageDown, ActionKind::PageDown},
    {keys::kModeToggle, ActionKind::ModeToggle}, {keys::kTreeUp, ActionKind::TreeUp},
    {keys::kTreeDown, ActionKind::TreeDown},     {keys::kTreeEnter, ActionKind::TreeEnter},
    {keys::kSave, ActionKind::Save},             {keys::kClose, ActionKind::Close},
    {keys::kShellToggle, ActionKind::ShellToggle},
    {keys::kDeleteBackward, ActionKind::DeleteBackward},
    {keys::kNewline, ActionKind::Newline},
};

std::string printable(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (c < 0x20 || c == 0x7f) {
      static constexpr char kHex[] = "0123456789abcdef";
      out += "\\x";
      out += kHex[c >> 4];
      out += kHex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

bool forbidden_text(char32_t cp) { return cp == 0 || cp == 0x1b || cp == 0x7f; }

}  // namespace

Action Action::key(ActionKind kind) {
  for (const auto& k : kKeys) {
    if (k.kind == kind) return {std::string(k.seq)};
  }
  throw InvalidArgument("action kind needs a payload");
}

Action Action::insert(char32_t cp) {
  if (forbidden_text(cp)) throw InvalidArgument("codepoint cannot be typed");
  Action a;
  utf8::append(a.payload, cp);
  return a;
}

Action Action::open(std::string_view path) { return {std::string(keys::kOpenPrefix) + std::string(path)}; }

Action Action::remove(std::string_view path) {
  return {std::string(keys::kRemovePrefix) + std::string(path)};
}

ParsedAction parse_action(std::string_view payload) {
  if (payload.empty()) throw UnsupportedAction("empty action");
  for (const auto& k : kKeys) {
    if (payload == k.seq) return {k.kind, 0, {}};
  }
  if (payload[0] == '\x1b') {
    auto with_path = [&](std::string_view prefix, ActionKind kind) -> std::optional<ParsedAction> {
      if (payload.size() <= prefix.size() || payload.substr(0, prefix.size()) != prefix) return std::nullopt;
      auto path = payload.substr(prefix.size());
      if (path.find('\0') != std::string_view::npos) return std::nullopt;
      return ParsedAction{kind, 0, std::string(path)};
    };
    if (auto a = with_path(keys::kOpenPrefix, ActionKind::OpenPath)) return *a;
    if (auto a = with_path(keys::kRemovePrefix, ActionKind::RemovePath)) return *a;
    throw UnsupportedAction("unsupported control sequence '" + printable(payload) + "'");
  }
  const auto cps = utf8::decode(payload);
  if (!cps || cps->size() != 1 || forbidden_text((*cps)[0])) {
    throw UnsupportedAction("unsupported action payload '" + printable(payload) + "'");
  }
  return {ActionKind::Insert, (*cps)[0], {}};
}

bool typable(std::string_view text) {
  const auto cps = utf8::decode(text);
  return cps && std::none_of(cps->begin(), cps->end(), forbidden_text);
}

std::string join_actions(std::span<const Action> actions) {
  std::string out;
  for (const auto& a : actions) {
    out += a.payload;
    out += '\0';
  }
  return out;
}

std::vector<Action> split_actions(std::string_view bytes) {
  std::vector<Action> out;
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto nul = bytes.find('\0', i);
    if (nul == std::string_view::npos) throw DataError("action log not NUL-terminated");
    out.push_back({std::string(bytes.substr(i, nul - i))});
    i = nul + 1;
  }
  return out;
}

// Editor ------------------------------------------------------------------------

Editor::Editor(int pane_rows, int pane_cols) : pane_rows_(pane_rows), pane_cols_(pane_cols) {
  if (pane_rows < 1 || pane_cols < 1) throw InvalidArgument("editor pane must be non-empty");
}

void Editor::load(std::u32string_view text) {
  lines_.clear();
  std::size_t start = 0;
  for (;;) {
    const auto nl = text.find(U'\n', start);
    if (nl == std::u32string_view::npos) {
      lines_.emplace_back(text.substr(start));
      break;
    }
    lines_.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  row_ = col_ = top_ = left_ = 0;
}

std::u32string Editor::text() const {
  std::u32string out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (i) out += U'\n';
    out += lines_[i];
  }
  return out;
}

std::string Editor::text_utf8() const {
  std::string out;
  for (std::size_t i = 0; i < lines_.size(); ++i) {
    if (i) out += '\n';
    for (char32_t cp : lines_[i]) utf8::append(out, cp);
  }
  return out;
}

int Editor::gutter_width() const {
  int digits = 1;
  for (auto n = lines_.size(); n >= 10; n /= 10) ++digits;
  return std::max(3, digits) + 1;
}

int Editor::text_cols() const { return std::max(1, pane_cols_ - gutter_width()); }

void Editor::clamp_col() { col_ = std::min(col_, lines_[row_].size()); }

void Editor::follow_cursor() {
  const auto rows = static_cast<std::size_t>(pane_rows_);
  if (row_ < top_) top_ = row_;
  if (row_ >= top_ + rows) top_ = row_ - rows + 1;
  const auto cols = static_cast<std::size_t>(text_cols());
  if (col_ < left_) left_ = col_;
  if (col_ >= left_ + cols) left_ = col_ - cols + 1;
}

void Editor::insert(char32_t cp) {
  lines_[row_].insert(lines_[row_].begin() + static_cast<std::ptrdiff_t>(col_), cp);
  ++col_;
  follow_cursor();
}

void Editor::newline() {
  auto tail = lines_[row_].substr(col_);
  lines_[row_].resize(col_);
  lines_.insert(lines_.begin() + static_cast<std::ptrdiff_t>(row_) + 1, std::move(tail));
  ++row_;
  col_ = 0;
  follow_cursor();
}

void Editor::backspace() {
  if (col_ > 0) {
    lines_[row_].erase(col_ - 1, 1);
    --col_;
  } else if (row_ > 0) {
    col_ = lines_[row_ - 1].size();
    lines_[row_ - 1] += lines_[row_];
    lines_.erase(lines_.begin() + static_cast<std::ptrdiff_t>(row_));
    --row_;
  }
  follow_cursor();
}

void Editor::up() {
  if (row_ > 0) --row_;
  clamp_col();
  follow_cursor();
}

void Editor::down() {
  if (row_ + 1 < lines_.size()) ++row_;
  clamp_col();
  follow_cursor();
}

void Editor::left() {
  if (col_ > 0) --col_;
  follow_cursor();
}

void Editor::right() {
  if (col_ < lines_[row_].size()) ++col_;
  follow_cursor();
}

void Editor::home() {
  col_ = 0;
  follow_cursor();
}

void Editor::end() {
  col_ = lines_[row_].size();
  follow_cursor();
}

void Editor::page_up() {
  row_ -= std::min(row_, static_cast<std::size_t>(pane_rows_));
  clamp_col();
  follow_cursor();
}

void Editor::page_down() {
  row_ = std::min(lines_.size() - 1, row_ + static_cast<std::size_t>(pane_rows_));
  clamp_col();
  follow_cursor();
}

void Editor::scroll_to(std::size_t top) {
  top_ = std::min(top, lines_.size() - 1);
  const auto rows = static_cast<std::size_t>(pane_rows_);
  if (row_ < top_) row_ = top_;
  if (row_ >= top_ + rows) row_ = top_ + rows - 1;
  clamp_col();
  follow_cursor();
}

// Session -----------------------------------------------------------------------

namespace {

constexpr std::uint8_t kGutterStyle = Style{3, 0, false, false}.pack();
constexpr std::uint8_t kDirStyle = Style{4, 0, true, false}.pack();
constexpr std::uint8_t kSeparatorStyle = Style{7, 0, false, false}.pack();
constexpr std::uint8_t kFillerStyle = Style{4, 0, false, false}.pack();
constexpr std::uint8_t kStatusStyle = Style{0, 0, false, true}.pack();

char32_t glyph(char32_t cp) {
  if (cp < 0x20) return 0x2400 + cp;  // control pictures
  return cp;
}

std::uint8_t invert(std::uint8_t style) { return style ^ 0x80; }

/// Writes ASCII/UTF-32 text starting at x, stopping at `limit`. Returns new x.
template <typename Str>
int put(Frame& f, int x, int y, int limit, const Str& text, std::uint8_t style) {
  for (auto ch : text) {
    if (x >= limit) break;
    f.at(x, y) = {glyph(static_cast<char32_t>(static_cast<std::make_unsigned_t<decltype(ch)>>(ch))), style};
    ++x;
  }
  return x;
}

void fill(Frame& f, int x, int y, int limit, std::uint8_t style) {
  for (; x < limit; ++x) f.at(x, y) = {U' ', style};
}

std::u32string widen(std::string_view s) {
  if (auto d = utf8::decode(s)) return *d;
  return std::u32string(s.begin(), s.end());
}

}  // namespace

Editor Session::editor_for(Geometry g) {
  return Editor(std::max(1, g.height - 2), std::max(1, g.width - std::min(32, g.width / 5) - 1));
}

Session::Session(Geometry geometry, Vfs vfs)
    : geometry_(geometry),
      vfs_(std::move(vfs)),
      editor_(editor_for(geometry)),
      frame_(geometry.width, geometry.height) {
  if (geometry.width < 16 || geometry.height < 3) {
    throw InvalidArgument("session geometry must be at least 16x3");
  }
  for (const auto& [path, content] : vfs_) {
    if (path.empty() || !typable(content)) throw DataError("VFS entry '" + path + "' is not text");
  }
  rebuild_tree();
  paint(frame_);
  full_dirty_ = false;
}

int Session::tree_width() const { return std::min(32, geometry_.width / 5); }

void Session::rebuild_tree() {
  tree_.clear();
  std::vector<std::string_view> prev;
  for (const auto& [path, content] : vfs_) {
    std::vector<std::string_view> parts;
    std::string_view rest = path;
    for (auto slash = rest.find('/'); slash != std::string_view::npos; slash = rest.find('/')) {
      parts.push_back(rest.substr(0, slash));
      rest.remove_prefix(slash + 1);
    }
    parts.push_back(rest);
    std::size_t common = 0;
    while (common + 1 < parts.size() && common + 1 < prev.size() && parts[common] == prev[common]) {
      ++common;
    }
    std::size_t offset = 0;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      offset += parts[k].size() + 1;
      if (k < common) continue;
      tree_.push_back({path.substr(0, offset - 1), static_cast<int>(k), true});
    }
    tree_.push_back({path, static_cast<int>(parts.size() - 1), false});
    prev = std::move(parts);
  }
  highlight_.reset();
  if (open_path_) select_path(*open_path_);
}

void Session::select_path(const std::string& path) {
  for (std::size_t i = 0; i < tree_.size(); ++i) {
    if (!tree_[i].directory && tree_[i].path == path) {
      highlight_ = i;
      break;
    }
  }
  if (highlight_) {
    const auto rows = static_cast<std::size_t>(pane_rows());
    if (*highlight_ < tree_top_) tree_top_ = *highlight_;
    if (*highlight_ >= tree_top_ + rows) tree_top_ = *highlight_ - rows + 1;
  }
}

void Session::open(const std::string& path) {
  auto it = vfs_.find(path);
  if (it != vfs_.end()) {
    editor_.load(widen(it->second));
  } else {
    editor_.load(U"");
  }
  editor_.set_mode(Mode::Normal);
  open_path_ = path;
  highlight_.reset();
  select_path(path);
}

void Session::close() {
  open_path_.reset();
  editor_.load(U"");
  editor_.set_mode(Mode::Normal);
}

void Session::run_shell() {
  const std::string cmd = utf8::encode(shell_input_);
  shell_input_.clear();
  constexpr std::string_view kCommit = "git commit -m ";
  if (cmd.rfind(kCommit, 0) == 0) {
    std::string msg = cmd.substr(kCommit.size());
    if (msg.size() >= 2 && msg.front() == '"' && msg.back() == '"') msg = msg.substr(1, msg.size() - 2);
    ++commits_;
    static constexpr char kHex[] = "0123456789abcdef";
    const auto h = fnv1a64(msg) ^ commits_;
    std::string id;
    for (int i = 0; i < 7; ++i) id += kHex[(h >> (4 * i)) & 15];
    shell_output_ = "[main " + id + "] " + msg;
  } else if (cmd.empty()) {
    shell_output_.clear();
  } else {
    shell_output_ = "sh: " + cmd.substr(0, cmd.find(' ')) + ": command not found";
  }
}

bool Session::apply_shell(const ParsedAction& a) {
  switch (a.kind) {
    case ActionKind::Insert: shell_input_ += a.cp; return true;
    case ActionKind::DeleteBackward:
      if (!shell_input_.empty()) shell_input_.pop_back();
      return true;
    case ActionKind::Newline: run_shell(); return true;
    case ActionKind::ShellToggle:
      focus_ = Focus::Editor;
      full_dirty_ = true;
      return true;
    case ActionKind::CursorUp:
    case ActionKind::CursorDown:
    case ActionKind::CursorLeft:
    case ActionKind::CursorRight:
    case ActionKind::LineHome:
    case ActionKind::LineEnd:
    case ActionKind::PageUp:
    case ActionKind::PageDown:
    case ActionKind::ModeToggle:
      return true;  // no cursor in the one-line shell
    default:
      return false;
  }
}

bool Session::apply_editor(const ParsedAction& a) {
  switch (a.kind) {
    case ActionKind::Insert:
    case ActionKind::Newline:
    case ActionKind::DeleteBackward:
    case ActionKind::CursorUp:
    case ActionKind::CursorDown:
    case ActionKind::CursorLeft:
    case ActionKind::CursorRight:
    case ActionKind::LineHome:
    case ActionKind::LineEnd:
    case ActionKind::PageUp:
    case ActionKind::PageDown:
    case ActionKind::ModeToggle:
      break;
    default:
      return false;
  }
  if (!open_path_) return true;  // nothing to edit

  const auto row0 = editor_.row(), top0 = editor_.top(), left0 = editor_.left_col();
  const auto n0 = editor_.lines().size();
  const bool insert_mode = editor_.mode() == Mode::Insert;
  switch (a.kind) {
    case ActionKind::Insert:
      if (insert_mode) editor_.insert(a.cp);
      break;
    case ActionKind::Newline:
      if (insert_mode) editor_.newline();
      break;
    case ActionKind::DeleteBackward:
      if (insert_mode) editor_.backspace();
      break;
    case ActionKind::CursorUp: editor_.up(); break;
    case ActionKind::CursorDown: editor_.down(); break;
    case ActionKind::CursorLeft: editor_.left(); break;
    case ActionKind::CursorRight: editor_.right(); break;
    case ActionKind::LineHome: editor_.home(); break;
    case ActionKind::LineEnd: editor_.end(); break;
    case ActionKind::PageUp: editor_.page_up(); break;
    case ActionKind::PageDown: editor_.page_down(); break;
    default:  // ModeToggle
      editor_.set_mode(insert_mode ? Mode::Normal : Mode::Insert);
      break;
  }
  if (editor_.top() != top0 || editor_.left_col() != left0 || editor_.lines().size() != n0) {
    full_dirty_ = true;
  } else {
    dirty_rows_.push_back(static_cast<int>(row0 - top0));
    dirty_rows_.push_back(static_cast<int>(editor_.row() - editor_.top()));
  }
  return true;
}

void Session::apply(const Action& action) { apply(parse_action(action.payload)); }

void Session::apply(const ParsedAction& a) {
  if (focus_ == Focus::Shell ? apply_shell(a) : apply_editor(a)) {
    flush();
    return;
  }
  switch (a.kind) {
    case ActionKind::Save:
      if (open_path_) {
        const bool fresh = !vfs_.contains(*open_path_);
        vfs_[*open_path_] = editor_.text_utf8();
        if (fresh) rebuild_tree();
      }
      break;
    case ActionKind::Close: close(); break;
    case ActionKind::OpenPath: open(a.path); break;
    case ActionKind::RemovePath:
      if (vfs_.erase(a.path)) {
        if (open_path_ == a.path) close();
        rebuild_tree();
      }
      break;
    case ActionKind::TreeUp:
      if (!tree_.empty()) highlight_ = highlight_ ? (*highlight_ > 0 ? *highlight_ - 1 : 0) : 0;
      break;
    case ActionKind::TreeDown:
      if (!tree_.empty()) highlight_ = highlight_ ? std::min(*highlight_ + 1, tree_.size() - 1) : 0;
      break;
    case ActionKind::TreeEnter:
      if (highlight_ && !tree_[*highlight_].directory) open(tree_[*highlight_].path);
      break;
    case ActionKind::ShellToggle: focus_ = Focus::Shell; break;
    default:
      break;
  }
  if (highlight_) {
    const auto rows = static_cast<std::size_t>(pane_rows());
    if (*highlight_ < tree_top_) tree_top_ = *highlight_;
    if (*highlight_ >= tree_top_ + rows) tree_top_ = *highlight_ - rows + 1;
  }
  full_dirty_ = true;
  flush();
}

void Session::flush() {
  if (full_dirty_) {
    paint(frame_);
    full_dirty_ = false;
  } else {
    for (int r : dirty_rows_) {
      if (r >= 0 && r < pane_rows()) paint_editor_row(frame_, r);
    }
    paint_status(frame_);
    paint_shell(frame_);
  }
  dirty_rows_.clear();
}

void Session::paint(Frame& f) const {
  paint_tree(f);
  for (int r = 0; r < pane_rows(); ++r) paint_editor_row(f, r);
  paint_status(f);
  paint_shell(f);
}

void Session::paint_tree(Frame& f) const {
  const int tw = tree_width();
  for (int r = 0; r < pane_rows(); ++r) {
    const std::size_t idx = tree_top_ + static_cast<std::size_t>(r);
    int x = 0;
    if (idx < tree_.size()) {
      const auto& e = tree_[idx];
      const bool hl = highlight_ == idx;
      std::uint8_t style = e.directory ? kDirStyle : 0;
      if (hl) style = invert(style);
      for (int k = 0; k < 2 * e.depth && x < tw; ++k) f.at(x++, r) = {U' ', 0};
      const auto slash = e.path.rfind('/');
      const std::string_view name =
          slash == std::string::npos ? std::string_view(e.path) : std::string_view(e.path).substr(slash + 1);
      x = put(f, x, r, tw, widen(name), style);
      if (e.directory) x = put(f, x, r, tw, std::string_view("/"), style);
      fill(f, x, r, tw, hl ? style : 0);
    } else {
      fill(f, 0, r, tw, 0);
    }
    f.at(tw, r) = {U'│', kSeparatorStyle};
  }
}

void Session::paint_editor_row(Frame& f, int r) const {
  const int x0 = editor_x();
  const int limit = geometry_.width;
  if (!open_path_) {
    fill(f, x0, r, limit, 0);
    return;
  }
  const auto& lines = editor_.lines();
  const std::size_t idx = editor_.top() + static_cast<std::size_t>(r);
  const int gw = editor_.gutter_width();
  int x = x0;
  if (idx >= lines.size()) {
    x = put(f, x, r, limit, std::string_view("~"), kFillerStyle);
    fill(f, x, r, limit, 0);
    return;
  }
  const std::string num = std::to_string(idx + 1);
  for (int k = static_cast<int>(num.size()); k < gw - 1 && x < limit; ++k) f.at(x++, r) = {U' ', kGutterStyle};
  x = put(f, x, r, limit, num, kGutterStyle);
  if (x < limit) f.at(x++, r) = {U' ', 0};
  const int text_x = x;
  const auto& line = lines[idx];
  const std::size_t left = editor_.left_col();
  for (std::size_t c = left; c < line.size() && x < limit; ++c) f.at(x++, r) = {glyph(line[c]), 0};
  fill(f, x, r, limit, 0);
  if (focus_ == Focus::Editor && idx == editor_.row()) {
    const auto cx = text_x + static_cast<int>(editor_.col() - left);
    if (cx >= text_x && cx < limit) f.at(cx, r).style = invert(f.at(cx, r).style);
  }
}

void Session::paint_status(Frame& f) const {
  const int y = geometry_.height - 2;
  const int w = geometry_.width;
  std::string left;
  if (focus_ == Focus::Shell) {
    left = " SHELL ";
  } else {
    left = editor_.mode() == Mode::Insert ? " INSERT " : " NORMAL ";
  }
  left += ' ';
  left += open_path_ ? *open_path_ : std::string("[no file]");
  std::string right;
  if (open_path_) {
    right = "Ln " + std::to_string(editor_.row() + 1) + ", Col " + std::to_string(editor_.col() + 1) + ' ';
  }
  int x = put(f, 0, y, w, widen(left), kStatusStyle);
  const int rx = std::max(x, w - static_cast<int>(right.size()));
  fill(f, x, y, rx, kStatusStyle);
  x = put(f, rx, y, w, right, kStatusStyle);
  fill(f, x, y, w, kStatusStyle);
}

void Session::paint_shell(Frame& f) const {
  const int y = geometry_.height - 1;
  const int w = geometry_.width;
  int x = 0;
  if (focus_ == Focus::Shell) {
    x = put(f, x, y, w, std::string_view("$ "), 0);
    // Keep the tail of long input visible.
    const std::size_t room = static_cast<std::size_t>(std::max(1, w - 3));
    const std::size_t skip = shell_input_.size() > room ? shell_input_.size() - room : 0;
    x = put(f, x, y, w, std::u32string_view(shell_input_).substr(skip), 0);
    if (x < w) f.at(x++, y) = {U' ', invert(0)};
  } else {
    x = put(f, x, y, w, widen(shell_output_), 0);
  }
  fill(f, x, y, w, 0);
}

Frame render(const Session& session) {
  Frame f(session.geometry().width, session.geometry().height);
  session.paint(f);
  return f;
}

ReplayResult replay(Session& session, std::span<const Action> actions, std::vector<Frame>* frames) {
  std::vector<ParsedAction> parsed;
  parsed.reserve(actions.size());
  for (const auto& a : actions) parsed.push_back(parse_action(a.payload));
  if (frames) frames->push_back(session.frame());
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& a : parsed) {
    session.apply(a);
    if (frames) frames->push_back(session.frame());
  }
  const auto t1 = std::chrono::steady_clock::now();
  ReplayResult r;
  r.actions = actions.size();
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  r.actions_per_second = r.seconds > 0 ? double(r.actions) / r.seconds : 0.0;
  return r;
}

std::vector<Action> synthetic_workload(std::size_t count, std::uint64_t seed) {
  static constexpr std::string_view kWords[] = {
      "int", "value", "return", "buffer", "count", "index", "const", "auto", "for", "while",
      "if", "else", "size", "data", "result", "frame", "cursor", "line", "width", "height"};
  Rng rng(seed);
  std::vector<Action> out;
  out.reserve(count);
  auto push = [&](Action a) {
    if (out.size() < count) out.push_back(std::move(a));
  };
  push(Action::open("bench/main.cc"));
  push(Action::key(ActionKind::ModeToggle));
  std::size_t line_len = 0;
  while (out.size() < count) {
    const auto roll = rng.uniform(0, 99);
    if (roll < 3) {
      push(Action::key(ActionKind::DeleteBackward));
    } else if (roll < 5) {
      push(Action::key(rng.bernoulli(0.5) ? ActionKind::CursorUp : ActionKind::CursorDown));
    } else if (roll < 7 || line_len > 60) {
      push(Action::key(ActionKind::Newline));
      line_len = 0;
    } else {
      const auto word = kWords[rng.uniform(0, std::size(kWords) - 1)];
      for (char c : word) push(Action::insert(static_cast<char32_t>(c)));
      push(Action::insert(rng.bernoulli(0.2) ? U';' : U' '));
      line_len += word.size() + 1;
    }
  }
  return out;
}

}  // namespace termforge::term
