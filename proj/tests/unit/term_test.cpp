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

#include <gtest/gtest.h>

#include "termforge/utf8.hpp"

namespace termforge::term {
namespace {

std::u32string row_text(const Frame& f, int y, int x0 = 0, int x1 = -1) {
  if (x1 < 0) x1 = f.width();
  std::u32string s;
  for (int x = x0; x < x1; ++x) s += f.at(x, y).cp;
  return s;
}

std::string numbered(int n) {
  std::string s;
  for (int i = 1; i <= n; ++i) s += "line " + std::to_string(i) + "\n";
  return s;
}

void type(Session& s, std::string_view text) {
  const auto cps = utf8::decode(text).value();
  for (char32_t cp : cps) {
    s.apply(cp == U'\n' ? Action::key(ActionKind::Newline) : Action::insert(cp));
  }
}

TEST(Frame, DefaultGeometry) {
  Frame f;
  EXPECT_EQ(f.width(), 160);
  EXPECT_EQ(f.height(), 48);
  EXPECT_EQ(f.size(), 7680u);
  EXPECT_EQ(f.at(5, 5), kBlank);
  EXPECT_THROW(Frame(0, 10), InvalidArgument);
  EXPECT_THROW(Frame(10, 70000), InvalidArgument);
}

TEST(Style, PacksIntoEightBits) {
  for (int b = 0; b < 256; ++b) {
    EXPECT_EQ(Style::unpack(static_cast<std::uint8_t>(b)).pack(), b);
  }
  EXPECT_EQ((Style{7, 0, false, false}.pack()), 0x07);
  EXPECT_EQ((Style{0, 7, false, false}.pack()), 0x38);
  EXPECT_EQ((Style{0, 0, true, true}.pack()), 0xc0);
}

TEST(Actions, ParseKnownAndRejectUnknown) {
  EXPECT_EQ(parse_action("a").kind, ActionKind::Insert);
  EXPECT_EQ(parse_action("é").cp, U'é');
  EXPECT_EQ(parse_action("\n").kind, ActionKind::Newline);
  EXPECT_EQ(parse_action("\x7f").kind, ActionKind::DeleteBackward);
  EXPECT_EQ(parse_action("\x1b[A").kind, ActionKind::CursorUp);
  const auto open = parse_action("\x1b]open;src/a.c");
  EXPECT_EQ(open.kind, ActionKind::OpenPath);
  EXPECT_EQ(open.path, "src/a.c");
  EXPECT_THROW(parse_action(""), UnsupportedAction);
  EXPECT_THROW(parse_action("\x1b[Z"), UnsupportedAction);
  EXPECT_THROW(parse_action("ab"), UnsupportedAction);
  EXPECT_THROW(parse_action("\xff"), UnsupportedAction);
  EXPECT_THROW(parse_action(std::string(1, '\0')), UnsupportedAction);
  EXPECT_THROW(parse_action("\x1b]open;"), UnsupportedAction);
}

TEST(Actions, JoinSplitRoundTrip) {
  std::vector<Action> a = {Action::insert(U'x'), Action::key(ActionKind::Save), Action::open("p/q"),
                           Action::insert(U'→')};
  EXPECT_EQ(split_actions(join_actions(a)), a);
  EXPECT_TRUE(split_actions("").empty());
}

TEST(Session, EmptyVfsShowsEmptyPanes) {
  Session s;
  const auto f = render(s);
  EXPECT_EQ(f, s.frame());
  for (int y = 0; y < s.pane_rows(); ++y) {
    EXPECT_EQ(row_text(f, y, 0, s.tree_width()), std::u32string(s.tree_width(), U' '));
    EXPECT_EQ(f.at(s.tree_width(), y).cp, U'│');
    EXPECT_EQ(row_text(f, y, s.editor_x()), std::u32string(s.editor_cols(), U' '));
  }
  EXPECT_NE(row_text(f, 46).find(U"[no file]"), std::u32string::npos);
}

TEST(Session, InsertAtEndOfLine26) {
  Session s({}, {{"f.txt", numbered(40)}});
  s.apply(Action::open("f.txt"));
  for (int i = 0; i < 25; ++i) s.apply(Action::key(ActionKind::CursorDown));
  s.apply(Action::key(ActionKind::LineEnd));
  s.apply(Action::key(ActionKind::ModeToggle));
  const auto col = s.editor().col();
  EXPECT_EQ(s.editor().row(), 25u);
  s.apply(Action::insert(U'a'));
  EXPECT_EQ(s.editor().col(), col + 1);
  const int x = s.editor_x() + s.editor().gutter_width() + static_cast<int>(col);
  EXPECT_EQ(s.frame().at(x, 25).cp, U'a');
  EXPECT_EQ(s.frame(), render(s));
}

TEST(Session, CursorLeftAtColumnZeroIsNoop) {
  Session s({}, {{"f.txt", "abc\n"}});
  s.apply(Action::open("f.txt"));
  const auto before = s.frame();
  s.apply(Action::key(ActionKind::CursorLeft));
  EXPECT_EQ(s.editor().col(), 0u);
  EXPECT_EQ(s.frame(), before);
}

TEST(Session, ScrolledViewLineNumbers) {
  Session s({}, {{"f.txt", numbered(100)}});
  s.apply(Action::open("f.txt"));
  s.editor_mut().scroll_to(50);
  const auto f = render(s);
  const auto row0 = row_text(f, 0, s.editor_x(), s.editor_x() + s.editor().gutter_width());
  EXPECT_EQ(row0, U" 51 ");
  EXPECT_NE(row_text(f, 0).find(U"line 51"), std::u32string::npos);
}

TEST(Session, GutterRightAligned) {
  Session s({}, {{"f.txt", numbered(12)}});
  s.apply(Action::open("f.txt"));
  const int gx = s.editor_x();
  EXPECT_EQ(row_text(s.frame(), 0, gx, gx + 4), U"  1 ");
  EXPECT_EQ(row_text(s.frame(), 11, gx, gx + 4), U" 12 ");
}

TEST(Session, OpenFileHighlightedInTree) {
  Session s({}, {{"a/b.txt", "x"}, {"c.txt", "y"}});
  s.apply(Action::open("c.txt"));
  ASSERT_TRUE(s.tree_highlight());
  EXPECT_EQ(s.tree()[*s.tree_highlight()].path, "c.txt");
  const int y = static_cast<int>(*s.tree_highlight());
  EXPECT_TRUE(Style::unpack(s.frame().at(0, y).style).inverse);
}

TEST(Session, EditSaveCoherence) {
  Session s({}, {{"f.txt", "hello\nworld"}});
  s.apply(Action::open("f.txt"));
  s.apply(Action::key(ActionKind::ModeToggle));
  s.apply(Action::key(ActionKind::LineEnd));
  type(s, ", there\nnew line ✓");
  s.apply(Action::key(ActionKind::CursorDown));
  s.apply(Action::key(ActionKind::LineHome));
  s.apply(Action::key(ActionKind::DeleteBackward));
  s.apply(Action::key(ActionKind::Save));
  EXPECT_EQ(s.vfs().at("f.txt"), "hello, there\nnew line ✓world");
  EXPECT_EQ(s.vfs().at("f.txt"), s.editor().text_utf8());
}

TEST(Session, NormalModeIgnoresTyping) {
  Session s({}, {{"f.txt", "abc"}});
  s.apply(Action::open("f.txt"));
  s.apply(Action::insert(U'z'));
  s.apply(Action::key(ActionKind::Save));
  EXPECT_EQ(s.vfs().at("f.txt"), "abc");
}

TEST(Session, NewFileAndRemove) {
  Session s;
  s.apply(Action::open("dir/new.txt"));
  s.apply(Action::key(ActionKind::ModeToggle));
  type(s, "x");
  s.apply(Action::key(ActionKind::Save));
  s.apply(Action::key(ActionKind::Close));
  EXPECT_EQ(s.vfs().at("dir/new.txt"), "x");
  EXPECT_EQ(s.tree().size(), 2u);
  s.apply(Action::remove("dir/new.txt"));
  EXPECT_TRUE(s.vfs().empty());
  EXPECT_TRUE(s.tree().empty());
}

TEST(Session, ShellCommit) {
  Session s;
  s.apply(Action::key(ActionKind::ShellToggle));
  EXPECT_EQ(s.focus(), Focus::Shell);
  type(s, "git commit -m \"Fix it\"");
  s.apply(Action::key(ActionKind::Newline));
  EXPECT_EQ(s.commits(), 1u);
  EXPECT_NE(s.shell_output().find("] Fix it"), std::string::npos);
  s.apply(Action::key(ActionKind::ShellToggle));
  EXPECT_EQ(s.focus(), Focus::Editor);
  EXPECT_EQ(s.frame(), render(s));
}

TEST(Session, TreeNavigation) {
  Session s({}, {{"a.txt", "A"}, {"b.txt", "B"}});
  s.apply(Action::key(ActionKind::TreeDown));
  s.apply(Action::key(ActionKind::TreeDown));
  s.apply(Action::key(ActionKind::TreeEnter));
  EXPECT_EQ(s.open_path(), "b.txt");
  s.apply(Action::key(ActionKind::TreeUp));
  s.apply(Action::key(ActionKind::TreeEnter));
  EXPECT_EQ(s.open_path(), "a.txt");
}

TEST(Session, GeometryValidation) {
  EXPECT_THROW(Session(Geometry{0, 48}), InvalidArgument);
  EXPECT_THROW(Session(Geometry{10, 2}), InvalidArgument);
  EXPECT_THROW(Session({}, {{"bin", std::string("\0", 1)}}), DataError);
}

// Incremental rendering must equal a full redraw after every action.
TEST(Session, IncrementalMatchesFullRedraw) {
  for (const Geometry g : {Geometry{}, Geometry{40, 10}, Geometry{16, 3}}) {
    Session s(g, {{"w.txt", numbered(30)}});
    Rng rng(g.width);
    s.apply(Action::open("w.txt"));
    static const ActionKind kinds[] = {ActionKind::CursorUp,   ActionKind::CursorDown, ActionKind::CursorLeft,
                                       ActionKind::CursorRight, ActionKind::LineHome,  ActionKind::LineEnd,
                                       ActionKind::PageUp,     ActionKind::PageDown,   ActionKind::ModeToggle,
                                       ActionKind::Newline,    ActionKind::DeleteBackward, ActionKind::Save,
                                       ActionKind::TreeDown,   ActionKind::TreeUp,     ActionKind::ShellToggle};
    for (int i = 0; i < 3000; ++i) {
      const auto roll = rng.uniform(0, 40);
      if (roll < std::size(kinds)) {
        s.apply(Action::key(kinds[roll]));
      } else {
        s.apply(Action::insert(roll % 7 == 0 ? U'λ' : static_cast<char32_t>('a' + roll % 26)));
      }
      ASSERT_EQ(s.frame(), render(s)) << "action " << i;
      ASSERT_LT(s.editor().row(), s.editor().lines().size());
      ASSERT_LE(s.editor().col(), s.editor().lines()[s.editor().row()].size());
    }
  }
}

TEST(Session, Deterministic) {
  const auto actions = synthetic_workload(5000, 3);
  Session a, b;
  replay(a, actions);
  replay(b, actions);
  EXPECT_EQ(a.frame(), b.frame());
  EXPECT_EQ(a.editor().text(), b.editor().text());
}

TEST(Replay, CollectsFrames) {
  const auto actions = synthetic_workload(100, 1);
  Session s;
  std::vector<Frame> frames;
  const auto r = replay(s, actions, &frames);
  EXPECT_EQ(r.actions, 100u);
  EXPECT_EQ(frames.size(), 101u);
}

TEST(Editor, BackspaceJoinsLines) {
  Editor e;
  e.load(U"ab\ncd");
  e.set_mode(Mode::Insert);
  e.down();
  e.backspace();
  EXPECT_EQ(e.text(), U"abcd");
  EXPECT_EQ(e.row(), 0u);
  EXPECT_EQ(e.col(), 2u);
}

TEST(Editor, VerticalMovesClampColumn) {
  Editor e;
  e.load(U"long line\nab\nanother long");
  e.end();
  e.down();
  EXPECT_EQ(e.col(), 2u);
  e.down();
  EXPECT_EQ(e.col(), 2u);
}

}  // namespace
}  // namespace termforge::term
