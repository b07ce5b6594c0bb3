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

#include "termforge/diff.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixture_repo.hpp"
#include "termforge/common.hpp"

namespace termforge::diff {
namespace {

// Quadratic LCS length, the oracle for minimality.
template <typename Seq>
std::size_t lcs(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t edit_size(const std::vector<Hunk>& hunks) {
  std::size_t n = 0;
  for (const auto& h : hunks) n += h.old_len + h.new_len;
  return n;
}

std::vector<std::uint32_t> random_seq(Rng& rng, std::size_t max_len, std::uint32_t alphabet) {
  std::vector<std::uint32_t> v(rng.uniform(0, max_len));
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform(0, alphabet - 1));
  return v;
}

std::string random_text(Rng& rng, std::size_t max_lines) {
  static const char* kLines[] = {"a", "b", "c", "int x;", "", "}", "return 0;", "// note"};
  std::string s;
  const auto n = rng.uniform(0, max_lines);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) s += '\n';
    s += kLines[rng.uniform(0, 7)];
  }
  if (rng.bernoulli(0.5)) s += '\n';
  return s;
}

TEST(Myers, MinimalAgainstLcsOracle) {
  Rng rng(1);
  for (int t = 0; t < 3000; ++t) {
    const auto a = random_seq(rng, 60, 1 + static_cast<std::uint32_t>(t % 6));
    const auto b = random_seq(rng, 60, 1 + static_cast<std::uint32_t>(t % 6));
    const auto hunks = myers(a, b);
    ASSERT_EQ(edit_size(hunks), a.size() + b.size() - 2 * lcs(a, b));
    // Hunks are ordered, disjoint and the gaps between them match.
    std::size_t i = 0, j = 0;
    for (const auto& h : hunks) {
      ASSERT_GE(h.old_start, i);
      ASSERT_EQ(h.old_start - i, h.new_start - j);
      for (; i < h.old_start; ++i, ++j) ASSERT_EQ(a[i], b[j]);
      ASSERT_GT(h.old_len + h.new_len, 0u);
      i += h.old_len;
      j += h.new_len;
    }
    ASSERT_EQ(a.size() - i, b.size() - j);
    for (; i < a.size(); ++i, ++j) ASSERT_EQ(a[i], b[j]);
  }
}

TEST(Myers, LargeInputsStayMinimal) {
  Rng rng(2);
  std::vector<std::uint32_t> a(3000);
  for (auto& x : a) x = static_cast<std::uint32_t>(rng.uniform(0, 50));
  auto b = a;
  for (int k = 0; k < 100; ++k) b[rng.uniform(0, b.size() - 1)] = 99;
  b.insert(b.begin() + 10, {7, 7, 7});
  EXPECT_EQ(edit_size(myers(a, b)), a.size() + b.size() - 2 * lcs(a, b));
}

TEST(DiffLines, Identity) { EXPECT_TRUE(diff_lines("x\ny", "x\ny").empty()); }

TEST(DiffLines, SingleInsert) {
  const auto s = diff_lines("a\nb", "a\nc\nb");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (LineEdit{1, 0, {"c"}}));
}

TEST(DiffLines, ApplyOracle) {
  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_text(rng, 30);
    const auto b = random_text(rng, 30);
    const auto s = diff_lines(a, b);
    ASSERT_EQ(apply_lines(a, s), b);
    const auto pa = split_pieces(a), pb = split_pieces(b);
    std::size_t changed = 0;
    for (const auto& e : s) changed += e.remove + e.insert.size();
    ASSERT_EQ(changed, pa.size() + pb.size() - 2 * lcs(pa, pb));
  }
}

TEST(DiffChars, Basics) {
  EXPECT_TRUE(diff_chars(U"abc", U"abc").empty());
  const auto s = diff_chars(U"abc", U"axc");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (CharEdit{1, 1, U"x"}));
  EXPECT_THROW(diff_chars(U"a\nb", U"ab"), InvalidArgument);
}

TEST(DiffChars, ApplyOracle) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    std::u32string a, b;
    for (auto n = rng.uniform(0, 40); n > 0; --n) a += static_cast<char32_t>(U'a' + rng.uniform(0, 3));
    for (auto n = rng.uniform(0, 40); n > 0; --n) b += rng.bernoulli(0.1) ? U'é' : static_cast<char32_t>(U'a' + rng.uniform(0, 3));
    ASSERT_EQ(apply_chars(a, diff_chars(a, b)), b);
  }
}

TEST(Unified, HeaderConventions) {
  EXPECT_EQ(unified_diff("a\nb\n", "a\nb\n", 3), "");
  EXPECT_EQ(unified_diff("a\nb\nc\n", "a\nB\nc\n", 1), "--- a/file\n+++ b/file\n@@ -1,3 +1,3 @@\n a\n-b\n+B\n c\n");
  EXPECT_EQ(unified_diff("a\nc\n", "a\nb\nc\n", 0), "--- a/file\n+++ b/file\n@@ -1,0 +2 @@\n+b\n");
  EXPECT_EQ(unified_diff("a", "a\n", 0), "--- a/file\n+++ b/file\n@@ -1 +1 @@\n-a\n\\ No newline at end of file\n+a\n");
}

TEST(Unified, ContextLevels) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto a = random_text(rng, 40);
    const auto b = random_text(rng, 40);
    for (std::size_t ctx : {kFullContext, std::size_t{1}, std::size_t{0}}) {
      const auto patch = unified_diff(a, b, ctx);
      ASSERT_EQ(apply_unified(a, patch), b) << patch;
      if (ctx == 0) {
        ASSERT_EQ(context_line_count(patch), 0u);
      }
    }
  }
}

TEST(Unified, RejectsMismatch) {
  const auto patch = unified_diff("a\nb\n", "a\nc\n", 1);
  EXPECT_THROW(apply_unified("x\ny\n", patch), DataError);
}

// Cross-check against git's own applier for every context level.
TEST(Unified, GitApplyAccepts) {
  testing::TempDir dir;
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_text(rng, 25);
    const auto b = random_text(rng, 25);
    for (std::size_t ctx : {kFullContext, std::size_t{1}, std::size_t{0}}) {
      const auto patch = unified_diff(a, b, ctx);
      if (patch.empty()) continue;
      std::ofstream(dir.path() / "file", std::ios::binary) << a;
      std::ofstream(dir.path() / "p.diff", std::ios::binary) << patch;
      testing::sh("cd " + testing::quote(dir.path().string()) +
                  " && git apply --unidiff-zero --unsafe-paths -p1 p.diff");
      std::ifstream in(dir.path() / "file", std::ios::binary);
      const std::string got((std::istreambuf_iterator<char>(in)), {});
      ASSERT_EQ(got, b) << patch;
    }
  }
}

}  // namespace
}  // namespace termforge::diff
