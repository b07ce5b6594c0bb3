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

// Myers O(ND) differencing with the linear-space middle-snake split, plus the
// line/character edit scripts and unified diffs built on top of it.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termforge::diff {

/// A maximal changed region: old[old_start, old_start+old_len) is replaced by
/// new[new_start, new_start+new_len). Regions between hunks are equal.
struct Hunk {
  std::size_t old_start = 0;
  std::size_t old_len = 0;
  std::size_t new_start = 0;
  std::size_t new_len = 0;
  friend bool operator==(const Hunk&, const Hunk&) = default;
};

/// Shortest edit script between two symbol sequences as ordered hunks.
std::vector<Hunk> myers(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);
std::vector<Hunk> myers(std::u32string_view a, std::u32string_view b);

/// Splits at '\n' into n+1 pieces; the separators are implied, so
/// join(split(t)) == t and "" yields one empty piece.
std::vector<std::string_view> split_pieces(std::string_view text);
std::string join_pieces(std::span<const std::string> pieces);

struct LineEdit {
  std::size_t at = 0;      // piece index in the old text
  std::size_t remove = 0;  // pieces removed starting at `at`
  std::vector<std::string> insert;
  friend bool operator==(const LineEdit&, const LineEdit&) = default;
};

/// Minimal line-level script (LCS semantics) over the piece model.
std::vector<LineEdit> diff_lines(std::string_view old_text, std::string_view new_text);
std::string apply_lines(std::string_view old_text, std::span<const LineEdit> script);

struct CharEdit {
  std::size_t at = 0;
  std::size_t remove = 0;
  std::u32string insert;
  friend bool operator==(const CharEdit&, const CharEdit&) = default;
};

/// Character script confined to one line. Throws InvalidArgument if either
/// input contains '\n'.
std::vector<CharEdit> diff_chars(std::u32string_view old_line, std::u32string_view new_line);
std::u32string apply_chars(std::u32string_view old_line, std::span<const CharEdit> script);

// Unified diffs ---------------------------------------------------------------

inline constexpr std::size_t kFullContext = std::numeric_limits<std::size_t>::max();

/// Unified diff in git's line model (lines keep their terminators; a missing
/// final newline is flagged with "\ No newline at end of file"). `context` is
/// the number of context lines, kFullContext for the whole file. Empty when
/// the texts are equal.
std::string unified_diff(std::string_view old_text, std::string_view new_text, std::size_t context,
                         std::string_view path = "file");

/// Applies a unified diff produced by unified_diff (or git/GNU diff with the
/// same conventions). Throws DataError when the patch does not match.
std::string apply_unified(std::string_view old_text, std::string_view patch);

/// Number of context (' ') lines in a unified diff.
std::size_t context_line_count(std::string_view patch);

}  // namespace termforge::diff
