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

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "termforge/common.hpp"

namespace termforge::diff {

namespace {

enum class Op : std::uint8_t { Equal, Delete, Insert };

template <typename T>
class Differ {
 public:
  Differ(std::span<const T> a, std::span<const T> b) : a_(a), b_(b) {}

  std::vector<Hunk> run() {
    ops_.reserve(a_.size() + b_.size());
    compare(0, a_.size(), 0, b_.size());
    return collapse();
  }

 private:
  void emit(Op op, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) ops_.push_back(op);
  }

  void compare(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    std::size_t prefix = 0;
    while (a0 + prefix < a1 && b0 + prefix < b1 && a_[a0 + prefix] == b_[b0 + prefix]) ++prefix;
    emit(Op::Equal, prefix);
    a0 += prefix;
    b0 += prefix;
    std::size_t suffix = 0;
    while (a1 - suffix > a0 && b1 - suffix > b0 && a_[a1 - suffix - 1] == b_[b1 - suffix - 1]) ++suffix;
    a1 -= suffix;
    b1 -= suffix;

    if (a0 == a1) {
      emit(Op::Insert, b1 - b0);
    } else if (b0 == b1) {
      emit(Op::Delete, a1 - a0);
    } else {
      bisect(a0, a1, b0, b1);
    }
    emit(Op::Equal, suffix);
  }

  // Finds a point on an optimal path by running the forward and reverse
  // searches until they overlap, then solves both halves.
  void bisect(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    const auto n = static_cast<std::ptrdiff_t>(a1 - a0);
    const auto m = static_cast<std::ptrdiff_t>(b1 - b0);
    const std::ptrdiff_t max_d = (n + m + 1) / 2;
    const std::ptrdiff_t offset = max_d;
    const std::ptrdiff_t width = 2 * max_d + 2;
    fwd_.assign(static_cast<std::size_t>(width), -1);
    rev_.assign(static_cast<std::size_t>(width), -1);
    fwd_[offset + 1] = 0;
    rev_[offset + 1] = 0;
    const std::ptrdiff_t delta = n - m;
    const bool front = (delta & 1) != 0;
    std::ptrdiff_t k1start = 0, k1end = 0, k2start = 0, k2end = 0;
    auto A = [&](std::ptrdiff_t i) -> const T& { return a_[a0 + static_cast<std::size_t>(i)]; };
    auto B = [&](std::ptrdiff_t i) -> const T& { return b_[b0 + static_cast<std::size_t>(i)]; };

    for (std::ptrdiff_t d = 0; d < max_d; ++d) {
      for (std::ptrdiff_t k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const std::ptrdiff_t k1o = offset + k1;
        std::ptrdiff_t x1 = (k1 == -d || (k1 != d && fwd_[k1o - 1] < fwd_[k1o + 1])) ? fwd_[k1o + 1]
                                                                                       : fwd_[k1o - 1] + 1;
        std::ptrdiff_t y1 = x1 - k1;
        while (x1 < n && y1 < m && A(x1) == B(y1)) {
          ++x1;
          ++y1;
        }
        fwd_[k1o] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const std::ptrdiff_t k2o = offset + delta - k1;
          if (k2o >= 0 && k2o < width && rev_[k2o] != -1 && x1 >= n - rev_[k2o]) {
            split(a0, a1, b0, b1, x1, y1);
            return;
          }
        }
      }
      for (std::ptrdiff_t k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const std::ptrdiff_t k2o = offset + k2;
        std::ptrdiff_t x2 = (k2 == -d || (k2 != d && rev_[k2o - 1] < rev_[k2o + 1])) ? rev_[k2o + 1]
                                                                                       : rev_[k2o - 1] + 1;
        std::ptrdiff_t y2 = x2 - k2;
        while (x2 < n && y2 < m && A(n - x2 - 1) == B(m - y2 - 1)) {
          ++x2;
          ++y2;
        }
        rev_[k2o] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const std::ptrdiff_t k1o = offset + delta - k2;
          if (k1o >= 0 && k1o < width && fwd_[k1o] != -1) {
            const std::ptrdiff_t x1 = fwd_[k1o];
            const std::ptrdiff_t y1 = x1 - (k1o - offset);
            if (x1 >= n - x2) {
              split(a0, a1, b0, b1, x1, y1);
              return;
            }
          }
        }
      }
    }
    // Nothing in common.
    emit(Op::Delete, a1 - a0);
    emit(Op::Insert, b1 - b0);
  }

  void split(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1, std::ptrdiff_t x,
             std::ptrdiff_t y) {
    const auto xs = static_cast<std::size_t>(x);
    const auto ys = static_cast<std::size_t>(y);
    compare(a0, a0 + xs, b0, b0 + ys);
    compare(a0 + xs, a1, b0 + ys, b1);
  }

  std::vector<Hunk> collapse() const {
    std::vector<Hunk> hunks;
    std::size_t i = 0, j = 0, k = 0;
    while (k < ops_.size()) {
      if (ops_[k] == Op::Equal) {
        ++i;
        ++j;
        ++k;
        continue;
      }
      Hunk h{i, 0, j, 0};
      while (k < ops_.size() && ops_[k] != Op::Equal) {
        if (ops_[k] == Op::Delete) {
          ++h.old_len;
          ++i;
        } else {
          ++h.new_len;
          ++j;
        }
        ++k;
      }
      hunks.push_back(h);
    }
    return hunks;
  }

  std::span<const T> a_;
  std::span<const T> b_;
  std::vector<Op> ops_;
  std::vector<std::ptrdiff_t> fwd_;
  std::vector<std::ptrdiff_t> rev_;
};

/// Maps each distinct string to a dense id so lines compare as integers.
template <typename Str>
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> intern(const std::vector<Str>& a,
                                                                         const std::vector<Str>& b) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto id_of = [&](std::string_view s) {
    return ids.emplace(s, static_cast<std::uint32_t>(ids.size())).first->second;
  };
  std::vector<std::uint32_t> ia, ib;
  ia.reserve(a.size());
  ib.reserve(b.size());
  for (const auto& s : a) ia.push_back(id_of(s));
  for (const auto& s : b) ib.push_back(id_of(s));
  return {std::move(ia), std::move(ib)};
}

}  // namespace

std::vector<Hunk> myers(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  return Differ<std::uint32_t>(a, b).run();
}

std::vector<Hunk> myers(std::u32string_view a, std::u32string_view b) {
  return Differ<char32_t>(std::span<const char32_t>(a.data(), a.size()),
                          std::span<const char32_t>(b.data(), b.size()))
      .run();
}

std::vector<std::string_view> split_pieces(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
}

std::string join_pieces(std::span<const std::string> pieces) {
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) out += '\n';
    out += pieces[i];
  }
  return out;
}

std::vector<LineEdit> diff_lines(std::string_view old_text, std::string_view new_text) {
  const auto a = split_pieces(old_text);
  const auto b = split_pieces(new_text);
  const auto [ia, ib] = intern(a, b);
  std::vector<LineEdit> script;
  for (const auto& h : myers(ia, ib)) {
    LineEdit e{h.old_start, h.old_len, {}};
    for (std::size_t k = 0; k < h.new_len; ++k) e.insert.emplace_back(b[h.new_start + k]);
    script.push_back(std::move(e));
  }
  return script;
}

std::string apply_lines(std::string_view old_text, std::span<const LineEdit> script) {
  const auto a = split_pieces(old_text);
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (const auto& e : script) {
    if (e.at < pos || e.at + e.remove > a.size()) throw InvalidArgument("line script out of range");
    for (; pos < e.at; ++pos) out.emplace_back(a[pos]);
    out.insert(out.end(), e.insert.begin(), e.insert.end());
    pos += e.remove;
  }
  for (; pos < a.size(); ++pos) out.emplace_back(a[pos]);
  return join_pieces(out);
}

std::vector<CharEdit> diff_chars(std::u32string_view old_line, std::u32string_view new_line) {
  if (old_line.find(U'\n') != std::u32string_view::npos || new_line.find(U'\n') != std::u32string_view::npos) {
    throw InvalidArgument("diff_chars inputs must be single lines");
  }
  std::vector<CharEdit> script;
  for (const auto& h : myers(old_line, new_line)) {
    script.push_back({h.old_start, h.old_len, std::u32string(new_line.substr(h.new_start, h.new_len))});
  }
  return script;
}

std::u32string apply_chars(std::u32string_view old_line, std::span<const CharEdit> script) {
  std::u32string out;
  std::size_t pos = 0;
  for (const auto& e : script) {
    if (e.at < pos || e.at + e.remove > old_line.size()) throw InvalidArgument("char script out of range");
    out += old_line.substr(pos, e.at - pos);
    out += e.insert;
    pos = e.at + e.remove;
  }
  out += old_line.substr(pos);
  return out;
}

// Unified diffs ---------------------------------------------------------------

namespace {

/// Lines with their terminators; the last one may lack '\n'.
std::vector<std::string_view> git_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl + 1;
    out.push_back(text.substr(start, end - start));
    start = end;
  }
  return out;
}

void emit_line(std::string& out, char prefix, std::string_view line) {
  out += prefix;
  if (!line.empty() && line.back() == '\n') {
    out += line;
  } else {
    out += line;
    out += "\n\\ No newline at end of file\n";
  }
}

std::string range(std::size_t start, std::size_t len) {
  // Zero-length ranges name the line before the gap.
  std::string s = std::to_string(len == 0 ? start : start + 1);
  if (len != 1) s += "," + std::to_string(len);
  return s;
}

}  // namespace

std::string unified_diff(std::string_view old_text, std::string_view new_text, std::size_t context,
                         std::string_view path) {
  const auto a = git_lines(old_text);
  const auto b = git_lines(new_text);
  const auto [ia, ib] = intern(a, b);
  const auto hunks = myers(ia, ib);
  if (hunks.empty()) return {};

  std::string out;
  out += "--- a/";
  out += path;
  out += "\n+++ b/";
  out += path;
  out += '\n';

  auto sat_sub = [](std::size_t x, std::size_t c) { return x > c ? x - c : 0; };
  auto sat_add = [](std::size_t x, std::size_t c, std::size_t cap) { return c >= cap - x ? cap : x + c; };

  std::size_t h = 0;
  while (h < hunks.size()) {
    // Group hunks whose context windows touch.
    std::size_t last = h;
    while (last + 1 < hunks.size()) {
      const auto gap = hunks[last + 1].old_start - (hunks[last].old_start + hunks[last].old_len);
      if (context != kFullContext && gap > 2 * context) break;
      ++last;
    }
    const std::size_t old_begin = sat_sub(hunks[h].old_start, context);
    const std::size_t lead = hunks[h].old_start - old_begin;
    const std::size_t new_begin = hunks[h].new_start - lead;
    const std::size_t old_tail_start = hunks[last].old_start + hunks[last].old_len;
    const std::size_t old_end = sat_add(old_tail_start, context, a.size());
    const std::size_t trail = old_end - old_tail_start;
    const std::size_t new_end = hunks[last].new_start + hunks[last].new_len + trail;

    out += "@@ -" + range(old_begin, old_end - old_begin) + " +" + range(new_begin, new_end - new_begin) +
           " @@\n";
    std::size_t i = old_begin;
    for (std::size_t k = h; k <= last; ++k) {
      for (; i < hunks[k].old_start; ++i) emit_line(out, ' ', a[i]);
      for (std::size_t d = 0; d < hunks[k].old_len; ++d) emit_line(out, '-', a[i + d]);
      for (std::size_t n = 0; n < hunks[k].new_len; ++n) emit_line(out, '+', b[hunks[k].new_start + n]);
      i += hunks[k].old_len;
    }
    for (; i < old_end; ++i) emit_line(out, ' ', a[i]);
    h = last + 1;
  }
  return out;
}

namespace {

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw DataError("bad hunk header number");
  return v;
}

std::pair<std::size_t, std::size_t> parse_range(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return {parse_size(s), 1};
  return {parse_size(s.substr(0, comma)), parse_size(s.substr(comma + 1))};
}

}  // namespace

std::string apply_unified(std::string_view old_text, std::string_view patch) {
  const auto src = git_lines(old_text);
  const auto plines = git_lines(patch);
  std::string out;
  std::size_t pos = 0;  // next unconsumed source line
  std::size_t i = 0;
  while (i < plines.size() && plines[i].rfind("@@", 0) != 0) ++i;  // skip file headers

  while (i < plines.size()) {
    const auto header = plines[i++];
    if (header.rfind("@@ -", 0) != 0) throw DataError("expected hunk header");
    const auto plus = header.find(" +");
    const auto close = header.find(" @@", plus);
    if (plus == std::string_view::npos || close == std::string_view::npos) throw DataError("bad hunk header");
    const auto [old_start, old_len] = parse_range(header.substr(4, plus - 4));
    const auto [new_start, new_len] = parse_range(header.substr(plus + 2, close - plus - 2));
    (void)new_start;

    std::vector<std::string> old_side, new_side;
    // Lines are stored without the patch prefix; '\' strips the newline of
    // the preceding line on the sides it belongs to.
    char last_prefix = 0;
    while (i < plines.size() && plines[i].rfind("@@", 0) != 0) {
      const auto l = plines[i++];
      if (l.empty()) throw DataError("empty patch line");
      const char p = l[0];
      const auto body = std::string(l.substr(1));
      if (p == '\\') {
        auto strip = [](std::string& s) {
          if (!s.empty() && s.back() == '\n') s.pop_back();
        };
        if (last_prefix == ' ' || last_prefix == '-') strip(old_side.back());
        if (last_prefix == ' ' || last_prefix == '+') strip(new_side.back());
        continue;
      }
      if (p == ' ') {
        old_side.push_back(body);
        new_side.push_back(body);
      } else if (p == '-') {
        old_side.push_back(body);
      } else if (p == '+') {
        new_side.push_back(body);
      } else {
        throw DataError("bad patch line prefix");
      }
      last_prefix = p;
    }
    if (old_side.size() != old_len || new_side.size() != new_len) {
      throw DataError("hunk line counts do not match header");
    }
    const std::size_t at = old_len == 0 ? old_start : old_start - 1;
    if (at < pos || at + old_len > src.size()) throw DataError("hunk out of range");
    for (; pos < at; ++pos) out += src[pos];
    for (std::size_t k = 0; k < old_len; ++k) {
      if (src[at + k] != old_side[k]) {
        throw DataError("patch does not apply at line " + std::to_string(at + k + 1));
      }
    }
    for (const auto& s : new_side) out += s;
    pos = at + old_len;
  }
  for (; pos < src.size(); ++pos) out += src[pos];
  return out;
}

std::size_t context_line_count(std::string_view patch) {
  std::size_t n = 0;
  bool in_hunk = false;
  for (const auto l : git_lines(patch)) {
    if (l.rfind("@@", 0) == 0) {
      in_hunk = true;
    } else if (in_hunk && !l.empty() && l[0] == ' ') {
      ++n;
    }
  }
  return n;
}

}  // namespace termforge::diff
