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

#include "termforge/acttok.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "termforge/utf8.hpp"

namespace termforge::acttok {

namespace {

bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_alpha(unsigned char c) { return is_lower(c) || is_upper(c); }
bool is_word(unsigned char c) { return is_alpha(c) || is_digit(c) || c == '_'; }
bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::size_t escape_end(std::string_view t, std::size_t i) {
  // t[i] == ESC
  if (i + 1 >= t.size()) return i + 1;
  const unsigned char kind = t[i + 1];
  std::size_t j = i + 2;
  if (kind == '[') {
    while (j < t.size() && static_cast<unsigned char>(t[j]) >= 0x20 && static_cast<unsigned char>(t[j]) <= 0x3f) ++j;
    if (j < t.size() && static_cast<unsigned char>(t[j]) >= 0x40 && static_cast<unsigned char>(t[j]) <= 0x7e) ++j;
    return j;
  }
  if (kind == ']') {
    while (j < t.size() && t[j] != '\x07' && t[j] != '\x1b') ++j;
    if (j < t.size() && t[j] == '\x07') ++j;
    return j;
  }
  return i + 2;
}

/// End of the identifier part starting at i (t[i] is a word byte).
std::size_t word_part_end(std::string_view t, std::size_t i) {
  std::size_t j = i;
  if (t[j] == '_') return j + 1;
  if (is_digit(static_cast<unsigned char>(t[j]))) {
    while (j < t.size() && is_digit(static_cast<unsigned char>(t[j]))) ++j;
    return j < t.size() && t[j] == '_' ? j + 1 : j;
  }
  ++j;
  while (j < t.size()) {
    const auto c = static_cast<unsigned char>(t[j]);
    const auto prev = static_cast<unsigned char>(t[j - 1]);
    if (c == '_') return j + 1;
    if (!is_alpha(c) && !is_digit(c)) return j;
    if (is_upper(c) && (is_lower(prev) || is_digit(prev))) return j;
    ++j;
  }
  return j;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> pieces(std::string_view t) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  while (i < t.size()) {
    const auto c = static_cast<unsigned char>(t[i]);
    std::size_t j;
    if (c == 0x1b) {
      j = escape_end(t, i);
    } else if (is_word(c)) {
      j = word_part_end(t, i);
    } else if (is_space(c)) {
      j = i + 1;
      while (j < t.size() && is_space(static_cast<unsigned char>(t[j]))) ++j;
    } else if (c >= 0x80) {
      const int n = utf8::sequence_length(c);
      j = i + 1;
      if (n > 1 && i + n <= t.size() && utf8::decode(t.substr(i, n))) j = i + n;
    } else {
      j = i + 1;  // punctuation or a control byte
    }
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

std::string action_text(std::span<const term::Action> actions) {
  std::string out;
  for (const auto& a : actions) {
    out += a.payload;
    if (a.payload.size() > 1 && a.payload[0] == '\x1b' && a.payload[1] == ']') out += '\x07';
  }
  return out;
}

// Vocabulary --------------------------------------------------------------------

Vocab::Vocab() {
  for (std::size_t b = 0; b < kByteTokens; ++b) entries_.push_back({std::string(1, static_cast<char>(b)), 0});
  build_trie();
}

Vocab::Vocab(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.size() < kByteTokens) throw InvalidArgument("vocabulary lacks the byte tokens");
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& b = entries_[i].bytes;
    if (i < kByteTokens && (b.size() != 1 || static_cast<unsigned char>(b[0]) != i)) {
      throw InvalidArgument("entry " + std::to_string(i) + " must be byte " + std::to_string(i));
    }
    if (i >= kByteTokens && b.size() < 2) throw InvalidArgument("entry " + std::to_string(i) + " is too short");
    if (!seen.insert(b).second) throw InvalidArgument("duplicate vocabulary entry " + escape(b));
  }
  build_trie();
}

void Vocab::build_trie() {
  trie_.assign(1, Node{});
  for (std::uint32_t id = 0; id < entries_.size(); ++id) {
    std::uint32_t node = 0;
    for (unsigned char c : entries_[id].bytes) {
      auto it = trie_[node].next.find(c);
      if (it == trie_[node].next.end()) {
        trie_.emplace_back();
        it = trie_[node].next.emplace(c, static_cast<std::uint32_t>(trie_.size() - 1)).first;
      }
      node = it->second;
    }
    trie_[node].id = id;
  }
}

std::vector<std::uint32_t> Vocab::encode(std::string_view text) const {
  std::vector<std::uint32_t> ids;
  std::size_t i = 0;
  while (i < text.size()) {
    std::uint32_t node = 0;
    std::int64_t best = -1;
    std::size_t best_len = 0;
    for (std::size_t j = i; j < text.size(); ++j) {
      auto it = trie_[node].next.find(static_cast<unsigned char>(text[j]));
      if (it == trie_[node].next.end()) break;
      node = it->second;
      if (trie_[node].id >= 0) {
        best = trie_[node].id;
        best_len = j - i + 1;
      }
    }
    // Byte tokens make best >= 0 always.
    ids.push_back(static_cast<std::uint32_t>(best));
    i += best_len;
  }
  return ids;
}

std::string Vocab::decode(std::span<const std::uint32_t> ids) const {
  std::string out;
  for (auto id : ids) {
    if (id >= entries_.size()) throw InvalidArgument("token id " + std::to_string(id) + " not in vocabulary");
    out += entries_[id].bytes;
  }
  return out;
}

std::string Vocab::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += escape(e.bytes);
    out += '\t';
    out += std::to_string(e.count);
    out += '\n';
  }
  return out;
}

Vocab Vocab::parse(std::string_view text) {
  std::vector<Entry> entries;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) throw DataError("vocabulary file does not end with a newline");
    const auto line = text.substr(start, nl - start);
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw DataError("vocabulary line " + std::to_string(entries.size()) + " has no count");
    Entry e;
    try {
      e.bytes = unescape(line.substr(0, tab));
    } catch (const InvalidArgument& err) {
      throw DataError("vocabulary line " + std::to_string(entries.size()) + ": " + err.what());
    }
    const auto num = line.substr(tab + 1);
    const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), e.count);
    if (ec != std::errc() || p != num.data() + num.size()) {
      throw DataError("vocabulary line " + std::to_string(entries.size()) + " has a bad count");
    }
    entries.push_back(std::move(e));
    start = nl + 1;
  }
  try {
    return Vocab(std::move(entries));
  } catch (const InvalidArgument& err) {
    throw DataError(err.what());
  }
}

// Training ----------------------------------------------------------------------

void CandidateCounter::add(std::string_view text) {
  const auto ps = pieces(text);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t k = 1; k <= kMaxSpanPieces && i + k <= ps.size(); ++k) {
      const std::size_t len = ps[i + k - 1].second - ps[i].first;
      if (len > kMaxTokenBytes) break;
      if (len < 2) continue;
      ++counts_[std::string(text.substr(ps[i].first, len))];
    }
  }
}

void CandidateCounter::merge(const CandidateCounter& other) {
  for (const auto& [s, n] : other.counts_) counts_[s] += n;
}

Vocab train(const CandidateCounter& counter, std::size_t vocab_size) {
  if (vocab_size <= kByteTokens) throw InvalidArgument("vocab_size must be at least 257");
  std::vector<std::pair<std::string_view, std::uint64_t>> all;
  all.reserve(counter.counts().size());
  for (const auto& [s, n] : counter.counts()) all.emplace_back(s, n);
  const auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  };
  const std::size_t keep = std::min(all.size(), vocab_size - kByteTokens);
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), better);
  std::vector<Entry> entries = Vocab().entries();
  for (std::size_t i = 0; i < keep; ++i) entries.push_back({std::string(all[i].first), all[i].second});
  return Vocab(std::move(entries));
}

Vocab train(std::string_view corpus, std::size_t vocab_size) {
  if (vocab_size <= kByteTokens) throw InvalidArgument("vocab_size must be at least 257");
  if (corpus.empty()) throw DataError("empty training corpus");
  CandidateCounter c;
  c.add(corpus);
  return train(c, vocab_size);
}

double coverage(std::span<const std::uint32_t> ids) {
  if (ids.empty()) return 1.0;
  std::size_t n = 0;
  for (auto id : ids) n += id >= kByteTokens;
  return static_cast<double>(n) / static_cast<double>(ids.size());
}

// Escaping ----------------------------------------------------------------------

std::string escape(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  const bool utf8_ok = utf8::decode(bytes).has_value();
  std::string out;
  for (unsigned char c : bytes) {
    switch (c) {
      case '\\': out += "\\\\"; continue;
      case '\t': out += "\\t"; continue;
      case '\n': out += "\\n"; continue;
      case '\r': out += "\\r"; continue;
      default: break;
    }
    if (c < 0x20 || c == 0x7f || (c >= 0x80 && !utf8_ok)) {
      out += "\\x";
      out += kHex[c >> 4];
      out += kHex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string unescape(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i >= text.size()) throw InvalidArgument("dangling backslash");
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 'x': {
        if (i + 3 > text.size()) throw InvalidArgument("short \\x escape");
        unsigned v = 0;
        const auto [p, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, v, 16);
        if (ec != std::errc() || p != text.data() + i + 3) throw InvalidArgument("bad \\x escape");
        out += static_cast<char>(v);
        i += 2;
        break;
      }
      default: throw InvalidArgument(std::string("unknown escape \\") + text[i]);
    }
  }
  return out;
}

}  // namespace termforge::acttok
