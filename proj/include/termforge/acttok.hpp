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

// Case-aware greedy subword tokenizer for action text.
//
// Text is cut into pieces: identifier parts (a boundary before an upper-case
// letter that follows a lower-case letter or digit, and after every
// underscore; digits stay with the preceding letters), digit runs, whitespace
// runs, single punctuation bytes, single non-ASCII codepoints, single control
// bytes and whole escape sequences. Training counts every span of one to four
// adjacent pieces (2..32 bytes) and keeps the most frequent; ids 0..255 are
// the single bytes, so every input encodes.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "termforge/common.hpp"
#include "termforge/term.hpp"

namespace termforge::acttok {

inline constexpr std::size_t kByteTokens = 256;
inline constexpr std::size_t kMaxSpanPieces = 4;
inline constexpr std::size_t kMaxTokenBytes = 32;

/// Piece boundaries of `text` as [begin, end) byte offsets.
std::vector<std::pair<std::size_t, std::size_t>> pieces(std::string_view text);

/// Corpus text for an action log: payloads concatenated, with every
/// ESC ']' group terminated by BEL so group boundaries survive.
std::string action_text(std::span<const term::Action> actions);

struct Entry {
  std::string bytes;
  std::uint64_t count = 0;
};

class Vocab {
 public:
  /// The 256 byte tokens only.
  Vocab();
  /// Throws InvalidArgument unless the first 256 entries are the single bytes
  /// in order and no entry repeats.
  explicit Vocab(std::vector<Entry> entries);

  std::size_t size() const { return entries_.size(); }
  const Entry& at(std::uint32_t id) const { return entries_.at(id); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Greedy longest match, left to right.
  std::vector<std::uint32_t> encode(std::string_view text) const;
  /// Throws InvalidArgument on an id outside the vocabulary.
  std::string decode(std::span<const std::uint32_t> ids) const;

  /// One entry per line: escaped bytes, tab, count. Line index = id.
  std::string serialize() const;
  /// Throws DataError on malformed input.
  static Vocab parse(std::string_view text);

 private:
  void build_trie();

  std::vector<Entry> entries_;
  // Trie over token bytes: node -> (byte -> child), terminal id per node.
  struct Node {
    std::unordered_map<unsigned char, std::uint32_t> next;
    std::int64_t id = -1;
  };
  std::vector<Node> trie_;
};

/// Counts candidate spans; feed shards with add() and combine with merge().
class CandidateCounter {
 public:
  void add(std::string_view text);
  void merge(const CandidateCounter& other);
  const std::unordered_map<std::string, std::uint64_t>& counts() const { return counts_; }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

/// Keeps the top vocab_size - 256 candidates (count descending, then shorter,
/// then bytewise). Throws InvalidArgument if vocab_size < 257 and DataError if
/// the corpus is empty. The result is smaller than vocab_size when the corpus
/// has too few distinct candidates.
Vocab train(const CandidateCounter& counter, std::size_t vocab_size);
Vocab train(std::string_view corpus, std::size_t vocab_size);

/// Fraction of tokens with id >= 256.
double coverage(std::span<const std::uint32_t> ids);

/// Escaping used by the vocab file: \\ \t \n \r and \xHH for other control
/// bytes and for high bytes of strings that are not valid UTF-8.
std::string escape(std::string_view bytes);
std::string unescape(std::string_view text);

}  // namespace termforge::acttok
