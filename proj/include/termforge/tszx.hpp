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

// Bit-packed lossless codec for terminal frame streams.
//
// Layout (integers little-endian):
//   "TSZX" | version u8 | outer stage u8 | body | crc32 u32
// where the body, stored as-is for stage 0 and as
// `raw_size u32 | zlib(raw)` for stage 1, is
//   width u16 | height u16 | frame_count u32 | palette_count u16 |
//   palette entries (codepoint LEB128, style u8) | frame bitstream |
//   action_count u32 | action payloads, each NUL-terminated
// and the CRC covers every byte before it.
//
// The frame bitstream is packed MSB-first and padded to a byte only at its
// end. Each frame is a token sequence covering its cells in row-major order:
//   1 T L len       run token; T=0 copies cells from the same positions of
//                   the previous frame, T=1 repeats the last cell emitted in
//                   this frame (blank at the frame start). L=0 gives an 8-bit
//                   length, L=1 a 16-bit length written low byte first.
//   0 idx           literal; idx is a ceil(log2(palette_count))-bit index.
// The encoder is greedy: the longest run wins, ties go to equivalence, then
// repeat, then literal. Frame 0 is compared against the blank frame.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "termforge/common.hpp"
#include "termforge/term.hpp"

namespace termforge::tszx {

inline constexpr std::string_view kMagic = "TSZX";
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kMaxPalette = 0xffff;
inline constexpr std::size_t kMaxRun = 0xffff;

enum class OuterStage : std::uint8_t { None = 0, Zlib = 1 };

enum class ErrorKind {
  Truncated,
  BadMagic,
  BadVersion,
  UnsupportedStage,
  PaletteIndex,
  Corrupt,
  Checksum,
  GeometryMismatch,
  PaletteOverflow,
  ActionCount,
};

std::string_view to_string(ErrorKind kind);

class CodecError : public DataError {
 public:
  CodecError(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Stream {
  int width = term::Frame::kDefaultWidth;
  int height = term::Frame::kDefaultHeight;
  std::vector<term::Frame> frames;
  std::vector<term::Action> actions;  // frames.size() - 1 of them (0 when empty)
  friend bool operator==(const Stream&, const Stream&) = default;
};

struct Options {
  OuterStage stage = OuterStage::None;
};

/// Incremental encoder: frames are tokenized as they arrive so only the
/// previous frame is kept; finish() serializes.
class Encoder {
 public:
  Encoder(int width, int height, Options options = {});

  /// Throws CodecError(GeometryMismatch) or CodecError(PaletteOverflow).
  void add_frame(const term::Frame& frame);
  void add_action(term::Action action);

  std::size_t frames() const { return frames_; }
  std::size_t actions() const { return actions_.size(); }

  /// Throws CodecError(ActionCount) unless actions == max(frames - 1, 0).
  std::string finish() const;

 private:
  void push_run(bool repeat, std::size_t len);
  void push_literal(const term::Cell& cell);

  int width_;
  int height_;
  Options options_;
  term::Frame prev_;
  std::size_t frames_ = 0;
  // Tokens: bit 31 set for runs (bit 30 = repeat, low 16 bits = length),
  // otherwise a palette index.
  std::vector<std::uint32_t> tokens_;
  std::vector<term::Cell> palette_;
  std::unordered_map<std::uint64_t, std::uint32_t> palette_index_;
  std::vector<term::Action> actions_;
};

std::string encode(const Stream& stream, Options options = {});

/// Throws CodecError with a kind naming the first problem found.
Stream decode(std::string_view bytes);

/// Streaming variant: calls `on_frame` for every decoded frame in order and
/// returns the header geometry and actions (frames left empty).
Stream decode_each(std::string_view bytes, const std::function<void(const term::Frame&)>& on_frame);

struct TokenHistogram {
  std::size_t equivalence_tokens = 0;
  std::size_t repeat_tokens = 0;
  std::size_t literal_tokens = 0;
  std::size_t equivalence_cells = 0;
  std::size_t repeat_cells = 0;
  std::size_t long_runs = 0;  // runs using a 16-bit length
  std::size_t cells() const { return equivalence_cells + repeat_cells + literal_tokens; }
};

struct Report {
  int width = 0;
  int height = 0;
  std::size_t frames = 0;
  std::size_t actions = 0;
  std::size_t palette_size = 0;
  int index_bits = 0;
  std::size_t encoded_bytes = 0;
  std::size_t naive_bytes = 0;  // frames * cells * 5
  double ratio = 0;             // naive / encoded
  OuterStage stage = OuterStage::None;
  TokenHistogram tokens;
};

Report compression_report(std::string_view bytes);
std::string format_report(const Report& report);

/// Number of bits needed for a palette index.
int index_bits(std::size_t palette_size);

// Raw frame dumps ---------------------------------------------------------------
//
// Uncompressed interchange format for the CLI:
//   "TFRM" | width u16 | height u16 | frame_count u32 |
//   cells as (codepoint u32, style u8) | action_count u32 | NUL-terminated actions

std::string write_raw(const Stream& stream);
Stream read_raw(std::string_view bytes);

}  // namespace termforge::tszx
