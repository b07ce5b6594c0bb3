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

#include "termforge/tszx.hpp"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <unordered_set>

namespace termforge::tszx {

using term::Cell;
using term::Frame;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Truncated: return "truncated";
    case ErrorKind::BadMagic: return "bad-magic";
    case ErrorKind::BadVersion: return "bad-version";
    case ErrorKind::UnsupportedStage: return "unsupported-stage";
    case ErrorKind::PaletteIndex: return "palette-index";
    case ErrorKind::Corrupt: return "corrupt";
    case ErrorKind::Checksum: return "checksum";
    case ErrorKind::GeometryMismatch: return "geometry-mismatch";
    case ErrorKind::PaletteOverflow: return "palette-overflow";
    case ErrorKind::ActionCount: return "action-count";
  }
  return "unknown";
}

CodecError::CodecError(ErrorKind kind, const std::string& what)
    : DataError("tszx " + std::string(to_string(kind)) + ": " + what), kind_(kind) {}

int index_bits(std::size_t palette_size) {
  return palette_size <= 1 ? 0 : std::bit_width(palette_size - 1);
}

namespace {

constexpr std::uint32_t kRunFlag = 0x80000000u;
constexpr std::uint32_t kRepeatFlag = 0x40000000u;
constexpr std::size_t kPrefixSize = 6;  // magic, version, stage

std::uint64_t cell_key(const Cell& c) { return (std::uint64_t(c.cp) << 8) | c.style; }

void put_u16(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put_u32(std::string& out, std::uint32_t v) {
  put_u16(out, v & 0xffff);
  put_u16(out, v >> 16);
}

void put_varint(std::string& out, std::uint32_t v) {
  while (v >= 0x80) {
    out += static_cast<char>(0x80 | (v & 0x7f));
    v >>= 7;
  }
  out += static_cast<char>(v);
}

std::uint32_t crc(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

class BitWriter {
 public:
  explicit BitWriter(std::string& out) : out_(out) {}

  void put(std::uint32_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((value >> b) & 1));
      if (++used_ == 8) {
        out_ += static_cast<char>(acc_);
        acc_ = 0;
        used_ = 0;
      }
    }
  }

  void flush() {
    if (used_) out_ += static_cast<char>(acc_ << (8 - used_));
    acc_ = 0;
    used_ = 0;
  }

 private:
  std::string& out_;
  std::uint8_t acc_ = 0;
  int used_ = 0;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  void need(std::size_t n, const char* what) const {
    if (data_.size() - pos_ < n) throw CodecError(ErrorKind::Truncated, std::string("missing ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u16(const char* what) {
    need(2, what);
    const std::uint32_t lo = u8(what);
    return lo | (std::uint32_t(u8(what)) << 8);
  }
  std::uint32_t u32(const char* what) {
    const std::uint32_t lo = u16(what);
    return lo | (u16(what) << 16);
  }
  std::uint32_t varint(const char* what) {
    std::uint32_t v = 0;
    for (int shift = 0; shift < 35; shift += 7) {
      const std::uint8_t b = u8(what);
      if (shift == 28 && (b & 0x70)) throw CodecError(ErrorKind::Corrupt, std::string("oversized ") + what);
      v |= std::uint32_t(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw CodecError(ErrorKind::Corrupt, std::string("oversized ") + what);
  }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::string_view data() const { return data_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  BitReader(std::string_view data, std::size_t byte_pos) : data_(data), bit_(byte_pos * 8) {}

  std::uint32_t get(int bits) {
    if (static_cast<std::size_t>(bits) > data_.size() * 8 - bit_) {
      throw CodecError(ErrorKind::Truncated, "frame bitstream ends early");
    }
    std::uint32_t v = 0;
    for (int k = 0; k < bits; ++k, ++bit_) {
      const auto byte = static_cast<std::uint8_t>(data_[bit_ >> 3]);
      v = (v << 1) | ((byte >> (7 - (bit_ & 7))) & 1);
    }
    return v;
  }
  std::size_t remaining_bits() const { return data_.size() * 8 - bit_; }

  /// Skips the zero padding up to the next byte and returns its index.
  std::size_t align() {
    while (bit_ & 7) {
      if (get(1)) throw CodecError(ErrorKind::Corrupt, "nonzero padding bits");
    }
    return bit_ >> 3;
  }

 private:
  std::string_view data_;
  std::size_t bit_;
};

}  // namespace

// Encoder -----------------------------------------------------------------------

Encoder::Encoder(int width, int height, Options options)
    : width_(width), height_(height), options_(options), prev_(width, height) {}

void Encoder::push_run(bool repeat, std::size_t len) {
  tokens_.push_back(kRunFlag | (repeat ? kRepeatFlag : 0) | static_cast<std::uint32_t>(len));
}

void Encoder::push_literal(const Cell& cell) {
  const auto [it, fresh] = palette_index_.emplace(cell_key(cell), static_cast<std::uint32_t>(palette_.size()));
  if (fresh) {
    if (palette_.size() >= kMaxPalette) {
      palette_index_.erase(it);
      throw CodecError(ErrorKind::PaletteOverflow,
                       "more than " + std::to_string(kMaxPalette) + " distinct literal cells");
    }
    palette_.push_back(cell);
  }
  tokens_.push_back(it->second);
}

void Encoder::add_frame(const Frame& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw CodecError(ErrorKind::GeometryMismatch,
                     "frame " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                         " in a " + std::to_string(width_) + "x" + std::to_string(height_) + " stream");
  }
  const auto cur = frame.cells();
  const auto prev = prev_.cells();
  const std::size_t n = cur.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t eq = 0;
    while (i + eq < n && eq < kMaxRun && cur[i + eq] == prev[i + eq]) ++eq;
    const Cell last = i ? cur[i - 1] : term::kBlank;
    std::size_t rep = 0;
    while (i + rep < n && rep < kMaxRun && cur[i + rep] == last) ++rep;
    if (eq == 0 && rep == 0) {
      push_literal(cur[i]);
      ++i;
    } else if (eq >= rep) {
      push_run(false, eq);
      i += eq;
    } else {
      push_run(true, rep);
      i += rep;
    }
  }
  std::copy(cur.begin(), cur.end(), prev_.cells().begin());
  ++frames_;
}

void Encoder::add_action(term::Action action) {
  if (action.payload.find('\0') != std::string::npos) {
    throw InvalidArgument("action payload contains NUL");
  }
  actions_.push_back(std::move(action));
}

std::string Encoder::finish() const {
  const std::size_t expected = frames_ ? frames_ - 1 : 0;
  if (actions_.size() != expected) {
    throw CodecError(ErrorKind::ActionCount, std::to_string(actions_.size()) + " actions for " +
                                                 std::to_string(frames_) + " frames");
  }
  std::string body;
  put_u16(body, static_cast<std::uint32_t>(width_));
  put_u16(body, static_cast<std::uint32_t>(height_));
  put_u32(body, static_cast<std::uint32_t>(frames_));
  put_u16(body, static_cast<std::uint32_t>(palette_.size()));
  for (const auto& c : palette_) {
    put_varint(body, c.cp);
    body += static_cast<char>(c.style);
  }
  const int k = index_bits(palette_.size());
  BitWriter bits(body);
  for (const auto t : tokens_) {
    if (t & kRunFlag) {
      const std::uint32_t len = t & 0xffff;
      const bool wide = len > 0xff;
      bits.put(1, 1);
      bits.put((t & kRepeatFlag) ? 1 : 0, 1);
      bits.put(wide ? 1 : 0, 1);
      bits.put(len & 0xff, 8);
      if (wide) bits.put(len >> 8, 8);
    } else {
      bits.put(0, 1);
      bits.put(t, k);
    }
  }
  bits.flush();
  put_u32(body, static_cast<std::uint32_t>(actions_.size()));
  for (const auto& a : actions_) {
    body += a.payload;
    body += '\0';
  }

  std::string out(kMagic);
  out += static_cast<char>(kVersion);
  out += static_cast<char>(options_.stage);
  if (options_.stage == OuterStage::Zlib) {
    uLongf size = compressBound(static_cast<uLong>(body.size()));
    std::string packed(size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &size, reinterpret_cast<const Bytef*>(body.data()),
                  static_cast<uLong>(body.size()), 9) != Z_OK) {
      throw Error("zlib compression failed");
    }
    packed.resize(size);
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    out += packed;
  } else {
    out += body;
  }
  put_u32(out, crc(out));
  return out;
}

std::string encode(const Stream& stream, Options options) {
  Encoder enc(stream.width, stream.height, options);
  for (const auto& f : stream.frames) enc.add_frame(f);
  for (const auto& a : stream.actions) enc.add_action(a);
  return enc.finish();
}

// Decoder -----------------------------------------------------------------------

namespace {

struct Parsed {
  Stream header;  // geometry and actions
  std::size_t palette_size = 0;
  OuterStage stage = OuterStage::None;
};

Parsed parse(std::string_view bytes, const std::function<void(const Frame&)>& on_frame, TokenHistogram* hist) {
  if (bytes.size() < kMagic.size()) throw CodecError(ErrorKind::Truncated, "missing magic");
  if (bytes.substr(0, kMagic.size()) != kMagic) throw CodecError(ErrorKind::BadMagic, "not a TSZX stream");
  if (bytes.size() < kPrefixSize) throw CodecError(ErrorKind::Truncated, "missing version/stage");
  const auto version = static_cast<std::uint8_t>(bytes[4]);
  if (version != kVersion) throw CodecError(ErrorKind::BadVersion, "version " + std::to_string(version));
  const auto stage_byte = static_cast<std::uint8_t>(bytes[5]);
  if (stage_byte > static_cast<std::uint8_t>(OuterStage::Zlib)) {
    throw CodecError(ErrorKind::UnsupportedStage, "outer stage " + std::to_string(stage_byte));
  }
  if (bytes.size() < kPrefixSize + 4) throw CodecError(ErrorKind::Truncated, "missing checksum");
  const std::string_view stored = bytes.substr(kPrefixSize, bytes.size() - kPrefixSize - 4);

  Parsed result;
  result.stage = static_cast<OuterStage>(stage_byte);
  std::string inflated;
  std::string_view body = stored;
  if (result.stage == OuterStage::Zlib) {
    ByteReader r(stored);
    const std::uint32_t raw_size = r.u32("raw size");
    // deflate cannot exceed ~1032:1, which bounds the allocation.
    if (raw_size > (std::uint64_t(r.remaining()) + 16) * 1032) {
      throw CodecError(ErrorKind::Corrupt, "implausible raw size");
    }
    inflated.resize(raw_size);
    uLongf size = raw_size;
    const int rc = uncompress(reinterpret_cast<Bytef*>(inflated.data()), &size,
                              reinterpret_cast<const Bytef*>(stored.data() + r.pos()),
                              static_cast<uLong>(r.remaining()));
    if (rc == Z_BUF_ERROR && size < raw_size) throw CodecError(ErrorKind::Truncated, "zlib stream ends early");
    if (rc != Z_OK || size != raw_size) throw CodecError(ErrorKind::Corrupt, "zlib stage failed");
    body = inflated;
  }

  ByteReader r(body);
  Stream& s = result.header;
  s.width = static_cast<int>(r.u16("width"));
  s.height = static_cast<int>(r.u16("height"));
  if (s.width == 0 || s.height == 0) throw CodecError(ErrorKind::Corrupt, "zero geometry");
  const std::uint32_t frame_count = r.u32("frame count");
  const std::uint32_t palette_count = r.u16("palette count");
  std::vector<Cell> palette;
  palette.reserve(palette_count);
  std::unordered_set<std::uint64_t> seen;
  for (std::uint32_t i = 0; i < palette_count; ++i) {
    Cell c;
    c.cp = static_cast<char32_t>(r.varint("palette codepoint"));
    c.style = r.u8("palette style");
    if (!seen.insert(cell_key(c)).second) throw CodecError(ErrorKind::Corrupt, "duplicate palette entry");
    palette.push_back(c);
  }
  result.palette_size = palette.size();
  const int k = index_bits(palette.size());

  const std::size_t cells = std::size_t(s.width) * std::size_t(s.height);
  BitReader bits(body, r.pos());
  // Every token covers at most kMaxRun cells and costs at least one bit.
  const std::size_t min_tokens = (cells + kMaxRun - 1) / kMaxRun;
  if (frame_count != 0 && min_tokens * frame_count > bits.remaining_bits()) {
    throw CodecError(ErrorKind::Truncated, "frame bitstream too short for " + std::to_string(frame_count) + " frames");
  }
  Frame prev(s.width, s.height);
  Frame cur(s.width, s.height);
  for (std::uint32_t f = 0; f < frame_count; ++f) {
    auto out = cur.cells();
    const auto old = prev.cells();
    std::size_t i = 0;
    Cell last = term::kBlank;
    while (i < cells) {
      if (bits.get(1)) {
        const bool repeat = bits.get(1);
        const bool wide = bits.get(1);
        std::size_t len = bits.get(8);
        if (wide) len |= std::size_t(bits.get(8)) << 8;
        if (len == 0) throw CodecError(ErrorKind::Corrupt, "zero-length run");
        if (len > cells - i) throw CodecError(ErrorKind::Corrupt, "run crosses the frame end");
        if (repeat) {
          std::fill_n(out.begin() + i, len, last);
        } else {
          std::copy_n(old.begin() + i, len, out.begin() + i);
        }
        if (hist) {
          (repeat ? hist->repeat_tokens : hist->equivalence_tokens) += 1;
          (repeat ? hist->repeat_cells : hist->equivalence_cells) += len;
          hist->long_runs += wide;
        }
        i += len;
        last = out[i - 1];
      } else {
        const std::uint32_t idx = bits.get(k);
        if (idx >= palette.size()) {
          throw CodecError(ErrorKind::PaletteIndex,
                           "index " + std::to_string(idx) + " >= palette size " + std::to_string(palette.size()));
        }
        out[i++] = last = palette[idx];
        if (hist) ++hist->literal_tokens;
      }
    }
    if (on_frame) on_frame(cur);
    std::swap(prev, cur);
  }
  r.seek(bits.align());

  const std::uint32_t action_count = r.u32("action count");
  const std::size_t expected = frame_count ? frame_count - 1 : 0;
  if (action_count != expected) {
    throw CodecError(ErrorKind::ActionCount,
                     std::to_string(action_count) + " actions for " + std::to_string(frame_count) + " frames");
  }
  s.actions.reserve(action_count);
  for (std::uint32_t a = 0; a < action_count; ++a) {
    const auto rest = body.substr(r.pos());
    const auto nul = rest.find('\0');
    if (nul == std::string_view::npos) throw CodecError(ErrorKind::Truncated, "unterminated action record");
    s.actions.push_back({std::string(rest.substr(0, nul))});
    r.seek(r.pos() + nul + 1);
  }
  if (r.remaining() != 0) throw CodecError(ErrorKind::Corrupt, "trailing bytes after action records");

  const std::string_view covered = bytes.substr(0, bytes.size() - 4);
  ByteReader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32("checksum") != crc(covered)) throw CodecError(ErrorKind::Checksum, "CRC32 mismatch");
  return result;
}

}  // namespace

Stream decode_each(std::string_view bytes, const std::function<void(const Frame&)>& on_frame) {
  return parse(bytes, on_frame, nullptr).header;
}

Stream decode(std::string_view bytes) {
  std::vector<Frame> frames;
  auto s = parse(bytes, [&](const Frame& f) { frames.push_back(f); }, nullptr).header;
  s.frames = std::move(frames);
  return s;
}

Report compression_report(std::string_view bytes) {
  Report rep;
  std::size_t frames = 0;
  const auto parsed = parse(bytes, [&](const Frame&) { ++frames; }, &rep.tokens);
  rep.width = parsed.header.width;
  rep.height = parsed.header.height;
  rep.frames = frames;
  rep.actions = parsed.header.actions.size();
  rep.palette_size = parsed.palette_size;
  rep.index_bits = index_bits(parsed.palette_size);
  rep.encoded_bytes = bytes.size();
  rep.naive_bytes = frames * std::size_t(rep.width) * std::size_t(rep.height) * 5;
  rep.ratio = rep.encoded_bytes ? double(rep.naive_bytes) / double(rep.encoded_bytes) : 0.0;
  rep.stage = parsed.stage;
  return rep;
}

std::string format_report(const Report& r) {
  char ratio[64];
  std::snprintf(ratio, sizeof ratio, "%.2f", r.ratio);
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  };
  line("geometry", std::to_string(r.width) + "x" + std::to_string(r.height));
  line("frames", std::to_string(r.frames));
  line("actions", std::to_string(r.actions));
  line("outer_stage", std::to_string(static_cast<int>(r.stage)));
  line("palette_size", std::to_string(r.palette_size));
  line("index_bits", std::to_string(r.index_bits));
  line("encoded_bytes", std::to_string(r.encoded_bytes));
  line("naive_bytes", std::to_string(r.naive_bytes));
  line("ratio", ratio);
  line("equivalence_tokens", std::to_string(r.tokens.equivalence_tokens));
  line("equivalence_cells", std::to_string(r.tokens.equivalence_cells));
  line("repeat_tokens", std::to_string(r.tokens.repeat_tokens));
  line("repeat_cells", std::to_string(r.tokens.repeat_cells));
  line("literal_tokens", std::to_string(r.tokens.literal_tokens));
  line("long_runs", std::to_string(r.tokens.long_runs));
  line("cells", std::to_string(r.tokens.cells()));
  return out;
}

// Raw dumps ---------------------------------------------------------------------

std::string write_raw(const Stream& stream) {
  std::string out = "TFRM";
  put_u16(out, static_cast<std::uint32_t>(stream.width));
  put_u16(out, static_cast<std::uint32_t>(stream.height));
  put_u32(out, static_cast<std::uint32_t>(stream.frames.size()));
  for (const auto& f : stream.frames) {
    if (f.width() != stream.width || f.height() != stream.height) {
      throw CodecError(ErrorKind::GeometryMismatch, "frame geometry differs from stream");
    }
    for (const auto& c : f.cells()) {
      put_u32(out, c.cp);
      out += static_cast<char>(c.style);
    }
  }
  put_u32(out, static_cast<std::uint32_t>(stream.actions.size()));
  out += term::join_actions(stream.actions);
  return out;
}

Stream read_raw(std::string_view bytes) {
  ByteReader r(bytes);
  r.need(4, "magic");
  if (bytes.substr(0, 4) != "TFRM") throw CodecError(ErrorKind::BadMagic, "not a raw frame dump");
  r.seek(4);
  Stream s;
  s.width = static_cast<int>(r.u16("width"));
  s.height = static_cast<int>(r.u16("height"));
  if (s.width == 0 || s.height == 0) throw CodecError(ErrorKind::Corrupt, "zero geometry");
  const std::uint32_t n = r.u32("frame count");
  const std::size_t cells = std::size_t(s.width) * std::size_t(s.height);
  r.need(std::size_t(n) * cells * 5, "cells");
  s.frames.reserve(n);
  for (std::uint32_t f = 0; f < n; ++f) {
    Frame frame(s.width, s.height);
    for (auto& c : frame.cells()) {
      c.cp = static_cast<char32_t>(r.u32("codepoint"));
      c.style = r.u8("style");
    }
    s.frames.push_back(std::move(frame));
  }
  const std::uint32_t a = r.u32("action count");
  s.actions = term::split_actions(bytes.substr(r.pos()));
  if (s.actions.size() != a) throw CodecError(ErrorKind::ActionCount, "action count mismatch");
  return s;
}

}  // namespace termforge::tszx
