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

// Maze position tracking: an agent moves inside a fixed 32x32 maze and the
// task is to track its position from (intent, feedback) pairs. In the
// withheld variant some feedbacks are hidden.

#include <array>
#include <bitset>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "termforge/common.hpp"

namespace termforge::maze {

inline constexpr int kSize = 32;

enum class Direction : std::uint8_t { Left, Right, Up, Down };
enum class Feedback : std::uint8_t { Moved, Unchanged, Withheld };

std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view s);
Direction inverse(Direction d);

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

class Maze {
 public:
  /// Recursive backtracker on a 16x16 lattice: lattice cell (i, j) sits at
  /// (2i, 2j); carved passages open the odd cell between two lattice cells.
  /// Row and column 31 stay walls.
  static Maze generate(std::uint64_t seed);

  /// Builds a maze from a wall mask (true = wall). Throws InvalidArgument when
  /// the start is a wall or the open cells are not connected.
  static Maze from_walls(const std::array<std::bitset<kSize>, kSize>& walls, Position start,
                         std::uint64_t seed = 0);

  bool is_open(Position p) const {
    return p.x >= 0 && p.y >= 0 && p.x < kSize && p.y < kSize && !walls_[p.y][p.x];
  }
  Position start() const { return start_; }
  std::uint64_t seed() const { return seed_; }
  const std::array<std::bitset<kSize>, kSize>& walls() const { return walls_; }
  bool connected() const;

  /// Walls as 32 rows of 8 hex digits, bit x of row y set for a wall.
  std::string wall_hex() const;

 private:
  std::array<std::bitset<kSize>, kSize> walls_{};
  Position start_{};
  std::uint64_t seed_ = 0;
};

struct Step {
  Direction intent;
  Feedback feedback;
  friend bool operator==(const Step&, const Step&) = default;
};

struct Trajectory {
  Position start;
  std::vector<Step> steps;
  std::vector<Position> positions;  // ground truth after each step
  std::size_t withheld_depth = 0;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

Position move(Position p, Direction d);

/// Unwithheld trajectory from the maze start. Moves into walls or off the
/// grid leave the position unchanged and report Feedback::Unchanged.
Trajectory simulate(const Maze& maze, const std::vector<Direction>& intents);

/// Uniformly random intents.
std::vector<Direction> random_intents(std::size_t count, std::uint64_t seed);

/// Hides each feedback independently with probability p. Positions are kept.
Trajectory withhold(const Trajectory& trajectory, double p, std::uint64_t seed);

enum class Variant { Unwithheld, Withheld };

struct DatasetOptions {
  Variant variant = Variant::Withheld;
  double p = 0.2;
  std::size_t target_depth = 32;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::uint64_t maze_seed = 0;
  /// Steps per record. 0 picks round(target_depth / p) for the withheld
  /// variant and target_depth for the unwithheld one.
  std::size_t length = 0;
};

struct Record {
  std::uint64_t seed = 0;  // per-record seed that reproduces the trajectory
  Trajectory trajectory;
};

/// One line: `x y<TAB>intent:feedback ...<TAB>x,y ...<TAB>seed`. The first
/// field is the final position, the third the per-step targets.
std::string format_record(const Record& record);

/// Re-derives a record from its stored seed. Emitted records satisfy
/// `format_record(regenerate(...)) == line`.
Record regenerate(const Maze& maze, const DatasetOptions& options, std::uint64_t record_seed);

/// Parses the intent/feedback tokens of a formatted record.
std::vector<Step> parse_steps(std::string_view tokens);

std::vector<Record> build_dataset(const Maze& maze, const DatasetOptions& options);

/// Writes records to `path` and maze seed plus wall bitmap to `path.maze`.
void emit_dataset(const DatasetOptions& options, const std::filesystem::path& path);

}  // namespace termforge::maze
