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

#include "termforge/maze.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace termforge::maze {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Left: return "LEFT";
    case Direction::Right: return "RIGHT";
    case Direction::Up: return "UP";
    case Direction::Down: return "DOWN";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "LEFT") return Direction::Left;
  if (s == "RIGHT") return Direction::Right;
  if (s == "UP") return Direction::Up;
  if (s == "DOWN") return Direction::Down;
  return std::nullopt;
}

Direction inverse(Direction d) {
  switch (d) {
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
    case Direction::Up: return Direction::Down;
    case Direction::Down: return Direction::Up;
  }
  return d;
}

Position move(Position p, Direction d) {
  switch (d) {
    case Direction::Left: --p.x; break;
    case Direction::Right: ++p.x; break;
    case Direction::Up: --p.y; break;
    case Direction::Down: ++p.y; break;
  }
  return p;
}

Maze Maze::generate(std::uint64_t seed) {
  constexpr int kLattice = kSize / 2;
  Maze m;
  m.seed_ = seed;
  for (auto& row : m.walls_) row.set();

  Rng rng(derive_seed(seed, "maze/layout"));
  std::array<std::bitset<kLattice>, kLattice> seen{};
  const Position origin{static_cast<int>(rng.uniform(0, kLattice - 1)),
                        static_cast<int>(rng.uniform(0, kLattice - 1))};
  std::vector<Position> stack{origin};
  seen[origin.y][origin.x] = true;
  m.walls_[2 * origin.y][2 * origin.x] = false;

  while (!stack.empty()) {
    const Position cur = stack.back();
    std::array<Position, 4> options;
    int n = 0;
    for (auto d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
      const Position nb = move(cur, d);
      if (nb.x >= 0 && nb.y >= 0 && nb.x < kLattice && nb.y < kLattice && !seen[nb.y][nb.x]) {
        options[n++] = nb;
      }
    }
    if (n == 0) {
      stack.pop_back();
      continue;
    }
    const Position next = options[rng.uniform(0, n - 1)];
    seen[next.y][next.x] = true;
    m.walls_[cur.y + next.y][cur.x + next.x] = false;  // passage between them
    m.walls_[2 * next.y][2 * next.x] = false;
    stack.push_back(next);
  }
  m.start_ = {2 * static_cast<int>(rng.uniform(0, kLattice - 1)),
              2 * static_cast<int>(rng.uniform(0, kLattice - 1))};
  return m;
}

Maze Maze::from_walls(const std::array<std::bitset<kSize>, kSize>& walls, Position start,
                      std::uint64_t seed) {
  Maze m;
  m.walls_ = walls;
  m.start_ = start;
  m.seed_ = seed;
  if (!m.is_open(start)) throw InvalidArgument("maze start is not an open cell");
  if (!m.connected()) throw InvalidArgument("maze open region is not connected");
  return m;
}

bool Maze::connected() const {
  std::array<std::bitset<kSize>, kSize> seen{};
  std::vector<Position> todo{start_};
  seen[start_.y][start_.x] = true;
  std::size_t reached = 1;
  while (!todo.empty()) {
    const Position p = todo.back();
    todo.pop_back();
    for (auto d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
      const Position q = move(p, d);
      if (is_open(q) && !seen[q.y][q.x]) {
        seen[q.y][q.x] = true;
        ++reached;
        todo.push_back(q);
      }
    }
  }
  std::size_t open = 0;
  for (const auto& row : walls_) open += kSize - row.count();
  return reached == open;
}

std::string Maze::wall_hex() const {
  std::string out;
  char buf[16];
  for (int y = 0; y < kSize; ++y) {
    std::snprintf(buf, sizeof buf, "%08lx", walls_[y].to_ulong());
    if (y) out += ' ';
    out += buf;
  }
  return out;
}

Trajectory simulate(const Maze& maze, const std::vector<Direction>& intents) {
  if (intents.empty()) throw InvalidArgument("simulate needs at least one intent");
  Trajectory t;
  t.start = maze.start();
  t.steps.reserve(intents.size());
  t.positions.reserve(intents.size());
  Position pos = maze.start();
  for (auto d : intents) {
    const Position next = move(pos, d);
    if (maze.is_open(next)) {
      pos = next;
      t.steps.push_back({d, Feedback::Moved});
    } else {
      t.steps.push_back({d, Feedback::Unchanged});
    }
    t.positions.push_back(pos);
  }
  return t;
}

std::vector<Direction> random_intents(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Direction> out(count);
  for (auto& d : out) d = static_cast<Direction>(rng.uniform(0, 3));
  return out;
}

Trajectory withhold(const Trajectory& trajectory, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("withhold probability must be in [0, 1]");
  Rng rng(seed);
  Trajectory out = trajectory;
  out.withheld_depth = 0;
  for (auto& s : out.steps) {
    if (s.feedback == Feedback::Withheld) {
      throw InvalidArgument("trajectory already contains withheld feedback");
    }
    if (rng.bernoulli(p)) {
      s.feedback = Feedback::Withheld;
      ++out.withheld_depth;
    }
  }
  return out;
}

namespace {

std::size_t record_length(const DatasetOptions& o) {
  if (o.length) return o.length;
  if (o.variant == Variant::Unwithheld) return o.target_depth;
  return static_cast<std::size_t>(std::llround(double(o.target_depth) / o.p));
}

}  // namespace

Record regenerate(const Maze& maze, const DatasetOptions& options, std::uint64_t record_seed) {
  Record r;
  r.seed = record_seed;
  r.trajectory = simulate(
      maze, random_intents(record_length(options), derive_seed(record_seed, "maze/intents")));
  if (options.variant == Variant::Withheld) {
    r.trajectory = withhold(r.trajectory, options.p, derive_seed(record_seed, "maze/withhold"));
  }
  return r;
}

std::vector<Record> build_dataset(const Maze& maze, const DatasetOptions& options) {
  if (options.target_depth < 1) throw InvalidArgument("target depth must be >= 1");
  const bool withheld = options.variant == Variant::Withheld;
  if (withheld && !(options.p > 0.0 && options.p <= 1.0)) {
    throw InvalidArgument("withheld variant needs 0 < p <= 1");
  }
  if (withheld && record_length(options) < options.target_depth) {
    throw InvalidArgument("record length shorter than target depth");
  }
  std::vector<Record> records;
  records.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    const auto base = derive_seed(options.seed, "maze/record", i);
    for (std::uint64_t attempt = 0;; ++attempt) {
      auto r = regenerate(maze, options, derive_seed(base, "maze/attempt", attempt));
      if (!withheld || r.trajectory.withheld_depth == options.target_depth) {
        records.push_back(std::move(r));
        break;
      }
    }
  }
  return records;
}

std::string format_record(const Record& record) {
  const auto& t = record.trajectory;
  std::string out;
  const Position last = t.positions.empty() ? t.start : t.positions.back();
  out += std::to_string(last.x) + ' ' + std::to_string(last.y) + '\t';
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (i) out += ' ';
    out += to_string(t.steps[i].intent);
    out += ':';
    switch (t.steps[i].feedback) {
      case Feedback::Moved: out += to_string(t.steps[i].intent); break;
      case Feedback::Unchanged: out += "UNCHANGED"; break;
      case Feedback::Withheld: out += "WITHHELD"; break;
    }
  }
  out += '\t';
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(t.positions[i].x) + ',' + std::to_string(t.positions[i].y);
  }
  out += '\t';
  out += std::to_string(record.seed);
  return out;
}

std::vector<Step> parse_steps(std::string_view tokens) {
  std::vector<Step> steps;
  std::size_t i = 0;
  while (i < tokens.size()) {
    auto j = tokens.find(' ', i);
    if (j == std::string_view::npos) j = tokens.size();
    const auto tok = tokens.substr(i, j - i);
    i = j + 1;
    if (tok.empty()) continue;
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) throw DataError("bad maze token '" + std::string(tok) + "'");
    const auto intent = parse_direction(tok.substr(0, colon));
    const auto fb = tok.substr(colon + 1);
    if (!intent) throw DataError("bad intent in '" + std::string(tok) + "'");
    Feedback feedback;
    if (fb == "UNCHANGED") {
      feedback = Feedback::Unchanged;
    } else if (fb == "WITHHELD") {
      feedback = Feedback::Withheld;
    } else if (parse_direction(fb) == intent) {
      feedback = Feedback::Moved;
    } else {
      throw DataError("bad feedback in '" + std::string(tok) + "'");
    }
    steps.push_back({*intent, feedback});
  }
  return steps;
}

void emit_dataset(const DatasetOptions& options, const std::filesystem::path& path) {
  const Maze maze = Maze::generate(options.maze_seed);
  const auto records = build_dataset(maze, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  for (const auto& r : records) out << format_record(r) << '\n';
  if (!out) throw DataError("write failed: " + path.string());

  auto meta = path;
  meta += ".maze";
  std::ofstream m(meta);
  if (!m) throw DataError("cannot open " + meta.string());
  m << "maze_seed=" << options.maze_seed << '\n'
    << "start=" << maze.start().x << ',' << maze.start().y << '\n'
    << "walls=" << maze.wall_hex() << '\n'
    << "variant=" << (options.variant == Variant::Withheld ? "withheld" : "unwithheld") << '\n'
    << "p=" << options.p << '\n'
    << "target_depth=" << options.target_depth << '\n'
    << "length=" << record_length(options) << '\n'
    << "count=" << options.count << '\n'
    << "seed=" << options.seed << '\n';
}

}  // namespace termforge::maze
