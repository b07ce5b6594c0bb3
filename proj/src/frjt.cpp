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

#include "termforge/frjt.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace termforge::frjt {

std::string_view to_string(Opcode op) {
  switch (op) {
    case Opcode::Load: return "LOAD";
    case Opcode::Add: return "ADD";
    case Opcode::Sub: return "SUB";
    case Opcode::Jz: return "JZ";
    case Opcode::Jnz: return "JNZ";
    case Opcode::Jmp: return "JMP";
    case Opcode::Label: return "LABEL";
    case Opcode::Halt: return "HALT";
  }
  return "?";
}

char to_char(HaltState s) { return s == HaltState::A ? 'A' : 'B'; }

double ExecutionResult::coverage() const {
  if (executed.empty()) return 0.0;
  const auto n = std::count(executed.begin(), executed.end(), true);
  return static_cast<double>(n) / static_cast<double>(executed.size());
}

namespace {

bool valid_register(std::uint8_t r) { return r >= 1 && r <= kRegisterCount; }

std::unordered_map<std::uint32_t, std::size_t> label_positions(const Program& p) {
  std::unordered_map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < p.instructions.size(); ++i) {
    const auto& ins = p.instructions[i];
    if (ins.op != Opcode::Label) continue;
    if (!pos.emplace(ins.label, i).second) {
      throw MalformedProgram("label L" + std::to_string(ins.label) + " defined twice");
    }
  }
  return pos;
}

}  // namespace

void validate(const Program& program) {
  const auto labels = label_positions(program);
  if (labels.size() != program.depth) {
    throw MalformedProgram("depth " + std::to_string(program.depth) + " but " +
                           std::to_string(labels.size()) + " labels");
  }
  bool has_a = false, has_b = false;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    switch (ins.op) {
      case Opcode::Load:
        if (!valid_register(ins.a)) throw MalformedProgram("bad register at " + std::to_string(i));
        break;
      case Opcode::Add:
      case Opcode::Sub:
        if (!valid_register(ins.a) || !valid_register(ins.b)) {
          throw MalformedProgram("bad register at " + std::to_string(i));
        }
        break;
      case Opcode::Jz:
      case Opcode::Jnz:
        if (!valid_register(ins.a)) throw MalformedProgram("bad register at " + std::to_string(i));
        [[fallthrough]];
      case Opcode::Jmp: {
        auto it = labels.find(ins.label);
        if (it == labels.end()) {
          throw MalformedProgram("undefined label L" + std::to_string(ins.label));
        }
        if (it->second <= i) {
          throw MalformedProgram("backward jump at " + std::to_string(i));
        }
        break;
      }
      case Opcode::Label:
        break;
      case Opcode::Halt:
        (ins.halt == HaltState::A ? has_a : has_b) = true;
        break;
    }
  }
  if (!has_a || !has_b) throw MalformedProgram("program lacks HALT A or HALT B");
}

ExecutionResult interpret(const Program& program) {
  const auto labels = label_positions(program);
  const auto& code = program.instructions;
  std::array<std::uint8_t, kRegisterCount + 1> reg{};
  ExecutionResult result;
  result.executed.assign(code.size(), false);

  auto jump = [&](std::uint32_t label, std::size_t from) {
    auto it = labels.find(label);
    if (it == labels.end()) throw MalformedProgram("undefined label L" + std::to_string(label));
    if (it->second <= from) throw MalformedProgram("backward jump at " + std::to_string(from));
    return it->second;
  };

  std::size_t pc = 0;
  while (pc < code.size()) {
    const auto& ins = code[pc];
    result.executed[pc] = true;
    ++result.steps;
    std::size_t next = pc + 1;
    switch (ins.op) {
      case Opcode::Load: reg.at(ins.a) = ins.b; break;
      case Opcode::Add: reg.at(ins.a) = static_cast<std::uint8_t>(reg.at(ins.a) + reg.at(ins.b)); break;
      case Opcode::Sub: reg.at(ins.a) = static_cast<std::uint8_t>(reg.at(ins.a) - reg.at(ins.b)); break;
      case Opcode::Jz:
        if (reg.at(ins.a) == 0) next = jump(ins.label, pc);
        break;
      case Opcode::Jnz:
        if (reg.at(ins.a) != 0) next = jump(ins.label, pc);
        break;
      case Opcode::Jmp: next = jump(ins.label, pc); break;
      case Opcode::Label: break;
      case Opcode::Halt:
        result.halt = ins.halt;
        return result;
    }
    pc = next;
  }
  throw MalformedProgram("execution fell off the end without HALT");
}

// Generation ----------------------------------------------------------------

namespace {

std::uint32_t pick_target(Rng& rng, std::uint32_t block, std::uint32_t depth,
                          const GeneratorConfig& cfg) {
  // Block j >= 1 carries label j; the terminal carries label `depth`.
  if (rng.bernoulli(cfg.terminal_jump_p)) return depth;
  std::uint32_t distance = 1;
  while (!rng.bernoulli(cfg.distance_p) && block + distance < depth) ++distance;
  return std::min(block + distance, depth);
}

}  // namespace

Program generate_program(std::uint32_t depth, std::uint64_t seed, const GeneratorConfig& cfg) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  Rng rng(seed);
  Program p;
  p.depth = depth;
  p.seed = seed;
  auto& out = p.instructions;

  for (std::uint32_t block = 0; block < depth; ++block) {
    if (block > 0) out.push_back(Instruction::mark(block));
    const auto n_ops = static_cast<int>(rng.uniform(cfg.min_ops, cfg.max_ops));
    int last_dst = 1;
    for (int k = 0; k < n_ops; ++k) {
      const int dst = static_cast<int>(rng.uniform(1, kRegisterCount));
      switch (rng.uniform(0, 2)) {
        case 0:
          out.push_back(Instruction::load(dst, static_cast<std::uint8_t>(rng.uniform(0, cfg.max_immediate))));
          break;
        case 1:
          out.push_back(Instruction::add(dst, static_cast<int>(rng.uniform(1, kRegisterCount))));
          break;
        default:
          out.push_back(Instruction::sub(dst, static_cast<int>(rng.uniform(1, kRegisterCount))));
          break;
      }
      last_dst = dst;
    }
    const bool use_jz = rng.bernoulli(0.5);
    auto cond = [&](std::uint32_t label) {
      return use_jz ? Instruction::jz(last_dst, label) : Instruction::jnz(last_dst, label);
    };

    if (block + 1 < depth) {
      const std::uint32_t taken = pick_target(rng, block, depth, cfg);
      std::uint32_t other = taken;
      for (int tries = 0; tries < 8 && other == taken; ++tries) {
        other = pick_target(rng, block, depth, cfg);
      }
      if (other == taken) other = taken == depth ? block + 1 : taken + 1;
      out.push_back(cond(taken));
      out.push_back(Instruction::jmp(other));
    } else {
      const bool a_first = rng.bernoulli(0.5);
      out.push_back(cond(depth));
      out.push_back(Instruction::halt_in(a_first ? HaltState::A : HaltState::B));
      out.push_back(Instruction::mark(depth));
      out.push_back(Instruction::halt_in(a_first ? HaltState::B : HaltState::A));
    }
  }
  return p;
}

Program flip_halts(Program program) {
  for (auto& ins : program.instructions) {
    if (ins.op == Opcode::Halt) {
      ins.halt = ins.halt == HaltState::A ? HaltState::B : HaltState::A;
    }
  }
  return program;
}

// Text forms ----------------------------------------------------------------

namespace {

void append_instruction(std::string& out, const Instruction& ins) {
  out += to_string(ins.op);
  auto reg = [&](std::uint8_t r) {
    out += " R";
    out += std::to_string(r);
  };
  auto lab = [&](std::uint32_t l) {
    out += " L";
    out += std::to_string(l);
  };
  switch (ins.op) {
    case Opcode::Load:
      reg(ins.a);
      out += ' ';
      out += std::to_string(ins.b);
      break;
    case Opcode::Add:
    case Opcode::Sub:
      reg(ins.a);
      reg(ins.b);
      break;
    case Opcode::Jz:
    case Opcode::Jnz:
      reg(ins.a);
      lab(ins.label);
      break;
    case Opcode::Jmp:
    case Opcode::Label:
      lab(ins.label);
      break;
    case Opcode::Halt:
      out += ' ';
      out += to_char(ins.halt);
      break;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, T max, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v > max) {
    throw MalformedProgram("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::uint8_t parse_register(std::string_view s) {
  if (s.size() < 2 || s[0] != 'R') throw MalformedProgram("expected register, got '" + std::string(s) + "'");
  return parse_number<std::uint8_t>(s.substr(1), kRegisterCount, "register");
}

std::uint32_t parse_label(std::string_view s) {
  if (s.size() < 2 || s[0] != 'L') throw MalformedProgram("expected label, got '" + std::string(s) + "'");
  return parse_number<std::uint32_t>(s.substr(1), UINT32_MAX, "label");
}

Instruction parse_instruction(const std::vector<std::string_view>& t) {
  auto want = [&](std::size_t n) {
    if (t.size() != n) throw MalformedProgram("wrong operand count for " + std::string(t[0]));
  };
  const auto op = t[0];
  if (op == "LOAD") {
    want(3);
    return Instruction::load(parse_register(t[1]), parse_number<std::uint8_t>(t[2], 255, "immediate"));
  }
  if (op == "ADD") {
    want(3);
    return Instruction::add(parse_register(t[1]), parse_register(t[2]));
  }
  if (op == "SUB") {
    want(3);
    return Instruction::sub(parse_register(t[1]), parse_register(t[2]));
  }
  if (op == "JZ") {
    want(3);
    return Instruction::jz(parse_register(t[1]), parse_label(t[2]));
  }
  if (op == "JNZ") {
    want(3);
    return Instruction::jnz(parse_register(t[1]), parse_label(t[2]));
  }
  if (op == "JMP") {
    want(2);
    return Instruction::jmp(parse_label(t[1]));
  }
  if (op == "LABEL") {
    want(2);
    return Instruction::mark(parse_label(t[1]));
  }
  if (op == "HALT") {
    want(2);
    if (t[1] == "A") return Instruction::halt_in(HaltState::A);
    if (t[1] == "B") return Instruction::halt_in(HaltState::B);
    throw MalformedProgram("bad halt state '" + std::string(t[1]) + "'");
  }
  throw MalformedProgram("unknown opcode '" + std::string(op) + "'");
}

void finish(Program& p) {
  p.depth = static_cast<std::uint32_t>(std::count_if(
      p.instructions.begin(), p.instructions.end(),
      [](const Instruction& i) { return i.op == Opcode::Label; }));
}

}  // namespace

std::string serialize(const Program& program) {
  std::string out = "# seed " + std::to_string(program.seed) + "\n";
  for (const auto& ins : program.instructions) {
    append_instruction(out, ins);
    out += '\n';
  }
  return out;
}

Program parse(std::string_view text) {
  Program p;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "#") {
      if (toks.size() == 3 && toks[1] == "seed") {
        p.seed = parse_number<std::uint64_t>(toks[2], UINT64_MAX, "seed");
      }
      continue;
    }
    p.instructions.push_back(parse_instruction(toks));
  }
  finish(p);
  return p;
}

std::string token_stream(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    if (i) out += " ; ";
    append_instruction(out, program.instructions[i]);
  }
  return out;
}

Program parse_token_stream(std::string_view tokens) {
  Program p;
  std::vector<std::string_view> current;
  for (auto tok : split_ws(tokens)) {
    if (tok == ";") {
      if (current.empty()) throw MalformedProgram("empty instruction");
      p.instructions.push_back(parse_instruction(current));
      current.clear();
    } else {
      current.push_back(tok);
    }
  }
  if (!current.empty()) p.instructions.push_back(parse_instruction(current));
  finish(p);
  return p;
}

// Datasets ------------------------------------------------------------------

std::vector<Example> build_dataset(const DatasetOptions& options, DatasetSummary* summary) {
  if (options.max_depth < 1 || options.per_depth < 1) {
    throw InvalidArgument("max_depth and per_depth must be >= 1");
  }
  std::vector<Example> examples;
  examples.reserve(std::size_t{options.max_depth} * options.per_depth);
  for (std::uint32_t depth = 1; depth <= options.max_depth; ++depth) {
    for (std::uint32_t j = 0; j < options.per_depth; ++j) {
      const auto seed = derive_seed(options.seed, "frjt/program", (std::uint64_t{depth} << 32) | j);
      auto program = generate_program(depth, seed, options.generator);
      const auto run = interpret(program);
      examples.push_back({std::move(program), run.halt, run.coverage()});
    }
  }

  std::size_t flipped = 0;
  const auto count_a = static_cast<std::size_t>(std::count_if(
      examples.begin(), examples.end(), [](const Example& e) { return e.label == HaltState::A; }));
  const double frac = double(count_a) / double(examples.size());
  if (frac < kBalanceLow || frac > kBalanceHigh) {
    const HaltState majority = frac > 0.5 ? HaltState::A : HaltState::B;
    const std::size_t major_n = majority == HaltState::A ? count_a : examples.size() - count_a;
    const std::size_t to_flip = (2 * major_n - examples.size()) / 2;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (examples[i].label == majority) candidates.push_back(i);
    }
    // Partial Fisher-Yates: first `to_flip` entries are a uniform sample.
    Rng rng(derive_seed(options.seed, "frjt/balance"));
    for (std::size_t k = 0; k < to_flip; ++k) {
      std::swap(candidates[k], candidates[rng.uniform(k, candidates.size() - 1)]);
      auto& e = examples[candidates[k]];
      e.program = flip_halts(std::move(e.program));
      e.label = interpret(e.program).halt;
      ++flipped;
    }
  }

  if (summary) {
    *summary = {};
    summary->per_depth.resize(options.max_depth);
    for (const auto& e : examples) {
      for (auto* s : {&summary->total, &summary->per_depth[e.program.depth - 1]}) {
        ++s->examples;
        s->halt_a += e.label == HaltState::A;
        s->coverage_sum += e.coverage;
      }
    }
    summary->total.flipped = flipped;
    const double a = summary->total.a_fraction();
    const double c = summary->total.mean_coverage();
    if (a < kTargetALow || a > kTargetAHigh) {
      summary->warnings.push_back("a_fraction " + std::to_string(a) + " outside target band");
    }
    if (c < kTargetCoverageLow || c > kTargetCoverageHigh) {
      summary->warnings.push_back("mean_coverage " + std::to_string(c) + " outside target band");
    }
    if (flipped) {
      summary->warnings.push_back("rebalanced: flipped " + std::to_string(flipped) + " programs");
    }
  }
  return examples;
}

DatasetSummary emit_dataset(const DatasetOptions& options, const std::filesystem::path& path) {
  DatasetSummary summary;
  const auto examples = build_dataset(options, &summary);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    for (const auto& e : examples) {
      out << to_char(e.label) << '\t' << token_stream(e.program) << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
  }
  auto stats_path = path;
  stats_path += ".stats";
  std::ofstream st(stats_path);
  if (!st) throw DataError("cannot open " + stats_path.string());
  st << "seed=" << options.seed << '\n'
     << "max_depth=" << options.max_depth << '\n'
     << "per_depth=" << options.per_depth << '\n'
     << "examples=" << summary.total.examples << '\n'
     << "a_fraction=" << summary.total.a_fraction() << '\n'
     << "mean_coverage=" << summary.total.mean_coverage() << '\n'
     << "flipped=" << summary.total.flipped << '\n';
  for (std::size_t d = 0; d < summary.per_depth.size(); ++d) {
    const auto& s = summary.per_depth[d];
    st << "depth" << d + 1 << ".a_fraction=" << s.a_fraction() << '\n'
       << "depth" << d + 1 << ".mean_coverage=" << s.mean_coverage() << '\n';
  }
  for (std::size_t i = 0; i < summary.warnings.size(); ++i) {
    st << "warning" << i << '=' << summary.warnings[i] << '\n';
  }
  return summary;
}

}  // namespace termforge::frjt
