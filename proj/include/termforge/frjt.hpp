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

// Forward-Referencing Jumps Task: straight-line register programs whose only
// jumps go forward, so the halt state can only be found by walking the
// program in order.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "termforge/common.hpp"

namespace termforge::frjt {

inline constexpr int kRegisterCount = 4;

enum class Opcode : std::uint8_t { Load, Add, Sub, Jz, Jnz, Jmp, Label, Halt };
enum class HaltState : std::uint8_t { A, B };

std::string_view to_string(Opcode op);
char to_char(HaltState s);

/// One instruction. Operand meaning depends on the opcode:
///   LOAD  dst imm      ADD/SUB dst src     JZ/JNZ reg label
///   JMP   label        LABEL label         HALT state
/// Registers are 1-based (R1..R4); labels are 1-based (L1..Ld).
struct Instruction {
  Opcode op = Opcode::Halt;
  std::uint8_t a = 0;    // dst / tested register
  std::uint8_t b = 0;    // src register or immediate
  std::uint32_t label = 0;
  HaltState halt = HaltState::A;

  static Instruction load(int reg, std::uint8_t imm) { return {Opcode::Load, u8(reg), imm, 0, {}}; }
  static Instruction add(int dst, int src) { return {Opcode::Add, u8(dst), u8(src), 0, {}}; }
  static Instruction sub(int dst, int src) { return {Opcode::Sub, u8(dst), u8(src), 0, {}}; }
  static Instruction jz(int reg, std::uint32_t l) { return {Opcode::Jz, u8(reg), 0, l, {}}; }
  static Instruction jnz(int reg, std::uint32_t l) { return {Opcode::Jnz, u8(reg), 0, l, {}}; }
  static Instruction jmp(std::uint32_t l) { return {Opcode::Jmp, 0, 0, l, {}}; }
  static Instruction mark(std::uint32_t l) { return {Opcode::Label, 0, 0, l, {}}; }
  static Instruction halt_in(HaltState s) { return {Opcode::Halt, 0, 0, 0, s}; }

  bool is_jump() const { return op == Opcode::Jz || op == Opcode::Jnz || op == Opcode::Jmp; }

  friend bool operator==(const Instruction&, const Instruction&) = default;

 private:
  static std::uint8_t u8(int v) { return static_cast<std::uint8_t>(v); }
};

struct Program {
  std::vector<Instruction> instructions;
  std::uint32_t depth = 0;  // number of LABEL instructions
  std::uint64_t seed = 0;

  friend bool operator==(const Program&, const Program&) = default;
};

struct ExecutionResult {
  HaltState halt = HaltState::A;
  std::vector<bool> executed;  // one flag per instruction
  std::size_t steps = 0;

  double coverage() const;
};

/// Raised when a program violates its structural invariants or runs off the
/// end without reaching HALT.
class MalformedProgram : public DataError {
 public:
  using DataError::DataError;
};

/// Throws MalformedProgram unless every label is defined once, every jump is
/// forward, registers are in range and depth matches the label count.
void validate(const Program& program);

ExecutionResult interpret(const Program& program);

/// Tunables of the generator. Defaults satisfy the balance and coverage bands.
struct GeneratorConfig {
  int min_ops = 1;
  int max_ops = 3;
  std::uint8_t max_immediate = 3;
  double distance_p = 0.5;        // geometric law over forward block distance
  double terminal_jump_p = 0.08;  // chance of jumping straight to the end
};

/// Program with `depth` blocks and `depth` labels. Block 0 is the unlabeled
/// entry; blocks 1..depth-1 start with LABEL; each non-final block ends in a
/// conditional jump and a JMP. The final block ends in a conditional jump to
/// the terminal label and falls through otherwise:
///
///   ... JZ R2 L<depth> ; HALT x ; LABEL L<depth> ; HALT y
///
/// with {x, y} = {A, B} in random order.
Program generate_program(std::uint32_t depth, std::uint64_t seed,
                         const GeneratorConfig& config = {});

/// Line-oriented text, one instruction per line ("JZ R1 L3"). A leading
/// "# seed N" line carries the generation seed.
std::string serialize(const Program& program);
Program parse(std::string_view text);

/// Flat token stream for datasets: instructions joined by " ; ".
std::string token_stream(const Program& program);
Program parse_token_stream(std::string_view tokens);

/// Swaps HALT A and HALT B everywhere; the executed path is unchanged so the
/// label flips.
Program flip_halts(Program program);

struct DatasetStats {
  std::size_t examples = 0;
  std::size_t halt_a = 0;
  double coverage_sum = 0;
  std::size_t flipped = 0;

  double a_fraction() const { return examples ? double(halt_a) / examples : 0.0; }
  double mean_coverage() const { return examples ? coverage_sum / examples : 0.0; }
};

struct DatasetSummary {
  DatasetStats total;
  std::vector<DatasetStats> per_depth;  // index 0 is depth 1
  std::vector<std::string> warnings;
};

struct DatasetOptions {
  std::uint32_t max_depth = 8;
  std::uint32_t per_depth = 8000;
  std::uint64_t seed = 0;
  GeneratorConfig generator{};
};

struct Example {
  Program program;
  HaltState label;
  double coverage;
};

/// Generates the dataset in memory, applying the balance correction.
std::vector<Example> build_dataset(const DatasetOptions& options, DatasetSummary* summary);

/// Writes `label<TAB>tokens` records to `path` and `path.stats` key-value
/// statistics. Returns the summary.
DatasetSummary emit_dataset(const DatasetOptions& options, const std::filesystem::path& path);

inline constexpr double kBalanceLow = 0.45;
inline constexpr double kBalanceHigh = 0.55;
inline constexpr double kTargetALow = 0.47;
inline constexpr double kTargetAHigh = 0.53;
inline constexpr double kTargetCoverageLow = 0.40;
inline constexpr double kTargetCoverageHigh = 0.60;

}  // namespace termforge::frjt
