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

// Reference implementations used by unit tests and the acceptance binary.
// They share no code with the library paths they check.

#include <string>
#include <vector>

#include "termforge/common.hpp"
#include "termforge/maze.hpp"
#include "termforge/tszx.hpp"

namespace termforge::testing {

/// Runs a serialized FRJT program by re-tokenizing its lines and scanning
/// forward for labels. Returns the HALT letter; `visits` counts executions per
/// instruction line. Throws std::runtime_error on a missing label or when the
/// program falls off the end.
char frjt_naive_run(const std::string& text, std::vector<int>* visits = nullptr);

/// Checks a simulated trajectory against the raw wall bitmap: positions stay
/// in bounds and on open cells, and each step moves exactly when the target
/// cell is open. Returns an empty string or a description of the first fault.
std::string maze_trajectory_fault(const maze::Maze& m, const std::vector<maze::Direction>& intents,
                                  const maze::Trajectory& t);

/// Random frame stream mixing unchanged, repeated and fresh cells, occasional
/// solid rows, wide codepoints and styled cells.
tszx::Stream random_stream(Rng& rng);

}  // namespace termforge::testing
