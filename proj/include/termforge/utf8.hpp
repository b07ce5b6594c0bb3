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

#include <optional>
#include <string>
#include <string_view>

namespace termforge::utf8 {

/// Strict decoder: rejects overlong forms, surrogates and values above
/// U+10FFFF, so encode(*decode(s)) == s whenever decode succeeds.
std::optional<std::u32string> decode(std::string_view bytes);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

/// Length in bytes of the sequence starting with `lead`, 0 if `lead` cannot
/// start a sequence.
int sequence_length(unsigned char lead);

}  // namespace termforge::utf8
