// Copyright 2026 The dqcsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dqcsim/qasm/qasm.hpp"

namespace dqcsim::qasm::detail {

enum class Tok { Ident, Integer, Real, String, Symbol, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

/// Splits QASM source into tokens; `//` and `/* */` comments are skipped.
std::vector<Token> tokenize(std::string_view source);

[[noreturn]] void fail(const SourceLoc &loc, const std::string &message);

std::string describe(const Token &t);

} // namespace dqcsim::qasm::detail
