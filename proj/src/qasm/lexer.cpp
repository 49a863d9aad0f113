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

#include "lexer.hpp"

#include <cctype>

#include "dqcsim/errors.hpp"

namespace dqcsim::qasm::detail {

void fail(const SourceLoc &loc, const std::string &message) {
    throw ParseError(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message,
                     loc.line, loc.column);
}

std::string describe(const Token &t) {
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::String:
        return "\"" + t.text + "\"";
    default:
        return "'" + t.text + "'";
    }
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](std::size_t off = 0) -> char { return i + off < src.size() ? src[i + off] : '\0'; };

    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance();
            }
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            const SourceLoc start{line, col};
            advance(2);
            while (i < src.size() && !(src[i] == '*' && peek(1) == '/')) {
                advance();
            }
            if (i >= src.size()) {
                fail(start, "unterminated block comment");
            }
            advance(2);
            continue;
        }
        const SourceLoc loc{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            std::size_t j = i;
            bool real = false;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            if (j < src.size() && src[j] == '.') {
                real = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                }
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) {
                    ++k;
                }
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    real = true;
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                        ++j;
                    }
                }
            }
            out.push_back({real ? Tok::Real : Tok::Integer, std::string(src.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') {
                ++j;
            }
            if (j >= src.size() || src[j] != '"') {
                fail(loc, "unterminated string literal");
            }
            out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), loc});
            advance(j + 1 - i);
            continue;
        }
        if ((c == '-' && peek(1) == '>') || (c == '=' && peek(1) == '=')) {
            out.push_back({Tok::Symbol, std::string(src.substr(i, 2)), loc});
            advance(2);
            continue;
        }
        static constexpr std::string_view kSymbols = ";,()[]{}+-*/^";
        if (kSymbols.find(c) != std::string_view::npos) {
            out.push_back({Tok::Symbol, std::string(1, c), loc});
            advance();
            continue;
        }
        fail(loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", SourceLoc{line, col}});
    return out;
}

} // namespace dqcsim::qasm::detail
