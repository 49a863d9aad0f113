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

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "dqcsim/circuit/circuit.hpp"
#include "dqcsim/errors.hpp"

namespace dqcsim::circuit {

namespace {

struct Word {
    std::string text;
    int column;
};

[[noreturn]] void fail(int line, int column, const std::string &msg) {
    throw ParseError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg, line, column);
}

// Whitespace-separated words; a parenthesized group stays attached to the word before it.
std::vector<Word> split_words(std::string_view line, int lineno) {
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        int depth = 0;
        while (i < line.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(line[i])))) {
            if (line[i] == '(') {
                ++depth;
            } else if (line[i] == ')') {
                --depth;
            }
            ++i;
        }
        if (depth != 0) {
            fail(lineno, static_cast<int>(start) + 1, "unbalanced parentheses");
        }
        out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return out;
}

bool parse_int(const std::string &s, int &out) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return false;
    }
    out = std::stoi(s);
    return true;
}

GateSpec parse_gate_word(const Word &w, int lineno) {
    const auto open = w.text.find('(');
    const std::string name = w.text.substr(0, open);
    auto kind = qstate::gate_kind_from_name(name);
    if (!kind) {
        fail(lineno, w.column, "unknown gate '" + name + "'");
    }
    std::vector<double> params;
    if (open != std::string::npos) {
        if (w.text.back() != ')') {
            fail(lineno, w.column, "malformed parameter list in '" + w.text + "'");
        }
        std::string inner = w.text.substr(open + 1, w.text.size() - open - 2);
        std::size_t pos = 0;
        while (pos <= inner.size()) {
            const auto comma = inner.find(',', pos);
            std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            char *end = nullptr;
            const double v = std::strtod(item.c_str(), &end);
            if (item.empty() || *end != '\0') {
                fail(lineno, w.column, "bad parameter '" + item + "'");
            }
            params.push_back(v);
            if (comma == std::string::npos) {
                break;
            }
            pos = comma + 1;
        }
    }
    if (params.size() != qstate::param_count(*kind)) {
        fail(lineno, w.column, name + " takes " + std::to_string(qstate::param_count(*kind)) +
                                   " parameter(s), got " + std::to_string(params.size()));
    }
    return GateSpec{*kind, std::move(params)};
}

} // namespace

DistributedCircuit parse_distributed(std::string_view text) {
    DistributedCircuit out;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto words = split_words(line, lineno);
        if (words.empty()) {
            continue;
        }
        DistributedGate g;
        g.gate = parse_gate_word(words[0], lineno);
        std::size_t i = 1;
        for (; i < words.size(); ++i) {
            const auto &w = words[i];
            const auto at = w.text.find('@');
            if (at == std::string::npos) {
                break;
            }
            Address a;
            auto node = hardware::parse_node_name(w.text.substr(at + 1));
            if (!parse_int(w.text.substr(0, at), a.position) || !node) {
                fail(lineno, w.column, "malformed operand '" + w.text + "' (expected pos@node_k)");
            }
            a.node = *node;
            g.operands.push_back(a);
        }
        if (g.operands.empty()) {
            fail(lineno, words[0].column, "gate " + words[0].text + " has no operands");
        }
        if (i < words.size() && words[i].text != "->") {
            g.scheme = parse_scheme(words[i].text);
            if (!g.scheme) {
                fail(lineno, words[i].column,
                     "unknown remote gate type '" + words[i].text + "' (expected cat, 1tp, 2tp or tp_safe)");
            }
            ++i;
        }
        if (i < words.size() && words[i].text == "->") {
            int bit = 0;
            if (i + 1 >= words.size() || words[i + 1].text.size() < 2 || words[i + 1].text[0] != 'c' ||
                !parse_int(words[i + 1].text.substr(1), bit)) {
                fail(lineno, words[i].column, "expected a classical bit such as c0 after '->'");
            }
            g.cbit = bit;
            i += 2;
        }
        if (i < words.size()) {
            fail(lineno, words[i].column, "unexpected '" + words[i].text + "'");
        }
        if (g.gate.kind == GateKind::Measure && !g.cbit) {
            fail(lineno, words[0].column, "MEASURE needs a classical bit (-> c<k>)");
        }
        if (g.gate.kind != GateKind::Measure && g.cbit) {
            fail(lineno, words[0].column, "only MEASURE writes a classical bit");
        }
        out.gates.push_back(std::move(g));
    }
    return out;
}

std::string format_distributed(const DistributedCircuit &circuit) {
    std::string out;
    for (const auto &g : circuit.gates) {
        out += g.gate.to_string();
        for (const auto &a : g.operands) {
            out += " " + to_string(a);
        }
        if (g.scheme) {
            out += " " + std::string(scheme_name(*g.scheme));
        }
        if (g.cbit) {
            out += " -> c" + std::to_string(*g.cbit);
        }
        out += "\n";
    }
    return out;
}

} // namespace dqcsim::circuit
