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

/**
 * @file
 * OpenQASM 2.0 front end: lexer, recursive-descent parser and lowering of a
 * parsed program into a monolithic circuit over the builtin gate set.
 *
 * Supported: the version header, `include "qelib1.inc"` (served from a
 * builtin copy), qreg/creg, U/CX, the qelib1 gates, user gate macros,
 * measure, barrier and comments. `if`, `opaque` and `reset` are rejected.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dqcsim/circuit/circuit.hpp"

namespace dqcsim::qasm {

struct SourceLoc {
    int line = 1;
    int column = 1;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Pi, Ident, Neg, Binary, Call };
    Kind kind = Kind::Number;
    double value = 0;
    std::string name; // identifier or function name
    char op = 0;      // + - * / ^
    std::vector<ExprPtr> args;
    SourceLoc loc;
};

/// Evaluates with identifiers bound by `env`; unknown identifiers throw ParseError.
double evaluate(const Expr &expr, const std::map<std::string, double> &env);

/// Parses and evaluates a standalone constant expression such as "pi/2" or "sqrt(1/2)".
double evaluate_constant(std::string_view text);

struct Argument {
    std::string reg;
    std::optional<int> index;
    SourceLoc loc;
};

struct GateCall {
    std::string name;
    std::vector<ExprPtr> params;
    std::vector<Argument> args;
    SourceLoc loc;
};

struct MeasureStmt {
    Argument qubit;
    Argument cbit;
    SourceLoc loc;
};

struct BarrierStmt {
    std::vector<Argument> args;
    SourceLoc loc;
};

using Statement = std::variant<GateCall, MeasureStmt, BarrierStmt>;

struct GateDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> qargs;
    std::vector<GateCall> body;
    SourceLoc loc;
    bool from_qelib1 = false;
};

struct Register {
    std::string name;
    int size = 0;
    SourceLoc loc;
};

struct QasmProgram {
    std::vector<Register> qregs;
    std::vector<Register> cregs;
    std::map<std::string, GateDef> gates;
    std::vector<Statement> statements;
    bool includes_qelib1 = false;

    int num_qubits() const;
    int num_cbits() const;
};

/// Full parse and semantic check. Throws ParseError with line/column.
QasmProgram parse_qasm(std::string_view source);

struct LoweringReport {
    std::size_t barriers_dropped = 0;
};

/// Flattens registers in declaration order, expands macros and broadcasts,
/// folds parameters to reals and drops barriers.
circuit::MonolithicCircuit lower_to_circuit(const QasmProgram &program, LoweringReport *report = nullptr);

/// OpenQASM 2.0 text that reparses to the same circuit (registers q and c).
std::string unparse(const circuit::MonolithicCircuit &circuit);

/// Tuple listing, one gate per line: "(H,0)", "(CNOT,0,1)", "(MEASURE,0,c0)".
std::string dump(const circuit::MonolithicCircuit &circuit);

/// The builtin qelib1.inc served for `include "qelib1.inc";`.
std::string_view qelib1_source();

} // namespace dqcsim::qasm
