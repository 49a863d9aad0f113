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
#include <cmath>
#include <set>

#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"
#include "lexer.hpp"

namespace dqcsim::qasm {

using detail::describe;
using detail::fail;
using detail::Tok;
using detail::Token;

int QasmProgram::num_qubits() const {
    int n = 0;
    for (const auto &r : qregs) {
        n += r.size;
    }
    return n;
}

int QasmProgram::num_cbits() const {
    int n = 0;
    for (const auto &r : cregs) {
        n += r.size;
    }
    return n;
}

double evaluate(const Expr &e, const std::map<std::string, double> &env) {
    switch (e.kind) {
    case Expr::Kind::Number:
        return e.value;
    case Expr::Kind::Pi:
        return M_PI;
    case Expr::Kind::Ident: {
        auto it = env.find(e.name);
        if (it == env.end()) {
            fail(e.loc, "unsupported construct: non-constant parameter '" + e.name + "'");
        }
        return it->second;
    }
    case Expr::Kind::Neg:
        return -evaluate(*e.args[0], env);
    case Expr::Kind::Binary: {
        const double a = evaluate(*e.args[0], env), b = evaluate(*e.args[1], env);
        switch (e.op) {
        case '+':
            return a + b;
        case '-':
            return a - b;
        case '*':
            return a * b;
        case '/':
            return a / b;
        case '^':
            return std::pow(a, b);
        }
        break;
    }
    case Expr::Kind::Call: {
        const double a = evaluate(*e.args[0], env);
        if (e.name == "sin") return std::sin(a);
        if (e.name == "cos") return std::cos(a);
        if (e.name == "tan") return std::tan(a);
        if (e.name == "exp") return std::exp(a);
        if (e.name == "ln") return std::log(a);
        if (e.name == "sqrt") return std::sqrt(a);
        break;
    }
    }
    fail(e.loc, "malformed expression");
}

namespace {

const std::set<std::string> kFunctions = {"sin", "cos", "tan", "exp", "ln", "sqrt"};

struct Signature {
    std::size_t params;
    std::size_t qargs;
};

class Parser {
  public:
    Parser(std::vector<Token> tokens, QasmProgram &prog, bool qelib1)
        : toks_(std::move(tokens)), prog_(prog), qelib1_(qelib1) {}

    void parse_program() {
        if (peek_ident("OPENQASM")) {
            parse_header();
        }
        while (cur().kind != Tok::End) {
            parse_statement();
        }
    }

    ExprPtr parse_standalone_expr() {
        auto e = parse_expr();
        if (cur().kind != Tok::End) {
            unexpected("end of expression");
        }
        return e;
    }

  private:
    const Token &cur() const { return toks_[pos_]; }
    const Token &next() { return toks_[pos_++]; }

    bool peek_symbol(std::string_view s) const { return cur().kind == Tok::Symbol && cur().text == s; }
    bool peek_ident(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }

    [[noreturn]] void unexpected(const std::string &expected) const {
        fail(cur().loc, "expected " + expected + " but found " + describe(cur()));
    }

    void expect_symbol(std::string_view s) {
        if (!peek_symbol(s)) {
            unexpected("'" + std::string(s) + "'");
        }
        ++pos_;
    }

    const Token &expect_ident(const char *what) {
        if (cur().kind != Tok::Ident) {
            unexpected(what);
        }
        return next();
    }

    int expect_integer(const char *what) {
        if (cur().kind != Tok::Integer) {
            unexpected(what);
        }
        const Token &t = next();
        if (t.text.size() > 9) {
            fail(t.loc, std::string(what) + " " + t.text + " is too large");
        }
        return std::stoi(t.text);
    }

    void parse_header() {
        const Token &kw = next();
        if (cur().kind != Tok::Real && cur().kind != Tok::Integer) {
            unexpected("a version number");
        }
        const Token &v = next();
        if (v.text != "2.0" && v.text != "2") {
            fail(v.loc, "unsupported construct: OPENQASM version " + v.text + " (only 2.0 is accepted)");
        }
        (void)kw;
        expect_symbol(";");
    }

    void parse_statement() {
        const Token &t = cur();
        if (t.kind != Tok::Ident) {
            unexpected("a statement");
        }
        if (t.text == "OPENQASM") {
            fail(t.loc, "the OPENQASM header must be the first statement");
        }
        if (t.text == "if" || t.text == "opaque" || t.text == "reset") {
            fail(t.loc, "unsupported construct: '" + t.text + "'");
        }
        if (t.text == "include") {
            parse_include();
        } else if (t.text == "qreg" || t.text == "creg") {
            parse_register();
        } else if (t.text == "gate") {
            parse_gate_def();
        } else if (t.text == "measure") {
            parse_measure();
        } else if (t.text == "barrier") {
            parse_barrier();
        } else {
            GateCall call = parse_call();
            check_top_level_call(call);
            prog_.statements.emplace_back(std::move(call));
        }
    }

    void parse_include() {
        const Token &kw = next();
        if (cur().kind != Tok::String) {
            unexpected("a file name string");
        }
        const Token &file = next();
        expect_symbol(";");
        if (file.text != "qelib1.inc") {
            fail(kw.loc, "unsupported construct: include \"" + file.text +
                             "\" (only qelib1.inc is built in)");
        }
        if (prog_.includes_qelib1) {
            return;
        }
        prog_.includes_qelib1 = true;
        Parser lib(detail::tokenize(qelib1_source()), prog_, true);
        lib.parse_program();
    }

    void parse_register() {
        const Token &kw = next();
        const Token &name = expect_ident("a register name");
        expect_symbol("[");
        const SourceLoc size_loc = cur().loc;
        const int size = expect_integer("a register size");
        expect_symbol("]");
        expect_symbol(";");
        if (size <= 0) {
            fail(size_loc, "register '" + name.text + "' must have a positive size");
        }
        if (find_reg(prog_.qregs, name.text) || find_reg(prog_.cregs, name.text)) {
            fail(name.loc, "register '" + name.text + "' is already declared");
        }
        auto &regs = kw.text == "qreg" ? prog_.qregs : prog_.cregs;
        regs.push_back({name.text, size, name.loc});
    }

    static const Register *find_reg(const std::vector<Register> &regs, const std::string &name) {
        for (const auto &r : regs) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }

    std::vector<std::string> parse_id_list(const char *what) {
        std::vector<std::string> ids;
        ids.push_back(expect_ident(what).text);
        while (peek_symbol(",")) {
            ++pos_;
            ids.push_back(expect_ident(what).text);
        }
        return ids;
    }

    void parse_gate_def() {
        next(); // 'gate'
        GateDef def;
        const Token &name = expect_ident("a gate name");
        def.name = name.text;
        def.loc = name.loc;
        def.from_qelib1 = qelib1_;
        if (def.name == "U" || def.name == "CX" || prog_.gates.count(def.name)) {
            fail(name.loc, "gate '" + def.name + "' is already defined");
        }
        if (peek_symbol("(")) {
            ++pos_;
            if (!peek_symbol(")")) {
                def.params = parse_id_list("a parameter name");
            }
            expect_symbol(")");
        }
        def.qargs = parse_id_list("a qubit argument name");
        auto check_unique = [&](const std::vector<std::string> &names, const char *what) {
            std::set<std::string> seen;
            for (const auto &n : names) {
                if (!seen.insert(n).second) {
                    fail(name.loc, std::string("duplicate ") + what + " '" + n + "' in gate '" + def.name + "'");
                }
            }
        };
        check_unique(def.params, "parameter");
        check_unique(def.qargs, "qubit argument");
        expect_symbol("{");
        while (!peek_symbol("}")) {
            if (cur().kind == Tok::End) {
                unexpected("'}'");
            }
            if (peek_ident("barrier")) {
                next();
                parse_id_list("a qubit argument name");
                expect_symbol(";");
                continue;
            }
            if (peek_ident("measure") || peek_ident("reset") || peek_ident("if") || peek_ident("opaque")) {
                fail(cur().loc, "unsupported construct: '" + cur().text + "' inside a gate body");
            }
            GateCall call = parse_call();
            for (const auto &a : call.args) {
                if (a.index) {
                    fail(a.loc, "indexed argument '" + a.reg + "[" + std::to_string(*a.index) +
                                    "]' is not allowed inside a gate body");
                }
                if (std::find(def.qargs.begin(), def.qargs.end(), a.reg) == def.qargs.end()) {
                    fail(a.loc, "'" + a.reg + "' is not an argument of gate '" + def.name + "'");
                }
            }
            for (const auto &p : call.params) {
                check_body_expr(*p, def);
            }
            def.body.push_back(std::move(call));
        }
        expect_symbol("}");
        prog_.gates.emplace(def.name, std::move(def));
    }

    void check_body_expr(const Expr &e, const GateDef &def) {
        if (e.kind == Expr::Kind::Ident &&
            std::find(def.params.begin(), def.params.end(), e.name) == def.params.end()) {
            fail(e.loc, "'" + e.name + "' is not a parameter of gate '" + def.name + "'");
        }
        for (const auto &a : e.args) {
            check_body_expr(*a, def);
        }
    }

    Argument parse_argument() {
        Argument a;
        const Token &name = expect_ident("a register");
        a.reg = name.text;
        a.loc = name.loc;
        if (peek_symbol("[")) {
            ++pos_;
            a.index = expect_integer("an index");
            expect_symbol("]");
        }
        return a;
    }

    GateCall parse_call() {
        GateCall call;
        const Token &name = expect_ident("a gate name");
        call.name = name.text;
        call.loc = name.loc;
        if (peek_symbol("(")) {
            ++pos_;
            if (!peek_symbol(")")) {
                call.params.push_back(parse_expr());
                while (peek_symbol(",")) {
                    ++pos_;
                    call.params.push_back(parse_expr());
                }
            }
            expect_symbol(")");
        }
        call.args.push_back(parse_argument());
        while (peek_symbol(",")) {
            ++pos_;
            call.args.push_back(parse_argument());
        }
        expect_symbol(";");
        return call;
    }

    std::optional<Signature> signature(const std::string &name) const {
        if (name == "U") {
            return Signature{3, 1};
        }
        if (name == "CX") {
            return Signature{0, 2};
        }
        auto it = prog_.gates.find(name);
        if (it == prog_.gates.end()) {
            return std::nullopt;
        }
        return Signature{it->second.params.size(), it->second.qargs.size()};
    }

    // Size of the argument (1 for an indexed qubit, register size otherwise).
    int check_argument(const Argument &a, const std::vector<Register> &regs, const char *kind) {
        const Register *r = find_reg(regs, a.reg);
        if (!r) {
            fail(a.loc, std::string("undeclared ") + kind + " register '" + a.reg + "'");
        }
        if (a.index && (*a.index < 0 || *a.index >= r->size)) {
            fail(a.loc, "index " + std::to_string(*a.index) + " is out of range for register '" +
                            a.reg + "' of size " + std::to_string(r->size));
        }
        return a.index ? 1 : r->size;
    }

    void check_broadcast(const std::vector<Argument> &args, const std::vector<int> &sizes,
                         const SourceLoc &loc) {
        int width = 0;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i].index) {
                continue;
            }
            if (width == 0) {
                width = sizes[i];
            } else if (sizes[i] != width) {
                fail(loc, "register arguments of different sizes cannot be broadcast together");
            }
        }
    }

    void check_top_level_call(const GateCall &call) {
        std::vector<int> sizes;
        for (const auto &a : call.args) {
            sizes.push_back(check_argument(a, prog_.qregs, "quantum"));
        }
        const auto sig = signature(call.name);
        if (!sig) {
            std::string hint = prog_.includes_qelib1 ? "" : " (missing include \"qelib1.inc\"?)";
            fail(call.loc, "unknown gate '" + call.name + "'" + hint);
        }
        if (call.params.size() != sig->params) {
            fail(call.loc, "gate '" + call.name + "' takes " + std::to_string(sig->params) +
                               " parameter(s), got " + std::to_string(call.params.size()));
        }
        if (call.args.size() != sig->qargs) {
            fail(call.loc, "gate '" + call.name + "' takes " + std::to_string(sig->qargs) +
                               " qubit argument(s), got " + std::to_string(call.args.size()));
        }
        check_broadcast(call.args, sizes, call.loc);
        for (std::size_t i = 0; i < call.args.size(); ++i) {
            for (std::size_t j = i + 1; j < call.args.size(); ++j) {
                const auto &a = call.args[i], &b = call.args[j];
                if (a.reg == b.reg && (!a.index || !b.index || *a.index == *b.index)) {
                    fail(b.loc, "gate '" + call.name + "' repeats qubit argument '" + b.reg + "'");
                }
            }
        }
    }

    void parse_measure() {
        const Token &kw = next();
        MeasureStmt m;
        m.loc = kw.loc;
        m.qubit = parse_argument();
        expect_symbol("->");
        m.cbit = parse_argument();
        expect_symbol(";");
        const int qs = check_argument(m.qubit, prog_.qregs, "quantum");
        const int cs = check_argument(m.cbit, prog_.cregs, "classical");
        if (m.qubit.index.has_value() != m.cbit.index.has_value() || qs != cs) {
            fail(m.loc, "measure operands must both be single bits or registers of equal size");
        }
        prog_.statements.emplace_back(std::move(m));
    }

    void parse_barrier() {
        const Token &kw = next();
        BarrierStmt b;
        b.loc = kw.loc;
        b.args.push_back(parse_argument());
        while (peek_symbol(",")) {
            ++pos_;
            b.args.push_back(parse_argument());
        }
        expect_symbol(";");
        for (const auto &a : b.args) {
            check_argument(a, prog_.qregs, "quantum");
        }
        prog_.statements.emplace_back(std::move(b));
    }

    // Expressions: + - (left), * / (left), unary minus, ^ (right), primaries.
    ExprPtr parse_expr() {
        auto lhs = parse_term();
        while (peek_symbol("+") || peek_symbol("-")) {
            const Token &op = next();
            lhs = binary(op, lhs, parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        auto lhs = parse_unary();
        while (peek_symbol("*") || peek_symbol("/")) {
            const Token &op = next();
            lhs = binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (peek_symbol("-")) {
            const Token &op = next();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Neg;
            e->loc = op.loc;
            e->args.push_back(parse_unary());
            return e;
        }
        if (peek_symbol("+")) {
            ++pos_;
            return parse_unary();
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        auto base = parse_primary();
        if (peek_symbol("^")) {
            const Token &op = next();
            return binary(op, base, parse_unary());
        }
        return base;
    }

    ExprPtr parse_primary() {
        const Token &t = cur();
        auto e = std::make_shared<Expr>();
        e->loc = t.loc;
        if (t.kind == Tok::Integer || t.kind == Tok::Real) {
            next();
            e->kind = Expr::Kind::Number;
            e->value = std::stod(t.text);
            return e;
        }
        if (t.kind == Tok::Ident) {
            next();
            if (t.text == "pi") {
                e->kind = Expr::Kind::Pi;
                return e;
            }
            if (kFunctions.count(t.text)) {
                e->kind = Expr::Kind::Call;
                e->name = t.text;
                expect_symbol("(");
                e->args.push_back(parse_expr());
                expect_symbol(")");
                return e;
            }
            e->kind = Expr::Kind::Ident;
            e->name = t.text;
            return e;
        }
        if (peek_symbol("(")) {
            next();
            auto inner = parse_expr();
            expect_symbol(")");
            return inner;
        }
        unexpected("an expression");
    }

    static ExprPtr binary(const Token &op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Binary;
        e->op = op.text[0];
        e->loc = op.loc;
        e->args = {std::move(lhs), std::move(rhs)};
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    QasmProgram &prog_;
    bool qelib1_;
};

} // namespace

QasmProgram parse_qasm(std::string_view source) {
    QasmProgram prog;
    Parser p(detail::tokenize(source), prog, false);
    p.parse_program();
    return prog;
}

double evaluate_constant(std::string_view text) {
    QasmProgram scratch;
    Parser p(detail::tokenize(text), scratch, false);
    return evaluate(*p.parse_standalone_expr(), {});
}

} // namespace dqcsim::qasm
