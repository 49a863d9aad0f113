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

#include <map>
#include <set>

#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"
#include "lexer.hpp"

namespace dqcsim::qasm {

using circuit::MonolithicCircuit;
using circuit::MonolithicGate;
using qstate::GateKind;
using detail::fail;

namespace {

// qelib1 gates that map one-to-one onto a builtin gate.
const std::map<std::string, GateKind> kDirect = {
    {"u3", GateKind::U}, {"u", GateKind::U},     {"h", GateKind::H},     {"x", GateKind::X},
    {"y", GateKind::Y},  {"z", GateKind::Z},     {"s", GateKind::S},     {"t", GateKind::T},
    {"rx", GateKind::RX}, {"ry", GateKind::RY},  {"rz", GateKind::RZ},   {"cx", GateKind::CNOT},
    {"cz", GateKind::CZ}, {"swap", GateKind::SWAP},
};

std::map<std::string, int> offsets(const std::vector<Register> &regs) {
    std::map<std::string, int> out;
    int next = 0;
    for (const auto &r : regs) {
        out[r.name] = next;
        next += r.size;
    }
    return out;
}

class Lowerer {
  public:
    explicit Lowerer(const QasmProgram &p) : prog_(p) {}

    void emit(const GateCall &call, const std::string &name, const std::vector<double> &params,
              const std::vector<int> &qubits) {
        if (name == "U" || name == "CX") {
            const GateKind k = name == "U" ? GateKind::U : GateKind::CNOT;
            check_counts(call, name, params.size(), qubits.size(), name == "U" ? 3 : 0, name == "U" ? 1 : 2);
            push(k, params, qubits);
            return;
        }
        auto it = prog_.gates.find(name);
        if (it == prog_.gates.end()) {
            fail(call.loc, "unknown gate '" + name + "'");
        }
        const GateDef &def = it->second;
        check_counts(call, name, params.size(), qubits.size(), def.params.size(), def.qargs.size());
        if (def.from_qelib1) {
            auto d = kDirect.find(name);
            if (d != kDirect.end()) {
                push(d->second, params, qubits);
                return;
            }
        }
        if (!active_.insert(name).second) {
            fail(call.loc, "gate '" + name + "' is defined recursively");
        }
        std::map<std::string, double> env;
        for (std::size_t i = 0; i < def.params.size(); ++i) {
            env[def.params[i]] = params[i];
        }
        std::map<std::string, int> qenv;
        for (std::size_t i = 0; i < def.qargs.size(); ++i) {
            qenv[def.qargs[i]] = qubits[i];
        }
        for (const auto &inner : def.body) {
            std::vector<double> p;
            for (const auto &e : inner.params) {
                p.push_back(evaluate(*e, env));
            }
            std::vector<int> q;
            for (const auto &a : inner.args) {
                q.push_back(qenv.at(a.reg));
            }
            emit(inner, inner.name, p, q);
        }
        active_.erase(name);
    }

    MonolithicCircuit out;

  private:
    static void check_counts(const GateCall &call, const std::string &name, std::size_t np, std::size_t nq,
                             std::size_t want_p, std::size_t want_q) {
        if (np != want_p || nq != want_q) {
            fail(call.loc, "gate '" + name + "' expects " + std::to_string(want_p) + " parameter(s) and " +
                               std::to_string(want_q) + " qubit argument(s)");
        }
    }

    void push(GateKind k, const std::vector<double> &params, const std::vector<int> &qubits) {
        out.gates.push_back({qstate::make_gate(k, params), qubits, std::nullopt});
    }

    const QasmProgram &prog_;
    std::set<std::string> active_;
};

} // namespace

MonolithicCircuit lower_to_circuit(const QasmProgram &program, LoweringReport *report) {
    const auto qoff = offsets(program.qregs);
    const auto coff = offsets(program.cregs);
    auto reg_size = [](const std::vector<Register> &regs, const std::string &name) {
        for (const auto &r : regs) {
            if (r.name == name) {
                return r.size;
            }
        }
        return 0;
    };
    auto resolve = [&](const Argument &a, const std::map<std::string, int> &off, int k) {
        return off.at(a.reg) + (a.index ? *a.index : k);
    };

    Lowerer low(program);
    low.out.num_qubits = program.num_qubits();
    low.out.num_cbits = program.num_cbits();
    std::size_t barriers = 0;

    for (const auto &st : program.statements) {
        if (const auto *call = std::get_if<GateCall>(&st)) {
            int width = 1;
            for (const auto &a : call->args) {
                if (!a.index) {
                    width = reg_size(program.qregs, a.reg);
                }
            }
            std::vector<double> params;
            for (const auto &e : call->params) {
                params.push_back(evaluate(*e, {}));
            }
            for (int k = 0; k < width; ++k) {
                std::vector<int> qubits;
                for (const auto &a : call->args) {
                    qubits.push_back(resolve(a, qoff, k));
                }
                low.emit(*call, call->name, params, qubits);
            }
        } else if (const auto *m = std::get_if<MeasureStmt>(&st)) {
            const int width = m->qubit.index ? 1 : reg_size(program.qregs, m->qubit.reg);
            for (int k = 0; k < width; ++k) {
                low.out.gates.push_back({qstate::make_gate(GateKind::Measure),
                                         {resolve(m->qubit, qoff, k)},
                                         resolve(m->cbit, coff, k)});
            }
        } else {
            ++barriers;
        }
    }
    if (report) {
        report->barriers_dropped = barriers;
    }
    return std::move(low.out);
}

namespace {

std::string qasm_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "h";
    case GateKind::X:
        return "x";
    case GateKind::Y:
        return "y";
    case GateKind::Z:
        return "z";
    case GateKind::S:
        return "s";
    case GateKind::T:
        return "t";
    case GateKind::RX:
        return "rx";
    case GateKind::RY:
        return "ry";
    case GateKind::RZ:
        return "rz";
    case GateKind::U:
        return "U";
    case GateKind::CNOT:
        return "CX";
    case GateKind::CZ:
        return "cz";
    case GateKind::SWAP:
        return "swap";
    default:
        throw ArgumentError("gate " + std::string(qstate::gate_name(k)) + " has no OpenQASM form");
    }
}

} // namespace

std::string unparse(const MonolithicCircuit &c) {
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    if (c.num_qubits > 0) {
        out += "qreg q[" + std::to_string(c.num_qubits) + "];\n";
    }
    if (c.num_cbits > 0) {
        out += "creg c[" + std::to_string(c.num_cbits) + "];\n";
    }
    for (const auto &g : c.gates) {
        if (g.gate.kind == GateKind::Measure) {
            out += "measure q[" + std::to_string(g.qubits.at(0)) + "] -> c[" + std::to_string(g.cbit.value()) +
                   "];\n";
            continue;
        }
        out += qasm_name(g.gate.kind);
        if (!g.gate.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < g.gate.params.size(); ++i) {
                out += (i ? "," : "") + qstate::format_real(g.gate.params[i]);
            }
            out += ')';
        }
        for (std::size_t i = 0; i < g.qubits.size(); ++i) {
            out += (i ? "," : " ") + std::string("q[") + std::to_string(g.qubits[i]) + "]";
        }
        out += ";\n";
    }
    return out;
}

std::string dump(const MonolithicCircuit &c) {
    std::string out;
    for (const auto &g : c.gates) {
        out += "(" + g.gate.to_string();
        for (int q : g.qubits) {
            out += "," + std::to_string(q);
        }
        if (g.cbit) {
            out += ",c" + std::to_string(*g.cbit);
        }
        out += ")\n";
    }
    return out;
}

} // namespace dqcsim::qasm
