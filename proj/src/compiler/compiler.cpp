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

#include "dqcsim/compiler/compiler.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <set>

#include "dqcsim/errors.hpp"

namespace dqcsim::compiler {

using circuit::Address;
using circuit::Scheme;
using qstate::GateKind;
using qstate::GateSpec;

std::string_view opcode_name(OpCode op) {
    switch (op) {
    case OpCode::Init:
        return "INIT";
    case OpCode::Apply:
        return "APPLY";
    case OpCode::Entangle:
        return "ENTANGLE";
    case OpCode::Measure:
        return "MEASURE";
    case OpCode::Send:
        return "SEND";
    case OpCode::Recv:
        return "RECV";
    case OpCode::CondApply:
        return "COND_APPLY";
    case OpCode::Free:
        return "FREE";
    case OpCode::SwapInternal:
        return "SWAP_INTERNAL";
    }
    return "?";
}

std::string to_string(const Operand &o) {
    return o.kind == Operand::Kind::Slot ? "$e" + std::to_string(o.value) : std::to_string(o.value);
}

std::string format_instruction(const Instruction &ins) {
    std::string out(opcode_name(ins.op));
    auto operands = [&] {
        for (const auto &o : ins.operands) {
            out += " " + to_string(o);
        }
    };
    auto vars = [&] {
        for (const auto &v : ins.vars) {
            out += " " + v;
        }
    };
    switch (ins.op) {
    case OpCode::Init:
    case OpCode::Free:
    case OpCode::SwapInternal:
        operands();
        break;
    case OpCode::Apply:
        out += " " + ins.gate.to_string();
        operands();
        break;
    case OpCode::Entangle:
        out += " " + hardware::node_name(ins.peer) + " $e" + std::to_string(ins.slot) + " #" +
               std::to_string(ins.tag);
        break;
    case OpCode::Measure:
        operands();
        out += ins.basis == qstate::Basis::X ? " X ->" : " Z ->";
        vars();
        if (ins.report_cbit) {
            out += " c" + std::to_string(*ins.report_cbit);
        }
        break;
    case OpCode::Send:
    case OpCode::Recv:
        out += " " + hardware::node_name(ins.peer) + " #" + std::to_string(ins.tag);
        vars();
        break;
    case OpCode::CondApply:
        out += " " + ins.vars.at(0) + " " + ins.gate.to_string();
        operands();
        break;
    }
    return out;
}

Address Program::resolve(const Address &home) const {
    auto logical = initial_qmap.logical_at(home);
    if (!logical) {
        throw ArgumentError("no logical qubit starts at " + circuit::to_string(home));
    }
    return final_qmap.at(*logical);
}

ResourceReport count_resources(const std::vector<InstructionStream> &streams) {
    ResourceReport r;
    std::set<std::uint64_t> pairs;
    for (const auto &s : streams) {
        std::size_t depth = 0;
        for (const auto &ins : s.instructions) {
            switch (ins.op) {
            case OpCode::Entangle:
                pairs.insert(ins.tag);
                break;
            case OpCode::Send:
                r.classical_bits += ins.vars.size();
                break;
            case OpCode::Apply:
            case OpCode::Measure:
            case OpCode::SwapInternal:
                ++depth;
                break;
            default:
                break;
            }
        }
        r.instructions_per_qpu.push_back(s.instructions.size());
        r.depth_per_qpu.push_back(depth);
    }
    r.ebits = pairs.size();
    return r;
}

namespace {

class Builder {
  public:
    Builder(const hardware::DqcNetwork &net, circuit::LogicalQubitMap qmap, const CompileOptions &opt)
        : net_(net), qmap_(std::move(qmap)), opt_(opt), streams_(net.size()), live_(net.size(), 0),
          next_slot_(net.size(), 0) {
        for (std::size_t k = 0; k < net.size(); ++k) {
            streams_[k].qpu = static_cast<int>(k);
        }
    }

    void gate(std::size_t index, const circuit::DistributedGate &g, const circuit::LogicalQubitMap &initial) {
        index_ = index;
        std::vector<std::size_t> logical;
        std::vector<Address> where;
        for (const auto &a : g.operands) {
            auto l = initial.logical_at(a);
            if (!l) {
                throw ArgumentError("gate " + std::to_string(index) + ": " + circuit::to_string(a) +
                                    " holds no logical qubit");
            }
            logical.push_back(*l);
            where.push_back(qmap_.at(*l));
        }
        for (const auto &a : where) {
            if (a.node < 0 || a.node >= static_cast<int>(net_.size())) {
                throw TopologyError("gate " + std::to_string(index) + ": node " + hardware::node_name(a.node) +
                                    " does not exist");
            }
        }
        if (g.gate.kind == GateKind::Init) {
            std::map<int, std::vector<Operand>> by_node;
            for (const auto &a : where) {
                by_node[a.node].push_back(Operand::position(a.position));
            }
            for (auto &[node, ops] : by_node) {
                Instruction ins;
                ins.op = OpCode::Init;
                ins.operands = std::move(ops);
                emit(node, std::move(ins));
            }
            return;
        }
        if (g.gate.kind == GateKind::Measure) {
            Instruction ins;
            ins.op = OpCode::Measure;
            ins.operands = {Operand::position(where[0].position)};
            ins.vars = {fresh_var()};
            ins.report_cbit = g.cbit;
            emit(where[0].node, std::move(ins));
            return;
        }
        const bool spans = std::any_of(where.begin(), where.end(),
                                       [&](const Address &a) { return a.node != where[0].node; });
        if (!spans) {
            Instruction ins;
            ins.op = OpCode::Apply;
            ins.gate = g.gate;
            for (const auto &a : where) {
                ins.operands.push_back(Operand::position(a.position));
            }
            emit(where[0].node, std::move(ins));
            return;
        }
        if (where.size() != 2) {
            throw ArgumentError("gate " + std::to_string(index) + " (" + g.gate.to_string() +
                                ") spans nodes with more than two qubits");
        }
        const Scheme scheme = g.scheme.value_or(opt_.default_scheme);
        switch (scheme) {
        case Scheme::Cat:
            cat(g.gate, where[0], where[1]);
            break;
        case Scheme::TP1:
            one_tp(g.gate, logical[0], where[0], where[1]);
            break;
        case Scheme::TP2:
            two_tp(g.gate, where[0], where[1]);
            break;
        case Scheme::TPSafe:
            tp_safe(g.gate, logical[0], where[0], where[1]);
            break;
        }
    }

    std::vector<InstructionStream> take_streams() { return std::move(streams_); }
    const circuit::LogicalQubitMap &qmap() const { return qmap_; }

  private:
    std::string where_text() const { return "gate " + std::to_string(index_); }

    void emit(int node, Instruction ins) { streams_.at(node).instructions.push_back(std::move(ins)); }

    std::string fresh_var() { return "m" + std::to_string(next_var_++); }

    void require_links(int a, int b) {
        if (!net_.has_quantum_link(a, b)) {
            throw TopologyError(where_text() + ": no quantum link between " + hardware::node_name(a) + " and " +
                                hardware::node_name(b));
        }
        if (!net_.has_classical_link(a, b)) {
            throw TopologyError(where_text() + ": no classical link between " + hardware::node_name(a) +
                                " and " + hardware::node_name(b));
        }
    }

    std::pair<Operand, Operand> entangle(int a, int b) {
        const std::uint64_t tag = next_tag_++;
        Operand sa, sb;
        for (auto [self, peer, out] : {std::tuple{a, b, &sa}, std::tuple{b, a, &sb}}) {
            const int limit = net_.qpus[self].config.num_comm_qubits;
            if (++live_[self] > limit) {
                throw ResourceError(where_text() + ": " + hardware::node_name(self) + " needs " +
                                    std::to_string(live_[self]) + " communication qubit(s) but has " +
                                    std::to_string(limit));
            }
            Instruction ins;
            ins.op = OpCode::Entangle;
            ins.peer = peer;
            ins.tag = tag;
            ins.slot = next_slot_[self]++;
            *out = Operand::slot(ins.slot);
            emit(self, std::move(ins));
        }
        return {sa, sb};
    }

    void free(int node, const Operand &o) {
        if (o.kind == Operand::Kind::Slot) {
            --live_[node];
        }
        Instruction ins;
        ins.op = OpCode::Free;
        ins.operands = {o};
        emit(node, std::move(ins));
    }

    void apply(int node, const GateSpec &g, std::vector<Operand> ops) {
        Instruction ins;
        ins.op = OpCode::Apply;
        ins.gate = g;
        ins.operands = std::move(ops);
        emit(node, std::move(ins));
    }

    std::string measure(int node, const Operand &o) {
        Instruction ins;
        ins.op = OpCode::Measure;
        ins.operands = {o};
        ins.vars = {fresh_var()};
        std::string v = ins.vars[0];
        emit(node, std::move(ins));
        return v;
    }

    void message(int src, int dst, std::vector<std::string> vars) {
        const std::uint64_t tag = next_tag_++;
        Instruction send;
        send.op = OpCode::Send;
        send.peer = dst;
        send.tag = tag;
        send.vars = vars;
        emit(src, std::move(send));
        Instruction recv;
        recv.op = OpCode::Recv;
        recv.peer = src;
        recv.tag = tag;
        recv.vars = std::move(vars);
        emit(dst, std::move(recv));
    }

    void cond(int node, GateKind k, const Operand &o, const std::string &var) {
        Instruction ins;
        ins.op = OpCode::CondApply;
        ins.gate = qstate::make_gate(k);
        ins.operands = {o};
        ins.vars = {var};
        emit(node, std::move(ins));
    }

    int free_processing_position(int node, std::initializer_list<int> taken = {}) const {
        const auto &cfg = net_.qpus[node].config;
        for (int p = cfg.num_comm_qubits; p < cfg.num_positions; ++p) {
            if (!qmap_.logical_at(Address{p, node}) && std::find(taken.begin(), taken.end(), p) == taken.end()) {
                return p;
            }
        }
        throw ResourceError(where_text() + ": " + hardware::node_name(node) +
                            " has no free processing position to receive a teleported qubit");
    }

    void cat(const GateSpec &g, const Address &ctrl, const Address &tgt) {
        const auto local = qstate::controlled_target_gate(g.kind);
        if (!local) {
            throw ArgumentError(where_text() + ": " + g.to_string() +
                                " is not a controlled gate and cannot use the cat scheme");
        }
        const int A = ctrl.node, B = tgt.node;
        require_links(A, B);
        auto [a, b] = entangle(A, B);
        apply(A, qstate::make_gate(GateKind::CNOT), {Operand::position(ctrl.position), a});
        const std::string m1 = measure(A, a);
        free(A, a);
        message(A, B, {m1});
        cond(B, GateKind::X, b, m1);
        apply(B, g, {b, Operand::position(tgt.position)});
        apply(B, qstate::make_gate(GateKind::H), {b});
        const std::string m2 = measure(B, b);
        free(B, b);
        message(B, A, {m2});
        cond(A, GateKind::Z, Operand::position(ctrl.position), m2);
    }

    // Teleports the qubit at `q` on node A to node B. With `evacuate_to` the
    // state ends in that processing position; otherwise it stays in the slot.
    Operand teleport(int A, const Operand &q, int B, std::optional<int> evacuate_to) {
        require_links(A, B);
        auto [a, b] = entangle(A, B);
        apply(A, qstate::make_gate(GateKind::CNOT), {q, a});
        apply(A, qstate::make_gate(GateKind::H), {q});
        const std::string m1 = measure(A, a);
        const std::string m2 = measure(A, q);
        free(A, a);
        free(A, q);
        message(A, B, {m1, m2});
        cond(B, GateKind::X, b, m1);
        cond(B, GateKind::Z, b, m2);
        if (!evacuate_to) {
            return b;
        }
        Instruction swap;
        swap.op = OpCode::SwapInternal;
        swap.operands = {b, Operand::position(*evacuate_to)};
        emit(B, std::move(swap));
        free(B, b);
        return Operand::position(*evacuate_to);
    }

    void one_tp(const GateSpec &g, std::size_t logical, const Address &ctrl, const Address &tgt) {
        const int p = free_processing_position(tgt.node);
        teleport(ctrl.node, Operand::position(ctrl.position), tgt.node, p);
        qmap_.relocate(logical, Address{p, tgt.node});
        apply(tgt.node, g, {Operand::position(p), Operand::position(tgt.position)});
    }

    void two_tp(const GateSpec &g, const Address &ctrl, const Address &tgt) {
        const Operand b = teleport(ctrl.node, Operand::position(ctrl.position), tgt.node, std::nullopt);
        apply(tgt.node, g, {b, Operand::position(tgt.position)});
        teleport(tgt.node, b, ctrl.node, ctrl.position);
    }

    void tp_safe(const GateSpec &g, std::size_t logical, const Address &ctrl, const Address &tgt) {
        const int p = free_processing_position(tgt.node);
        teleport(ctrl.node, Operand::position(ctrl.position), tgt.node, p);
        qmap_.relocate(logical, Address{p, tgt.node});
        apply(tgt.node, g, {Operand::position(p), Operand::position(tgt.position)});
        teleport(tgt.node, Operand::position(p), ctrl.node, ctrl.position);
        qmap_.relocate(logical, ctrl);
    }

    const hardware::DqcNetwork &net_;
    circuit::LogicalQubitMap qmap_;
    CompileOptions opt_;
    std::vector<InstructionStream> streams_;
    std::vector<int> live_;
    std::vector<int> next_slot_;
    std::uint64_t next_tag_ = 0;
    std::size_t next_var_ = 0;
    std::size_t index_ = 0;
};

} // namespace

Program compile(const circuit::DistributedCircuit &circuit, const hardware::DqcNetwork &network,
                circuit::LogicalQubitMap qmap, const CompileOptions &options) {
    for (const auto &g : circuit.gates) {
        for (const auto &a : g.operands) {
            if (!qmap.logical_at(a)) {
                qmap.add(a);
            }
        }
    }
    for (const auto &a : qmap.locations()) {
        if (a.node < 0 || a.node >= static_cast<int>(network.size()) ||
            !network.qpus[a.node].config.in_range(a.position) || network.qpus[a.node].config.is_comm(a.position)) {
            throw ArgumentError(circuit::to_string(a) + " is not a processing position of the network");
        }
    }
    Program prog;
    prog.initial_qmap = qmap;
    Builder b(network, std::move(qmap), options);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        b.gate(i, circuit.gates[i], prog.initial_qmap);
    }
    prog.final_qmap = b.qmap();
    prog.streams = b.take_streams();
    prog.resources = count_resources(prog.streams);
    return prog;
}

std::string format_program(const Program &program, const hardware::DqcNetwork &network) {
    std::string out;
    for (const auto &s : program.streams) {
        out += ".qpu " + network.qpus.at(s.qpu).name + "\n";
        for (const auto &ins : s.instructions) {
            out += "  " + format_instruction(ins) + "\n";
        }
    }
    return out;
}

} // namespace dqcsim::compiler
