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

#include "dqcsim/hardware/machine.hpp"

#include <algorithm>

#include "dqcsim/errors.hpp"

namespace dqcsim::hardware {

using qstate::GateKind;
using qstate::QubitId;

namespace {

std::string where(const DqcNetwork &net, int qpu, int position) {
    return net.qpus.at(qpu).name + " position " + std::to_string(position);
}

} // namespace

Machine::Machine(const DqcNetwork &network, sim::Kernel &kernel, qstate::StateRegistry &states)
    : network_(network), kernel_(kernel), states_(states) {
    for (const auto &q : network_.qpus) {
        QpuState s;
        s.memory.resize(q.config.num_positions);
        qpus_.push_back(std::move(s));
    }
    for (const auto &[link, conn] : network_.quantum_links) {
        ent_queues_[link];
    }
}

double Machine::memory_rate(int qpu, int position) const {
    const auto &c = config(qpu);
    return c.is_comm(position) ? c.comm_qubit_depolar_rate : c.proc_qubit_depolar_rate;
}

std::optional<QubitId> Machine::qubit_at(int qpu, int position) const {
    const auto &mem = qpus_.at(qpu).memory;
    if (position < 0 || position >= static_cast<int>(mem.size())) {
        throw RuntimeFault(where(network_, qpu, position) + " is out of range");
    }
    return mem[position];
}

QubitId Machine::require_qubit(int qpu, int position) const {
    auto q = qubit_at(qpu, position);
    if (!q) {
        throw RuntimeFault(where(network_, qpu, position) + " holds no qubit");
    }
    return *q;
}

void Machine::place(int qpu, int position, QubitId q) { qpus_.at(qpu).memory.at(position) = q; }

void Machine::init_positions(int qpu, std::span<const int> positions) {
    for (int pos : positions) {
        if (qubit_at(qpu, pos)) {
            discard_position(qpu, pos);
        }
        const auto q = states_.init_qubits(1, memory_rate(qpu, pos));
        place(qpu, pos, q.front());
    }
}

void Machine::discard_position(int qpu, int position) {
    const QubitId q = require_qubit(qpu, position);
    states_.discard(q);
    qpus_[qpu].memory[position].reset();
}

void Machine::free_comm_qubit(int qpu, int position) {
    if (!config(qpu).is_comm(position)) {
        throw RuntimeFault("free_comm_qubit: " + where(network_, qpu, position) +
                           " is a processing position");
    }
    if (!qubit_at(qpu, position)) {
        throw RuntimeFault("free_comm_qubit: " + where(network_, qpu, position) + " is already free");
    }
    discard_position(qpu, position);
    for (const auto &[link, queue] : ent_queues_) {
        if (link.first == qpu || link.second == qpu) {
            try_rendezvous(link);
        }
    }
}

int Machine::lowest_free_comm(int qpu) const {
    const auto &s = qpus_[qpu];
    for (int p = 0; p < config(qpu).num_comm_qubits; ++p) {
        if (!s.memory[p]) {
            return p;
        }
    }
    return -1;
}

int Machine::free_comm_count(int qpu) const {
    int n = 0;
    const auto &s = qpus_.at(qpu);
    for (int p = 0; p < config(qpu).num_comm_qubits; ++p) {
        n += s.memory[p] ? 0 : 1;
    }
    return n;
}

int Machine::busy_comm_count(int qpu) const { return config(qpu).num_comm_qubits - free_comm_count(qpu); }

void Machine::enqueue(int qpu, TimedOp op) {
    qpus_.at(qpu).queue.push_back(std::move(op));
    if (!qpus_[qpu].busy) {
        start_next(qpu);
    }
}

void Machine::start_next(int qpu) {
    auto &s = qpus_[qpu];
    if (s.queue.empty()) {
        s.busy = false;
        return;
    }
    s.busy = true;
    TimedOp op = std::move(s.queue.front());
    s.queue.pop_front();
    // Idle noise is charged up to the start of the operation.
    for (int pos : op.positions) {
        if (auto q = qubit_at(qpu, pos)) {
            states_.decoherence_catch_up(*q);
        }
    }
    const sim::SimTime start = kernel_.now();
    busy_.push_back({qpu, start, start + op.duration, op.what});
    kernel_.schedule(op.duration, [this, qpu, op = std::move(op)]() {
        for (int pos : op.positions) {
            if (auto q = qubit_at(qpu, pos)) {
                states_.touch(*q);
            }
        }
        op.effect();
        start_next(qpu);
    });
}

void Machine::execute_gate(int qpu, const qstate::GateSpec &gate, std::vector<int> positions,
                           std::function<void()> done) {
    if (gate.kind == GateKind::SWAP) {
        if (positions.size() != 2) {
            throw RuntimeFault("SWAP needs two positions");
        }
        const int a = positions[0], b = positions[1];
        require_qubit(qpu, a);
        require_qubit(qpu, b);
        const auto &c = config(qpu);
        enqueue(qpu, TimedOp{{a, b}, 3 * c.two_qubit_gate_time, "SWAP", [this, qpu, a, b, done]() {
                                 const QubitId qs[2] = {require_qubit(qpu, a), require_qubit(qpu, b)};
                                 states_.apply_gate(qstate::make_gate(GateKind::SWAP), qs);
                                 // Three CNOTs worth of two-qubit error.
                                 for (int i = 0; i < 3; ++i) {
                                     states_.apply_depolarizing(qs, config(qpu).p_depolar_error_cnot);
                                 }
                                 if (done) {
                                     done();
                                 }
                             }});
        return;
    }
    if (!gate.is_unitary()) {
        throw RuntimeFault("execute_gate: " + std::string(qstate::gate_name(gate.kind)) +
                           " is not a timed unitary gate");
    }
    if (static_cast<int>(positions.size()) != gate.arity()) {
        throw RuntimeFault("execute_gate: " + gate.to_string() + " expects " +
                           std::to_string(gate.arity()) + " position(s)");
    }
    for (int pos : positions) {
        require_qubit(qpu, pos);
    }
    const auto &c = config(qpu);
    const bool two = gate.arity() == 2;
    const sim::SimTime duration = two ? c.two_qubit_gate_time : c.single_qubit_gate_time;
    auto ps = positions;
    enqueue(qpu, TimedOp{std::move(positions), duration, gate.to_string(),
                         [this, qpu, gate, ps = std::move(ps), two, done]() {
                             std::vector<QubitId> qs;
                             for (int pos : ps) {
                                 qs.push_back(require_qubit(qpu, pos));
                             }
                             states_.apply_gate(gate, qs);
                             const auto &cfg = config(qpu);
                             states_.apply_depolarizing(qs, two ? cfg.p_depolar_error_cnot
                                                                : cfg.single_qubit_gate_error_prob);
                             if (done) {
                                 done();
                             }
                         }});
}

void Machine::execute_measure(int qpu, int position, qstate::Basis basis,
                              std::function<void(int)> done) {
    require_qubit(qpu, position);
    enqueue(qpu, TimedOp{{position}, config(qpu).measurement_time, "MEASURE",
                         [this, qpu, position, basis, done]() {
                             const int bit = states_.measure(require_qubit(qpu, position), basis,
                                                             config(qpu).meas_error_prob);
                             if (done) {
                                 done(bit);
                             }
                         }});
}

void Machine::execute_swap(int qpu, int from, int to, std::function<void()> done) {
    require_qubit(qpu, from);
    if (!qubit_at(qpu, to)) {
        const int p[1] = {to};
        init_positions(qpu, p);
    }
    execute_gate(qpu, qstate::make_gate(GateKind::SWAP), {from, to}, std::move(done));
}

void Machine::apply_correction(int qpu, const qstate::GateSpec &gate, int position, bool noiseless) {
    const QubitId q[1] = {require_qubit(qpu, position)};
    states_.apply_gate(gate, q);
    if (!noiseless) {
        states_.apply_depolarizing(q, config(qpu).single_qubit_gate_error_prob);
    }
}

void Machine::request_entanglement(int self, int peer, std::uint64_t tag,
                                   std::function<void(int)> on_delivery) {
    const Link link = make_link(self, peer);
    auto it = ent_queues_.find(link);
    if (self == peer || it == ent_queues_.end()) {
        throw TopologyError("no quantum link between " + network_.qpus.at(self).name + " and " +
                            network_.qpus.at(peer).name);
    }
    auto &side = self == link.first ? it->second.first : it->second.second;
    side.push_back({tag, std::move(on_delivery)});
    try_rendezvous(link);
}

void Machine::try_rendezvous(const Link &link) {
    auto &lq = ent_queues_.at(link);
    while (!lq.first.empty() && !lq.second.empty()) {
        auto &a = qpus_[link.first];
        auto &b = qpus_[link.second];
        if (free_comm_count(link.first) - a.reserved_comm <= 0 ||
            free_comm_count(link.second) - b.reserved_comm <= 0) {
            return;
        }
        EntRequest ra = std::move(lq.first.front());
        EntRequest rb = std::move(lq.second.front());
        lq.first.pop_front();
        lq.second.pop_front();
        if (ra.tag != rb.tag) {
            throw RuntimeFault("entanglement requests on link " + network_.qpus[link.first].name +
                               "-" + network_.qpus[link.second].name + " disagree (tags " +
                               std::to_string(ra.tag) + " vs " + std::to_string(rb.tag) + ")");
        }
        ++a.reserved_comm;
        ++b.reserved_comm;
        const sim::SimTime rendezvous = kernel_.now();
        const auto &conn = network_.quantum_links.at(link);
        kernel_.schedule(conn.delay, [this, link, rendezvous, ra = std::move(ra), rb = std::move(rb)]() {
            --qpus_[link.first].reserved_comm;
            --qpus_[link.second].reserved_comm;
            const int pa = lowest_free_comm(link.first);
            const int pb = lowest_free_comm(link.second);
            const auto qa = states_.init_qubits(1, memory_rate(link.first, pa)).front();
            const auto qb = states_.init_qubits(1, memory_rate(link.second, pb)).front();
            const QubitId pair[2] = {qa, qb};
            states_.assign_state(pair, network_.quantum_links.at(link).state4distribution);
            place(link.first, pa, qa);
            place(link.second, pb, qb);
            deliveries_.push_back({link, rendezvous, kernel_.now(), pa, pb});
            ra.on_delivery(pa);
            rb.on_delivery(pb);
        });
    }
}

std::size_t Machine::pending_entanglement_requests() const {
    std::size_t n = 0;
    for (const auto &[link, q] : ent_queues_) {
        n += q.first.size() + q.second.size();
    }
    return n;
}

void Machine::send_classical(int src, int dst, std::uint64_t tag, Bits bits) {
    const auto it = network_.classical_links.find(make_link(src, dst));
    if (src == dst || it == network_.classical_links.end()) {
        throw TopologyError("no classical link between " + network_.qpus.at(src).name + " and " +
                            network_.qpus.at(dst).name);
    }
    kernel_.schedule(it->second, [this, src, dst, tag, bits = std::move(bits)]() mutable {
        const MailboxKey key{dst, src, tag};
        auto w = waiting_.find(key);
        if (w != waiting_.end() && !w->second.empty()) {
            auto cb = std::move(w->second.front());
            w->second.pop_front();
            cb(std::move(bits));
            return;
        }
        mailboxes_[key].push_back(std::move(bits));
    });
}

void Machine::recv_classical(int dst, int src, std::uint64_t tag, std::function<void(Bits)> on_arrival) {
    if (src == dst || !network_.has_classical_link(src, dst)) {
        throw TopologyError("no classical link between " + network_.qpus.at(src).name + " and " +
                            network_.qpus.at(dst).name);
    }
    const MailboxKey key{dst, src, tag};
    auto m = mailboxes_.find(key);
    if (m != mailboxes_.end() && !m->second.empty()) {
        Bits bits = std::move(m->second.front());
        m->second.pop_front();
        on_arrival(std::move(bits));
        return;
    }
    waiting_[key].push_back(std::move(on_arrival));
}

std::size_t Machine::undelivered_messages() const {
    std::size_t n = 0;
    for (const auto &[k, q] : mailboxes_) {
        n += q.size();
    }
    return n;
}

} // namespace dqcsim::hardware
