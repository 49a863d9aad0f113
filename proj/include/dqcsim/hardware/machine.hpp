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
 * Emulated DQC hardware bound to one simulation instance: QPU memories with
 * communication and processing positions, timed noisy instruction execution,
 * black-box entangling connections and classical channels.
 */
#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dqcsim/hardware/network.hpp"
#include "dqcsim/qstate/registry.hpp"
#include "dqcsim/sim/kernel.hpp"

namespace dqcsim::hardware {

struct BusyInterval {
    int qpu;
    sim::SimTime start;
    sim::SimTime end;
    std::string what;
};

struct Delivery {
    Link link;
    sim::SimTime rendezvous;
    sim::SimTime delivered;
    int position_first;
    int position_second;
};

using Bits = std::vector<int>;

class Machine {
  public:
    Machine(const DqcNetwork &network, sim::Kernel &kernel, qstate::StateRegistry &states);

    Machine(const Machine &) = delete;
    Machine &operator=(const Machine &) = delete;

    const DqcNetwork &network() const noexcept { return network_; }
    const QpuConfig &config(int qpu) const { return network_.qpus.at(qpu).config; }

    std::optional<qstate::QubitId> qubit_at(int qpu, int position) const;
    qstate::QubitId require_qubit(int qpu, int position) const;

    /// Fresh |0> qubits at the given positions (zero duration). Occupied positions are re-initialized.
    void init_positions(int qpu, std::span<const int> positions);
    /// Remove whatever qubit sits at a position (trace out / measure-and-drop).
    void discard_position(int qpu, int position);
    /// Return a busy communication position to the free set.
    void free_comm_qubit(int qpu, int position);

    // Timed instructions. Each QPU runs one at a time; extra requests queue FIFO.
    // Completion callbacks run at the end of the occupied interval.
    void execute_gate(int qpu, const qstate::GateSpec &gate, std::vector<int> positions,
                      std::function<void()> done);
    void execute_measure(int qpu, int position, qstate::Basis basis, std::function<void(int)> done);
    /// Move the state at `from` into `to` (|0> is initialized there if empty) via a SWAP.
    void execute_swap(int qpu, int from, int to, std::function<void()> done);

    /// Zero-duration classically controlled gate. Single-qubit gate error is
    /// charged unless `noiseless`.
    void apply_correction(int qpu, const qstate::GateSpec &gate, int position, bool noiseless);

    /// Ask for one half of an entangled pair on the (self, peer) link. Requests
    /// from both endpoints rendezvous FIFO; `tag` must agree between partners.
    void request_entanglement(int self, int peer, std::uint64_t tag,
                              std::function<void(int position)> on_delivery);

    void send_classical(int src, int dst, std::uint64_t tag, Bits bits);
    /// Invokes on_arrival once a (src, tag) message is in dst's mailbox;
    /// synchronously if one is already waiting.
    void recv_classical(int dst, int src, std::uint64_t tag, std::function<void(Bits)> on_arrival);

    int free_comm_count(int qpu) const;
    int busy_comm_count(int qpu) const;
    std::size_t pending_entanglement_requests() const;
    std::size_t undelivered_messages() const;

    const std::vector<BusyInterval> &busy_intervals() const noexcept { return busy_; }
    const std::vector<Delivery> &deliveries() const noexcept { return deliveries_; }

    double memory_rate(int qpu, int position) const;

  private:
    struct TimedOp {
        std::vector<int> positions;
        sim::SimTime duration;
        std::string what;
        std::function<void()> effect;
    };
    struct QpuState {
        std::vector<std::optional<qstate::QubitId>> memory;
        int reserved_comm = 0;
        bool busy = false;
        std::deque<TimedOp> queue;
    };
    struct EntRequest {
        std::uint64_t tag;
        std::function<void(int)> on_delivery;
    };
    struct LinkQueue {
        std::deque<EntRequest> first;
        std::deque<EntRequest> second;
    };
    using MailboxKey = std::tuple<int, int, std::uint64_t>;

    void enqueue(int qpu, TimedOp op);
    void start_next(int qpu);
    void try_rendezvous(const Link &link);
    int lowest_free_comm(int qpu) const;
    void place(int qpu, int position, qstate::QubitId q);

    const DqcNetwork &network_;
    sim::Kernel &kernel_;
    qstate::StateRegistry &states_;
    std::vector<QpuState> qpus_;
    std::map<Link, LinkQueue> ent_queues_;
    std::map<MailboxKey, std::deque<Bits>> mailboxes_;
    std::map<MailboxKey, std::deque<std::function<void(Bits)>>> waiting_;
    std::vector<BusyInterval> busy_;
    std::vector<Delivery> deliveries_;
};

} // namespace dqcsim::hardware
