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

#include "dqcsim/circuit/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dqcsim/errors.hpp"

namespace dqcsim::circuit {

std::string_view scheme_name(Scheme s) {
    switch (s) {
    case Scheme::Cat:
        return "cat";
    case Scheme::TP1:
        return "1tp";
    case Scheme::TP2:
        return "2tp";
    case Scheme::TPSafe:
        return "tp_safe";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) {
    for (Scheme s : {Scheme::Cat, Scheme::TP1, Scheme::TP2, Scheme::TPSafe}) {
        if (scheme_name(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

std::string to_string(const Address &a) {
    return std::to_string(a.position) + "@" + hardware::node_name(a.node);
}

bool DistributedGate::spans_nodes() const {
    return std::any_of(operands.begin(), operands.end(),
                       [&](const Address &a) { return a.node != operands.front().node; });
}

LogicalQubitMap::LogicalQubitMap(std::vector<Address> locations) : locations_(std::move(locations)) {
    std::set<Address> seen;
    for (const auto &a : locations_) {
        if (!seen.insert(a).second) {
            throw ArgumentError("logical qubit map is not injective at " + to_string(a));
        }
    }
}

std::optional<std::size_t> LogicalQubitMap::logical_at(const Address &a) const {
    auto it = std::find(locations_.begin(), locations_.end(), a);
    if (it == locations_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - locations_.begin());
}

void LogicalQubitMap::relocate(std::size_t logical, const Address &to) {
    auto holder = logical_at(to);
    if (holder && *holder != logical) {
        throw ArgumentError("cannot move logical qubit " + std::to_string(logical) + " to " +
                            to_string(to) + ": held by logical qubit " + std::to_string(*holder));
    }
    locations_.at(logical) = to;
}

std::size_t LogicalQubitMap::add(const Address &a) {
    if (logical_at(a)) {
        throw ArgumentError("address " + to_string(a) + " already mapped");
    }
    locations_.push_back(a);
    return locations_.size() - 1;
}

LogicalQubitMap infer_qubit_map(const DistributedCircuit &circuit) {
    LogicalQubitMap map;
    for (const auto &g : circuit.gates) {
        for (const auto &a : g.operands) {
            if (!map.logical_at(a)) {
                map.add(a);
            }
        }
    }
    return map;
}

Partition partition_contiguous(const MonolithicCircuit &circuit, const hardware::DqcNetwork &network,
                               Scheme default_scheme) {
    std::vector<int> caps;
    for (const auto &q : network.qpus) {
        caps.push_back(q.config.num_processing());
    }
    return partition_contiguous(circuit, caps, network, default_scheme);
}

Partition partition_contiguous(const MonolithicCircuit &circuit, const std::vector<int> &capacities,
                               const hardware::DqcNetwork &network, Scheme default_scheme) {
    if (capacities.size() > network.size()) {
        throw ArgumentError("more capacities (" + std::to_string(capacities.size()) +
                            ") than QPUs (" + std::to_string(network.size()) + ")");
    }
    long available = 0;
    for (std::size_t k = 0; k < capacities.size(); ++k) {
        const int limit = network.qpus[k].config.num_processing();
        if (capacities[k] < 0 || capacities[k] > limit) {
            throw ArgumentError("capacity of " + network.qpus[k].name + " must lie in [0, " +
                                std::to_string(limit) + "]");
        }
        available += capacities[k];
    }
    if (circuit.num_qubits > available) {
        throw ResourceError("partition needs " + std::to_string(circuit.num_qubits) +
                            " processing qubits but only " + std::to_string(available) +
                            " are available");
    }

    std::vector<Address> home;
    home.reserve(circuit.num_qubits);
    std::size_t node = 0;
    int used = 0;
    for (int q = 0; q < circuit.num_qubits; ++q) {
        while (used >= capacities[node]) {
            ++node;
            used = 0;
        }
        const int base = network.qpus[node].config.num_comm_qubits;
        home.push_back(Address{base + used, static_cast<int>(node)});
        ++used;
    }

    Partition out;
    out.qmap = LogicalQubitMap(home);
    // One INIT per node, in node order.
    std::map<int, std::vector<Address>> by_node;
    for (const auto &a : home) {
        by_node[a.node].push_back(a);
    }
    for (auto &[n, addrs] : by_node) {
        out.circuit.gates.push_back(DistributedGate{qstate::make_gate(GateKind::Init), addrs, {}, {}});
    }
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const auto &g = circuit.gates[i];
        DistributedGate d{g.gate, {}, {}, g.cbit};
        for (int q : g.qubits) {
            if (q < 0 || q >= circuit.num_qubits) {
                throw ArgumentError("gate " + std::to_string(i) + " uses qubit " + std::to_string(q) +
                                    " outside [0, " + std::to_string(circuit.num_qubits) + ")");
            }
            d.operands.push_back(home[q]);
        }
        if (g.gate.kind == GateKind::Init) {
            std::map<int, std::vector<Address>> split;
            for (const auto &a : d.operands) {
                split[a.node].push_back(a);
            }
            for (auto &[n, addrs] : split) {
                out.circuit.gates.push_back(DistributedGate{g.gate, addrs, {}, {}});
            }
            continue;
        }
        if (d.spans_nodes()) {
            if (d.operands.size() > 2) {
                throw ArgumentError("gate " + std::to_string(i) + " (" + g.gate.to_string() +
                                    ") spans nodes with more than two qubits; decompose it first");
            }
            d.scheme = default_scheme;
        }
        out.circuit.gates.push_back(std::move(d));
    }
    return out;
}

std::vector<Diagnostic> validate_distributed(const DistributedCircuit &circuit,
                                             const hardware::DqcNetwork &network) {
    std::vector<Diagnostic> out;
    auto diag = [&](std::size_t i, std::string msg) { out.push_back({i, std::move(msg)}); };
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const auto &g = circuit.gates[i];
        const std::string name = g.gate.to_string();
        if (g.operands.empty()) {
            diag(i, name + " has no operands");
            continue;
        }
        bool addresses_ok = true;
        for (const auto &a : g.operands) {
            if (a.node < 0 || a.node >= static_cast<int>(network.size())) {
                diag(i, name + ": node " + hardware::node_name(a.node) + " does not exist");
                addresses_ok = false;
                continue;
            }
            const auto &cfg = network.qpus[a.node].config;
            if (!cfg.in_range(a.position)) {
                diag(i, name + ": position " + std::to_string(a.position) + " is outside " +
                            network.qpus[a.node].name + "'s memory of " +
                            std::to_string(cfg.num_positions));
                addresses_ok = false;
            } else if (cfg.is_comm(a.position)) {
                diag(i, name + ": " + to_string(a) + " is a communication position");
            }
        }
        std::set<Address> distinct(g.operands.begin(), g.operands.end());
        if (distinct.size() != g.operands.size()) {
            diag(i, name + ": repeated operand");
        }
        if (g.gate.kind == GateKind::Init) {
            if (g.spans_nodes()) {
                diag(i, "INIT operands must all live on one node");
            }
            if (g.scheme) {
                diag(i, "INIT must not carry a remote gate type");
            }
            continue;
        }
        if (static_cast<int>(g.operands.size()) != g.gate.arity()) {
            diag(i, name + " expects " + std::to_string(g.gate.arity()) + " operand(s), got " +
                        std::to_string(g.operands.size()));
        }
        if (g.gate.kind == GateKind::Measure && !g.cbit) {
            diag(i, "MEASURE needs a classical bit index");
        }
        const bool spans = g.spans_nodes();
        if (spans && !g.scheme) {
            diag(i, name + " spans nodes but carries no remote gate type");
        }
        if (!spans && g.scheme) {
            diag(i, "local " + name + " carries remote gate type '" +
                        std::string(scheme_name(*g.scheme)) + "'");
        }
        if (spans) {
            if (g.operands.size() > 2) {
                diag(i, name + ": remote gates on more than two qubits are not supported");
            } else if (addresses_ok &&
                       !network.has_quantum_link(g.operands[0].node, g.operands[1].node)) {
                diag(i, name + ": no quantum link between " +
                            hardware::node_name(g.operands[0].node) + " and " +
                            hardware::node_name(g.operands[1].node));
            }
            if (addresses_ok && g.operands.size() == 2 &&
                !network.has_classical_link(g.operands[0].node, g.operands[1].node)) {
                diag(i, name + ": no classical link between " +
                            hardware::node_name(g.operands[0].node) + " and " +
                            hardware::node_name(g.operands[1].node));
            }
        }
    }
    return out;
}

} // namespace dqcsim::circuit
