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

#include "dqcsim/hardware/network.hpp"

#include <cmath>
#include <set>
#include <string>

#include "dqcsim/errors.hpp"
#include "dqcsim/qstate/registry.hpp"

namespace dqcsim::hardware {

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) {
        throw ArgumentError(msg);
    }
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }
bool non_negative(double x) { return x >= 0.0 && std::isfinite(x); }

std::string pair_text(const Link &l) {
    return "(" + std::to_string(l.first) + ", " + std::to_string(l.second) + ")";
}

} // namespace

void QpuConfig::validate() const {
    require(num_positions >= 1, "num_positions must be at least 1");
    require(num_comm_qubits >= 0 && num_comm_qubits <= num_positions,
            "num_comm_qubits must lie in [0, num_positions]");
    require(non_negative(single_qubit_gate_time), "single_qubit_gate_time must be >= 0");
    require(non_negative(two_qubit_gate_time), "two_qubit_gate_time must be >= 0");
    require(non_negative(measurement_time), "measurement_time must be >= 0");
    require(is_probability(single_qubit_gate_error_prob), "single_qubit_gate_error_prob must lie in [0, 1]");
    require(is_probability(p_depolar_error_cnot), "p_depolar_error_cnot must lie in [0, 1]");
    require(is_probability(meas_error_prob), "meas_error_prob must lie in [0, 1]");
    require(non_negative(comm_qubit_depolar_rate), "comm_qubit_depolar_rate must be >= 0");
    require(non_negative(proc_qubit_depolar_rate), "proc_qubit_depolar_rate must be >= 0");
}

void ConnectionConfig::validate() const {
    require(non_negative(delay), "connection delay must be >= 0");
    require(state4distribution.size() == 16, "state4distribution must be a 4x4 matrix");
    qstate::cplx trace = 0;
    for (int i = 0; i < 4; ++i) {
        trace += state4distribution[i * 4 + i];
        for (int j = 0; j < 4; ++j) {
            require(std::abs(state4distribution[i * 4 + j] - std::conj(state4distribution[j * 4 + i])) < 1e-9,
                    "state4distribution must be Hermitian");
        }
    }
    require(std::abs(trace - qstate::cplx{1}) < 1e-9, "state4distribution must have unit trace");
}

ConnectionConfig ConnectionConfig::werner(sim::SimTime delay, double fidelity) {
    return ConnectionConfig{delay, qstate::werner_state(fidelity)};
}

std::optional<int> DqcNetwork::find(const std::string &name) const {
    const auto idx = parse_node_name(name);
    if (!idx || *idx >= static_cast<int>(qpus.size())) {
        return std::nullopt;
    }
    return idx;
}

std::string node_name(int index) { return "node_" + std::to_string(index); }

std::optional<int> parse_node_name(const std::string &name) {
    constexpr std::string_view prefix = "node_";
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    int value = 0;
    for (std::size_t i = prefix.size(); i < name.size(); ++i) {
        const char c = name[i];
        if (c < '0' || c > '9' || value > 100000000) {
            return std::nullopt;
        }
        value = value * 10 + (c - '0');
    }
    // Reject leading zeros so names map one-to-one onto indices.
    if (name.size() > prefix.size() + 1 && name[prefix.size()] == '0') {
        return std::nullopt;
    }
    return value;
}

std::vector<Link> all_pairs(int num_qpus) {
    std::vector<Link> out;
    for (int i = 0; i < num_qpus; ++i) {
        for (int j = i + 1; j < num_qpus; ++j) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

DqcNetwork build_dqc(int num_qpus, const std::vector<Link> &quantum_topology,
                     const std::vector<Link> &classical_topology, const QpuConfig &qpu_config,
                     const ConnectionConfig &conn_config, sim::SimTime classical_delay) {
    if (num_qpus < 1) {
        throw TopologyError("a DQC needs at least one QPU");
    }
    qpu_config.validate();
    conn_config.validate();
    if (!non_negative(classical_delay)) {
        throw ArgumentError("classical_delay must be >= 0");
    }
    DqcNetwork net;
    for (int i = 0; i < num_qpus; ++i) {
        net.qpus.push_back({node_name(i), qpu_config});
    }
    auto check = [&](const Link &l, const char *kind, std::set<Link> &seen) {
        if (l.first < 0 || l.second < 0 || l.first >= num_qpus || l.second >= num_qpus) {
            throw TopologyError(std::string(kind) + " link " + pair_text(l) +
                                " references a QPU outside [0, " + std::to_string(num_qpus) + ")");
        }
        if (l.first == l.second) {
            throw TopologyError(std::string(kind) + " link " + pair_text(l) + " is a self-loop");
        }
        if (!seen.insert(make_link(l.first, l.second)).second) {
            throw TopologyError(std::string(kind) + " link " + pair_text(l) + " is a duplicate");
        }
    };
    std::set<Link> seen_q, seen_c;
    for (const auto &l : quantum_topology) {
        check(l, "quantum", seen_q);
        net.quantum_links.emplace(make_link(l.first, l.second), conn_config);
    }
    for (const auto &l : classical_topology) {
        check(l, "classical", seen_c);
        net.classical_links.emplace(make_link(l.first, l.second), classical_delay);
    }
    return net;
}

} // namespace dqcsim::hardware
