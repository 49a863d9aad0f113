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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dqcsim/qstate/gates.hpp"
#include "dqcsim/sim/kernel.hpp"

namespace dqcsim::hardware {

/// Noise and timing parameters of one QPU. Times in ns, rates in Hz.
struct QpuConfig {
    int num_positions = 10;
    int num_comm_qubits = 2;
    double single_qubit_gate_time = 0;
    double two_qubit_gate_time = 0;
    double measurement_time = 0;
    double single_qubit_gate_error_prob = 0;
    double p_depolar_error_cnot = 0;
    double meas_error_prob = 0;
    double comm_qubit_depolar_rate = 0;
    double proc_qubit_depolar_rate = 0;

    void validate() const;

    int num_processing() const { return num_positions - num_comm_qubits; }
    bool is_comm(int position) const { return position >= 0 && position < num_comm_qubits; }
    bool in_range(int position) const { return position >= 0 && position < num_positions; }
};

struct ConnectionConfig {
    sim::SimTime delay = 0;
    /// Row-major 4x4 density matrix handed out on every delivery.
    std::vector<qstate::cplx> state4distribution;

    void validate() const;

    static ConnectionConfig werner(sim::SimTime delay, double fidelity);
};

using Link = std::pair<int, int>;

/// Orders the endpoints of an undirected link.
inline Link make_link(int a, int b) { return a < b ? Link{a, b} : Link{b, a}; }

struct QpuSpec {
    std::string name;
    QpuConfig config;
};

struct DqcNetwork {
    std::vector<QpuSpec> qpus;
    std::map<Link, ConnectionConfig> quantum_links;
    std::map<Link, sim::SimTime> classical_links;

    std::size_t size() const { return qpus.size(); }
    std::optional<int> find(const std::string &name) const;
    bool has_quantum_link(int a, int b) const { return quantum_links.count(make_link(a, b)) != 0; }
    bool has_classical_link(int a, int b) const { return classical_links.count(make_link(a, b)) != 0; }
};

std::string node_name(int index);
/// Parses "node_<k>"; nullopt if the text does not follow the convention.
std::optional<int> parse_node_name(const std::string &name);

/// Wires num_qpus identically configured QPUs named node_0 .. node_(n-1).
/// Throws TopologyError on out-of-range indices, self-loops or duplicate links.
DqcNetwork build_dqc(int num_qpus, const std::vector<Link> &quantum_topology,
                     const std::vector<Link> &classical_topology, const QpuConfig &qpu_config,
                     const ConnectionConfig &conn_config, sim::SimTime classical_delay = 0);

/// All pairs (i, j), i < j, for n QPUs.
std::vector<Link> all_pairs(int num_qpus);

} // namespace dqcsim::hardware
