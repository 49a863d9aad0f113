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
 * Gate-tuple circuits. A monolithic circuit addresses a flat qubit index
 * space; a distributed circuit addresses (memory position, node) pairs and
 * tags every cross-node gate with the remote-gate scheme used to realize it.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqcsim/hardware/network.hpp"
#include "dqcsim/qstate/gates.hpp"

namespace dqcsim::circuit {

using qstate::GateKind;
using qstate::GateSpec;

enum class Scheme { Cat, TP1, TP2, TPSafe };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view text);

struct MonolithicGate {
    GateSpec gate;
    std::vector<int> qubits;
    /// Classical bit written by a MEASURE.
    std::optional<int> cbit;

    bool operator==(const MonolithicGate &) const = default;
};

struct MonolithicCircuit {
    int num_qubits = 0;
    int num_cbits = 0;
    std::vector<MonolithicGate> gates;

    bool operator==(const MonolithicCircuit &) const = default;
};

/// A qubit address: memory position on a node.
struct Address {
    int position = 0;
    int node = 0;

    auto operator<=>(const Address &) const = default;
};

std::string to_string(const Address &a);

struct DistributedGate {
    GateSpec gate;
    std::vector<Address> operands;
    std::optional<Scheme> scheme;
    std::optional<int> cbit;

    bool operator==(const DistributedGate &) const = default;

    bool spans_nodes() const;
};

struct DistributedCircuit {
    std::vector<DistributedGate> gates;

    bool operator==(const DistributedCircuit &) const = default;
};

/// Logical qubit index -> current (node, position).
class LogicalQubitMap {
  public:
    LogicalQubitMap() = default;
    explicit LogicalQubitMap(std::vector<Address> locations);

    std::size_t size() const noexcept { return locations_.size(); }
    const Address &at(std::size_t logical) const { return locations_.at(logical); }
    const std::vector<Address> &locations() const noexcept { return locations_; }

    std::optional<std::size_t> logical_at(const Address &a) const;
    /// Moves a logical qubit; throws if the destination is held by another.
    void relocate(std::size_t logical, const Address &to);
    std::size_t add(const Address &a);

    bool operator==(const LogicalQubitMap &) const = default;

  private:
    std::vector<Address> locations_;
};

struct Partition {
    DistributedCircuit circuit;
    LogicalQubitMap qmap;
};

/// (circuit, per-node processing capacities, default scheme) -> partition.
using PartitionerStrategy =
    std::function<Partition(const MonolithicCircuit &, const hardware::DqcNetwork &, Scheme)>;

/// Contiguous blocks by index: the first capacity_0 qubits go to node_0, etc.
Partition partition_contiguous(const MonolithicCircuit &circuit, const hardware::DqcNetwork &network,
                               Scheme default_scheme);

/// Same rule against explicit capacities; node k uses processing positions
/// [num_comm_qubits, ...) of node k's configuration in `network`.
Partition partition_contiguous(const MonolithicCircuit &circuit, const std::vector<int> &capacities,
                               const hardware::DqcNetwork &network, Scheme default_scheme);

struct Diagnostic {
    std::size_t gate_index;
    std::string message;
};

/// Structural checks against a network; an empty result means valid.
std::vector<Diagnostic> validate_distributed(const DistributedCircuit &circuit,
                                             const hardware::DqcNetwork &network);

/// Reads the plain-text distributed circuit format, one gate per line:
///   GATE[(p1,...)] pos@node_k [pos@node_k ...] [scheme] [-> c<bit>]
/// `#` starts a comment. Throws ParseError with line and column.
DistributedCircuit parse_distributed(std::string_view text);

/// Writes the format read by parse_distributed.
std::string format_distributed(const DistributedCircuit &circuit);

/// Logical map with one entry per distinct operand address, in first-use order.
LogicalQubitMap infer_qubit_map(const DistributedCircuit &circuit);

} // namespace dqcsim::circuit
