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
 * Remote-gate compiler: expands a distributed circuit into one instruction
 * stream per QPU. Cross-node gates become entanglement requests, local
 * primitives, measurements, classical messages and conditional corrections
 * according to their scheme (cat, 1tp, 2tp, tp_safe).
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqcsim/circuit/circuit.hpp"
#include "dqcsim/hardware/network.hpp"
#include "dqcsim/qstate/registry.hpp"

namespace dqcsim::compiler {

enum class OpCode { Init, Apply, Entangle, Measure, Send, Recv, CondApply, Free, SwapInternal };

std::string_view opcode_name(OpCode op);

/// A memory position, or a slot: the comm position bound by an earlier ENTANGLE.
struct Operand {
    enum class Kind { Position, Slot };
    Kind kind = Kind::Position;
    int value = 0;

    static Operand position(int p) { return {Kind::Position, p}; }
    static Operand slot(int s) { return {Kind::Slot, s}; }

    bool operator==(const Operand &) const = default;
};

std::string to_string(const Operand &o);

struct Instruction {
    OpCode op = OpCode::Apply;
    qstate::GateSpec gate;          // APPLY, COND_APPLY
    std::vector<Operand> operands;  // INIT: positions; SWAP_INTERNAL: (from, to)
    int peer = -1;                  // ENTANGLE, SEND, RECV
    std::uint64_t tag = 0;          // ENTANGLE pair tag or message tag
    int slot = -1;                  // ENTANGLE: slot bound on delivery
    qstate::Basis basis = qstate::Basis::Z;
    std::vector<std::string> vars;  // MEASURE: destination; SEND/RECV: payload; COND_APPLY: predicate
    std::optional<int> report_cbit; // MEASURE of a circuit bit

    bool operator==(const Instruction &) const = default;
};

/// One line of the stream text format, without indentation.
std::string format_instruction(const Instruction &ins);

struct InstructionStream {
    int qpu = 0;
    std::vector<Instruction> instructions;
};

struct ResourceReport {
    std::size_t ebits = 0;
    std::size_t classical_bits = 0;
    std::vector<std::size_t> instructions_per_qpu;
    /// Timed instructions (APPLY, MEASURE, SWAP_INTERNAL) per QPU.
    std::vector<std::size_t> depth_per_qpu;
};

struct CompileOptions {
    /// Scheme for cross-node gates that carry none (e.g. after a relocation).
    circuit::Scheme default_scheme = circuit::Scheme::Cat;
};

struct Program {
    std::vector<InstructionStream> streams; // one per QPU, in node order
    circuit::LogicalQubitMap initial_qmap;
    circuit::LogicalQubitMap final_qmap;
    ResourceReport resources;

    /// Current address of the logical qubit that started at `home`.
    circuit::Address resolve(const circuit::Address &home) const;
};

/// Operands of `circuit` name logical qubits by their address in `qmap`;
/// addresses missing from it are added. Throws ResourceError when a QPU runs
/// out of comm or processing positions, TopologyError when a remote gate has
/// no link, ArgumentError for a scheme the gate does not support.
Program compile(const circuit::DistributedCircuit &circuit, const hardware::DqcNetwork &network,
                circuit::LogicalQubitMap qmap, const CompileOptions &options = {});

ResourceReport count_resources(const std::vector<InstructionStream> &streams);

/// Assembly-like listing: ".qpu node_k" headers followed by indented instructions.
std::string format_program(const Program &program, const hardware::DqcNetwork &network);

} // namespace dqcsim::compiler
