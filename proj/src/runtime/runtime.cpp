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

#include "dqcsim/runtime/runtime.hpp"

#include <cmath>
#include <cstdio>
#include <exception>

#include <nlohmann/json.hpp>

#include "dqcsim/errors.hpp"

namespace dqcsim::runtime {

using compiler::Instruction;
using compiler::OpCode;
using compiler::Operand;

FidelitySpec make_fidelity_collector(std::vector<circuit::Address> targets, std::vector<qstate::cplx> desired) {
    if (targets.empty() || targets.size() > 20 || desired.size() != (std::size_t{1} << targets.size())) {
        throw ArgumentError("desired state has " + std::to_string(desired.size()) + " amplitude(s) but " +
                            std::to_string(targets.size()) + " target qubit(s) need " +
                            std::to_string(std::size_t{1} << std::min<std::size_t>(targets.size(), 20)));
    }
    return FidelitySpec{std::move(targets), std::move(desired)};
}

Simulation::Simulation(const hardware::DqcNetwork &network, const RunOptions &options, std::uint64_t seed)
    : network_(network), options_(options), kernel_(seed),
      states_(options.formalism, kernel_.rng(), [this] { return kernel_.now(); }),
      machine_(std::make_unique<hardware::Machine>(network_, kernel_, states_)) {
    kernel_.set_trace_enabled(false);
}

Simulation::~Simulation() = default;

void Simulation::force_outcomes(std::vector<int> outcomes) { states_.force_outcomes(std::move(outcomes)); }

std::string Simulation::node(int qpu) const { return network_.qpus.at(qpu).name; }

sim::SimTime Simulation::run(const std::vector<compiler::InstructionStream> &streams) {
    streams_ = &streams;
    workers_.assign(network_.size(), WorkerState{});
    tasks_.assign(network_.size(), 0);
    for (std::size_t k = 0; k < network_.size(); ++k) {
        workers_[k].qpu = static_cast<int>(k);
    }
    for (const auto &s : streams) {
        if (s.qpu < 0 || s.qpu >= static_cast<int>(network_.size())) {
            throw RuntimeFault("instruction stream for unknown QPU index " + std::to_string(s.qpu));
        }
    }
    for (std::size_t k = 0; k < network_.size(); ++k) {
        const int qpu = static_cast<int>(k);
        tasks_[k] = kernel_.spawn(node(qpu), [this, qpu] { step(qpu); });
    }
    try {
        return kernel_.run();
    } catch (const sim::DeadlockError &) {
        for (auto &w : workers_) {
            if (w.status != WorkerStatus::Done) {
                w.status = WorkerStatus::Blocked;
            }
        }
        throw;
    }
}

void Simulation::step(int qpu) {
    static const std::vector<Instruction> kEmpty;
    const std::vector<Instruction> *prog = &kEmpty;
    for (const auto &s : *streams_) {
        if (s.qpu == qpu) {
            prog = &s.instructions;
        }
    }
    WorkerState &w = workers_[qpu];
    const sim::TaskId task = tasks_[qpu];
    w.status = WorkerStatus::Running;
    w.reason.clear();

    auto block = [&](std::string reason) {
        w.status = WorkerStatus::Blocked;
        w.reason = "pc=" + std::to_string(w.pc) + ": " + reason;
        kernel_.block(task, w.reason);
    };
    // Advances pc and wakes the worker; used by completion callbacks.
    auto resume = [this, qpu, task] {
        ++workers_[qpu].pc;
        kernel_.wake(task);
    };

    while (w.pc < prog->size()) {
        const Instruction &ins = (*prog)[w.pc];
        const std::string text = compiler::format_instruction(ins);
        if (options_.verbose) {
            char t[40];
            std::snprintf(t, sizeof t, "%.17g", kernel_.now());
            trace_.push_back(std::string("t=") + t + " node=" + node(qpu) + " " + text);
        }
        auto position = [&](const Operand &o) {
            if (o.kind == Operand::Kind::Position) {
                return o.value;
            }
            auto it = w.slots.find(o.value);
            if (it == w.slots.end()) {
                throw RuntimeFault("slot $e" + std::to_string(o.value) + " is not bound");
            }
            return it->second;
        };
        auto var = [&](const std::string &name) {
            auto it = w.vars.find(name);
            if (it == w.vars.end()) {
                throw RuntimeFault("classical variable " + name + " is not set");
            }
            return it->second;
        };
        try {
            switch (ins.op) {
            case OpCode::Init: {
                std::vector<int> ps;
                for (const auto &o : ins.operands) {
                    ps.push_back(position(o));
                }
                machine_->init_positions(qpu, ps);
                ++w.pc;
                continue;
            }
            case OpCode::Apply: {
                std::vector<int> ps;
                for (const auto &o : ins.operands) {
                    ps.push_back(position(o));
                }
                machine_->execute_gate(qpu, ins.gate, std::move(ps), resume);
                block(text + " in progress");
                return;
            }
            case OpCode::Measure: {
                const std::string dest = ins.vars.at(0);
                const auto report = ins.report_cbit;
                machine_->execute_measure(qpu, position(ins.operands.at(0)), ins.basis,
                                          [this, qpu, dest, report, resume](int bit) {
                                              workers_[qpu].vars[dest] = bit;
                                              if (report) {
                                                  cbits_[*report] = bit;
                                              }
                                              resume();
                                          });
                block(text + " in progress");
                return;
            }
            case OpCode::SwapInternal:
                machine_->execute_swap(qpu, position(ins.operands.at(0)), position(ins.operands.at(1)), resume);
                block(text + " in progress");
                return;
            case OpCode::Entangle: {
                const int slot = ins.slot;
                machine_->request_entanglement(qpu, ins.peer, ins.tag, [this, qpu, slot, resume](int pos) {
                    workers_[qpu].slots[slot] = pos;
                    resume();
                });
                block("ENTANGLE with " + node(ins.peer) + " (pair #" + std::to_string(ins.tag) + ")");
                return;
            }
            case OpCode::Send: {
                hardware::Bits bits;
                for (const auto &v : ins.vars) {
                    bits.push_back(var(v));
                }
                machine_->send_classical(qpu, ins.peer, ins.tag, std::move(bits));
                ++w.pc;
                continue;
            }
            case OpCode::Recv: {
                // recv_classical calls back synchronously when the message is already waiting.
                auto sync = std::make_shared<bool>(true);
                auto arrived = std::make_shared<bool>(false);
                const auto names = ins.vars;
                machine_->recv_classical(qpu, ins.peer, ins.tag,
                                         [this, qpu, names, sync, arrived, resume](hardware::Bits bits) {
                                             auto &wk = workers_[qpu];
                                             for (std::size_t i = 0; i < names.size() && i < bits.size(); ++i) {
                                                 wk.vars[names[i]] = bits[i];
                                             }
                                             if (*sync) {
                                                 *arrived = true;
                                             } else {
                                                 resume();
                                             }
                                         });
                *sync = false;
                if (*arrived) {
                    ++w.pc;
                    continue;
                }
                block("RECV from " + node(ins.peer) + " (message #" + std::to_string(ins.tag) + ")");
                return;
            }
            case OpCode::CondApply:
                if (var(ins.vars.at(0)) == 1) {
                    machine_->apply_correction(qpu, ins.gate, position(ins.operands.at(0)),
                                               options_.noiseless_corrections);
                }
                ++w.pc;
                continue;
            case OpCode::Free: {
                const Operand &o = ins.operands.at(0);
                if (o.kind == Operand::Kind::Slot) {
                    const int pos = position(o);
                    w.slots.erase(o.value);
                    machine_->free_comm_qubit(qpu, pos);
                } else {
                    machine_->discard_position(qpu, o.value);
                }
                ++w.pc;
                continue;
            }
            }
        } catch (const RuntimeFault &e) {
            throw RuntimeFault(node(qpu) + " pc=" + std::to_string(w.pc) + " (" + text + "): " + e.what());
        } catch (const TopologyError &e) {
            throw RuntimeFault(node(qpu) + " pc=" + std::to_string(w.pc) + " (" + text + "): " + e.what());
        }
    }
    w.status = WorkerStatus::Done;
    kernel_.finish(task);
}

double Simulation::fidelity(const FidelitySpec &spec) {
    std::vector<qstate::QubitId> qs;
    for (const auto &a : spec.targets) {
        if (a.node < 0 || a.node >= static_cast<int>(network_.size())) {
            throw ArgumentError("fidelity target " + circuit::to_string(a) + " names no QPU");
        }
        qs.push_back(machine_->require_qubit(a.node, a.position));
    }
    for (auto q : qs) {
        states_.decoherence_catch_up(q);
    }
    return states_.fidelity(qs, spec.desired);
}

} // namespace dqcsim::runtime
