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
 * Master protocol: one worker task per QPU walks its instruction stream on
 * the event kernel; results are collected into one row per shot.
 */
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dqcsim/compiler/compiler.hpp"
#include "dqcsim/hardware/machine.hpp"
#include "dqcsim/qstate/registry.hpp"
#include "dqcsim/sim/kernel.hpp"

namespace dqcsim::runtime {

/// Qubits to score and the pure state they should hold at the end of a run.
struct FidelitySpec {
    std::vector<circuit::Address> targets;
    std::vector<qstate::cplx> desired;
};

/// Throws ArgumentError unless desired has 2^|targets| entries.
FidelitySpec make_fidelity_collector(std::vector<circuit::Address> targets, std::vector<qstate::cplx> desired);

struct RunOptions {
    qstate::Formalism formalism = qstate::Formalism::DensityMatrix;
    /// Skip the single-qubit gate error on COND_APPLY corrections.
    bool noiseless_corrections = false;
    /// Record "t=<ns> node=<name> <instruction>" lines.
    bool verbose = false;
};

enum class WorkerStatus { Running, Blocked, Done };

struct WorkerState {
    int qpu = 0;
    std::size_t pc = 0;
    std::map<std::string, int> vars;
    std::map<int, int> slots; // ENTANGLE slot -> comm position
    WorkerStatus status = WorkerStatus::Running;
    std::string reason;
};

/// One simulation instance: kernel, quantum state, machine and workers.
class Simulation {
  public:
    Simulation(const hardware::DqcNetwork &network, const RunOptions &options, std::uint64_t seed);
    ~Simulation();

    Simulation(const Simulation &) = delete;
    Simulation &operator=(const Simulation &) = delete;

    /// Queue reported measurement outcomes (branch enumeration).
    void force_outcomes(std::vector<int> outcomes);

    /// Runs every stream to completion. Throws sim::DeadlockError or RuntimeFault.
    sim::SimTime run(const std::vector<compiler::InstructionStream> &streams);

    /// Catch up idle noise on the targets to now, then score them.
    double fidelity(const FidelitySpec &spec);

    const std::map<int, int> &classical_bits() const noexcept { return cbits_; }
    const std::vector<std::string> &trace_lines() const noexcept { return trace_; }
    const WorkerState &worker(int qpu) const { return workers_.at(qpu); }

    sim::Kernel &kernel() noexcept { return kernel_; }
    qstate::StateRegistry &states() noexcept { return states_; }
    hardware::Machine &machine() noexcept { return *machine_; }

  private:
    void step(int qpu);
    std::string node(int qpu) const;

    const hardware::DqcNetwork &network_;
    RunOptions options_;
    sim::Kernel kernel_;
    qstate::StateRegistry states_;
    std::unique_ptr<hardware::Machine> machine_;
    const std::vector<compiler::InstructionStream> *streams_ = nullptr;
    std::vector<WorkerState> workers_;
    std::vector<sim::TaskId> tasks_;
    std::map<int, int> cbits_;
    std::vector<std::string> trace_;
};

struct RunRow {
    std::size_t shot = 0;
    std::optional<double> fidelity;
    sim::SimTime final_time = 0;
    std::uint64_t seed = 0;
    std::map<int, int> classical_bits;
    std::string error; // empty on success
    std::vector<std::string> trace;
};

struct RunResult {
    std::vector<RunRow> rows;

    /// Header: shot,fidelity,final_time_ns,seed,classical_bits (plus error when any shot failed).
    std::string to_csv() const;
    std::string to_json() const;
    /// Mean over successful rows with a fidelity; NaN if none.
    double mean_fidelity() const;
};

/// Everything a shot needs: hardware, compiled program and optional scoring.
struct Scenario {
    hardware::DqcNetwork network;
    compiler::Program program;
    std::optional<FidelitySpec> collector;
    RunOptions options;
};

/// One shot on a fresh instance. Errors propagate.
RunRow run_master(const Scenario &scenario, std::uint64_t seed, std::vector<int> forced_outcomes = {});

struct ShotOptions {
    bool fail_fast = false;
    /// Run shots on OpenMP threads; rows are still ordered by shot.
    bool parallel = true;
};

/// Shot k is seeded base_seed + k. Failed shots are recorded in their row
/// unless fail_fast, in which case the first failure (by shot order) is rethrown.
RunResult run_shots(const Scenario &scenario, std::size_t n_shots, std::uint64_t base_seed,
                    const ShotOptions &options = {});

struct Branch {
    std::vector<int> outcomes; // reported bits in measurement order
    double fidelity = 0;
};

/// Runs every reachable assignment of measurement outcomes (up to
/// 2^max_measurements leaves). Requires a collector.
std::vector<Branch> enumerate_branches(const Scenario &scenario, std::uint64_t seed,
                                       std::size_t max_measurements = 16);

} // namespace dqcsim::runtime
