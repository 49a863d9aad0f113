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
 * Shared quantum states over dynamically merged groups of qubits.
 *
 * Every live qubit belongs to exactly one JointState. Entangling operations
 * merge the groups of their operands (tensor product, concatenation order);
 * measurement factors the measured qubit back out when the outcome is sharp.
 * Memory noise is charged lazily: a qubit remembers when it was last touched
 * and is depolarized for the elapsed idle time on its next access.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dqcsim/qstate/gates.hpp"
#include "dqcsim/sim/kernel.hpp"

namespace dqcsim::qstate {

enum class Formalism { Ket, DensityMatrix };
enum class Basis { Z, X };

using QubitId = std::uint32_t;

struct JointState {
    std::vector<QubitId> members;
    /// 2^n amplitudes (ket) or a row-major 2^n x 2^n matrix (density matrix).
    std::vector<cplx> data;
};

/// A forced measurement outcome had (numerically) zero probability.
class ImpossibleBranch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class StateRegistry {
  public:
    using Clock = std::function<sim::SimTime()>;

    StateRegistry(Formalism formalism, sim::Rng &rng, Clock clock);

    Formalism formalism() const noexcept { return formalism_; }

    /// n fresh qubits, each its own |0> state, touched now.
    std::vector<QubitId> init_qubits(std::size_t n, double memory_depolar_rate_hz);

    void apply_gate(const GateSpec &gate, std::span<const QubitId> targets);
    void apply_unitary(std::span<const cplx> matrix, std::span<const QubitId> targets);

    /// Joint depolarization with the (I / 2^k)-mixing parameter p.
    void apply_depolarizing(std::span<const QubitId> targets, double p);

    /// Depolarize for the idle time since the qubit was last touched.
    void decoherence_catch_up(QubitId q);
    /// Mark the qubit as touched now without charging noise.
    void touch(QubitId q);

    /// Projective measurement; the reported bit is flipped with probability flip_prob.
    int measure(QubitId q, Basis basis, double flip_prob);

    /// <psi| rho_targets |psi> over the joint marginal of `targets` (in that order).
    double fidelity(std::span<const QubitId> targets, std::span<const cplx> psi) const;
    std::vector<cplx> reduced_density_matrix(std::span<const QubitId> targets) const;

    /// Trace out (density matrix) or measure and drop (ket).
    void discard(QubitId q);

    /// Merge the groups holding a and b. Both in one group already is an error.
    void merge(QubitId a, QubitId b);

    /// Replace fresh singleton qubits by the joint state `rho` (2^k x 2^k).
    /// The ket backend samples an eigenvector of rho by its eigenvalue.
    void assign_state(std::span<const QubitId> qubits, std::span<const cplx> rho);

    const JointState &state_of(QubitId q) const;
    bool alive(QubitId q) const;
    std::size_t live_qubits() const noexcept { return live_; }
    sim::SimTime last_touched(QubitId q) const;
    double memory_rate(QubitId q) const;
    void set_memory_rate(QubitId q, double rate_hz);

    /// Queue reported outcomes for the next measurements (branch enumeration).
    void force_outcomes(std::vector<int> outcomes);
    std::size_t measurements_taken() const noexcept { return measurements_; }

    /// Largest violation of the state invariants (norm / trace / hermiticity / positivity).
    double invariant_violation() const;

  private:
    struct QubitRecord {
        std::size_t group = 0;
        bool alive = false;
        sim::SimTime last_touched = 0;
        double rate = 0;
    };

    QubitRecord &record(QubitId q);
    const QubitRecord &record(QubitId q) const;
    unsigned position(const JointState &s, QubitId q) const;
    unsigned num_qubits(const JointState &s) const { return static_cast<unsigned>(s.members.size()); }
    std::size_t new_group(JointState s);
    std::size_t merge_groups(std::size_t ga, std::size_t gb);
    std::size_t gather(std::span<const QubitId> qubits);
    void depolarize_group(std::size_t g, std::span<const unsigned> positions, double p);
    void split_out(std::size_t g, QubitId q, int outcome, double prob);
    int sample_true_outcome(double p_one, std::optional<int> forced);

    Formalism formalism_;
    sim::Rng &rng_;
    Clock clock_;
    std::vector<QubitRecord> qubits_;
    std::vector<std::optional<JointState>> groups_;
    std::vector<std::size_t> free_groups_;
    std::vector<int> forced_;
    std::size_t forced_pos_ = 0;
    std::size_t measurements_ = 0;
    std::size_t live_ = 0;
};

/// Phi+ = (|00> + |11>) / sqrt(2) as amplitudes.
std::vector<cplx> bell_phi_plus();

/// F |Phi+><Phi+| + (1 - F)/3 (I - |Phi+><Phi+|), row-major 4x4.
std::vector<cplx> werner_state(double fidelity);

/// 1 - exp(-rate * dt), dt in nanoseconds and rate in Hz.
double memory_depolar_probability(double rate_hz, sim::SimTime dt_ns);

} // namespace dqcsim::qstate
