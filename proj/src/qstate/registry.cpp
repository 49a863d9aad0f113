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

#include "dqcsim/qstate/registry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "dqcsim/errors.hpp"
#include "dqcsim/qstate/kernels.hpp"

namespace dqcsim::qstate {

namespace {

bool is_dm(Formalism f) { return f == Formalism::DensityMatrix; }

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError(std::string(what) + ": probability must lie in [0, 1], got " +
                            std::to_string(p));
    }
}

void check_distinct(std::span<const QubitId> qs) {
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            if (qs[i] == qs[j]) {
                throw ArgumentError("repeated qubit handle " + std::to_string(qs[i]) +
                                    " in target list");
            }
        }
    }
}

const std::vector<cplx> &pauli(int which) {
    using namespace std::complex_literals;
    static const std::vector<cplx> kPaulis[4] = {
        {1, 0, 0, 1}, {0, 1, 1, 0}, {0, -1i, 1i, 0}, {1, 0, 0, -1}};
    return kPaulis[which];
}

} // namespace

double memory_depolar_probability(double rate_hz, sim::SimTime dt_ns) {
    if (rate_hz <= 0 || dt_ns <= 0) {
        return 0.0;
    }
    return -std::expm1(-rate_hz * dt_ns * 1e-9);
}

std::vector<cplx> bell_phi_plus() {
    const double r = M_SQRT1_2;
    return {r, 0, 0, r};
}

std::vector<cplx> werner_state(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
        throw ArgumentError("werner_state: fidelity must lie in [0, 1], got " +
                            std::to_string(fidelity));
    }
    const auto phi = bell_phi_plus();
    const double other = (1.0 - fidelity) / 3.0;
    std::vector<cplx> rho(16);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const cplx proj = phi[i] * std::conj(phi[j]);
            const double id = i == j ? 1.0 : 0.0;
            rho[i * 4 + j] = fidelity * proj + other * (id - proj);
        }
    }
    return rho;
}

StateRegistry::StateRegistry(Formalism formalism, sim::Rng &rng, Clock clock)
    : formalism_(formalism), rng_(rng), clock_(std::move(clock)) {}

StateRegistry::QubitRecord &StateRegistry::record(QubitId q) {
    if (q >= qubits_.size() || !qubits_[q].alive) {
        throw ArgumentError("qubit handle " + std::to_string(q) + " is not live");
    }
    return qubits_[q];
}

const StateRegistry::QubitRecord &StateRegistry::record(QubitId q) const {
    if (q >= qubits_.size() || !qubits_[q].alive) {
        throw ArgumentError("qubit handle " + std::to_string(q) + " is not live");
    }
    return qubits_[q];
}

unsigned StateRegistry::position(const JointState &s, QubitId q) const {
    auto it = std::find(s.members.begin(), s.members.end(), q);
    return static_cast<unsigned>(it - s.members.begin());
}

std::size_t StateRegistry::new_group(JointState s) {
    std::size_t g;
    if (!free_groups_.empty()) {
        g = free_groups_.back();
        free_groups_.pop_back();
        groups_[g] = std::move(s);
    } else {
        g = groups_.size();
        groups_.emplace_back(std::move(s));
    }
    for (QubitId q : groups_[g]->members) {
        qubits_[q].group = g;
    }
    return g;
}

std::vector<QubitId> StateRegistry::init_qubits(std::size_t n, double rate_hz) {
    if (n == 0) {
        throw ArgumentError("init_qubits: need at least one qubit");
    }
    std::vector<QubitId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto q = static_cast<QubitId>(qubits_.size());
        qubits_.push_back(QubitRecord{0, true, clock_(), rate_hz});
        ++live_;
        JointState s;
        s.members = {q};
        s.data = is_dm(formalism_) ? std::vector<cplx>{1, 0, 0, 0} : std::vector<cplx>{1, 0};
        new_group(std::move(s));
        out.push_back(q);
    }
    return out;
}

std::size_t StateRegistry::merge_groups(std::size_t ga, std::size_t gb) {
    JointState &a = *groups_[ga];
    JointState &b = *groups_[gb];
    JointState m;
    m.members = a.members;
    m.members.insert(m.members.end(), b.members.begin(), b.members.end());
    if (is_dm(formalism_)) {
        m.data = kernels::kron_dm(a.data, std::size_t{1} << a.members.size(), b.data,
                                  std::size_t{1} << b.members.size());
    } else {
        m.data = kernels::kron_ket(a.data, b.data);
    }
    groups_[ga].reset();
    groups_[gb].reset();
    free_groups_.push_back(gb);
    free_groups_.push_back(ga);
    return new_group(std::move(m));
}

std::size_t StateRegistry::gather(std::span<const QubitId> qubits) {
    std::size_t g = record(qubits.front()).group;
    for (QubitId q : qubits.subspan(1)) {
        const std::size_t h = record(q).group;
        if (h != g) {
            g = merge_groups(g, h);
        }
    }
    return g;
}

void StateRegistry::merge(QubitId a, QubitId b) {
    if (record(a).group == record(b).group) {
        throw ArgumentError("merge: qubits " + std::to_string(a) + " and " + std::to_string(b) +
                            " already share a joint state");
    }
    merge_groups(record(a).group, record(b).group);
}

void StateRegistry::apply_gate(const GateSpec &gate, std::span<const QubitId> targets) {
    if (!gate.is_unitary()) {
        throw ArgumentError("apply_gate: " + std::string(gate_name(gate.kind)) + " is not a unitary gate");
    }
    if (static_cast<int>(targets.size()) != gate.arity()) {
        throw ArgumentError("apply_gate: " + gate.to_string() + " expects " +
                            std::to_string(gate.arity()) + " target(s), got " +
                            std::to_string(targets.size()));
    }
    const auto m = gate.matrix();
    apply_unitary(m, targets);
}

void StateRegistry::apply_unitary(std::span<const cplx> matrix, std::span<const QubitId> targets) {
    check_distinct(targets);
    if (targets.empty()) {
        return;
    }
    const std::size_t g = gather(targets);
    for (QubitId q : targets) {
        decoherence_catch_up(q);
    }
    JointState &s = *groups_[g];
    std::vector<unsigned> pos;
    for (QubitId q : targets) {
        pos.push_back(position(s, q));
    }
    if (is_dm(formalism_)) {
        kernels::apply_unitary_dm(s.data, num_qubits(s), pos, matrix);
    } else {
        kernels::apply_matrix(s.data, num_qubits(s), pos, matrix);
    }
}

void StateRegistry::depolarize_group(std::size_t g, std::span<const unsigned> positions, double p) {
    if (p == 0.0) {
        return;
    }
    JointState &s = *groups_[g];
    if (is_dm(formalism_)) {
        kernels::depolarize_dm(s.data, num_qubits(s), positions, p);
        return;
    }
    // Unravelling: (I/d)-mixing with p equals a uniformly random non-identity
    // Pauli applied with probability p (4^k - 1) / 4^k.
    const std::size_t k = positions.size();
    const std::uint64_t paulis = std::uint64_t{1} << (2 * k);
    const double q = p * static_cast<double>(paulis - 1) / static_cast<double>(paulis);
    if (!rng_.bernoulli(q)) {
        return;
    }
    const std::uint64_t which = 1 + rng_.below(paulis - 1);
    for (std::size_t m = 0; m < k; ++m) {
        const int local = static_cast<int>((which >> (2 * (k - 1 - m))) & 3u);
        if (local != 0) {
            const unsigned pos[1] = {positions[m]};
            kernels::apply_matrix(s.data, num_qubits(s), pos, pauli(local));
        }
    }
}

void StateRegistry::apply_depolarizing(std::span<const QubitId> targets, double p) {
    check_probability(p, "apply_depolarizing");
    check_distinct(targets);
    if (targets.empty()) {
        return;
    }
    if (p == 0.0) {
        return;
    }
    const std::size_t g = gather(targets);
    std::vector<unsigned> pos;
    for (QubitId q : targets) {
        pos.push_back(position(*groups_[g], q));
    }
    depolarize_group(g, pos, p);
}

void StateRegistry::decoherence_catch_up(QubitId q) {
    QubitRecord &r = record(q);
    const sim::SimTime now = clock_();
    const double p = memory_depolar_probability(r.rate, now - r.last_touched);
    r.last_touched = now;
    if (p > 0) {
        const unsigned pos[1] = {position(*groups_[r.group], q)};
        depolarize_group(r.group, pos, p);
    }
}

void StateRegistry::touch(QubitId q) { record(q).last_touched = clock_(); }

sim::SimTime StateRegistry::last_touched(QubitId q) const { return record(q).last_touched; }

double StateRegistry::memory_rate(QubitId q) const { return record(q).rate; }

void StateRegistry::set_memory_rate(QubitId q, double rate_hz) { record(q).rate = rate_hz; }

void StateRegistry::force_outcomes(std::vector<int> outcomes) {
    forced_ = std::move(outcomes);
    forced_pos_ = 0;
}

int StateRegistry::sample_true_outcome(double p_one, std::optional<int> forced) {
    if (forced) {
        const double p = *forced ? p_one : 1.0 - p_one;
        if (p < 1e-14) {
            throw ImpossibleBranch("forced outcome " + std::to_string(*forced) +
                                   " has zero probability");
        }
        return *forced;
    }
    return rng_.uniform() < p_one ? 1 : 0;
}

void StateRegistry::split_out(std::size_t g, QubitId q, int outcome, double prob) {
    JointState &s = *groups_[g];
    const unsigned pos = position(s, q);
    const unsigned n = num_qubits(s);
    JointState rest;
    for (QubitId m : s.members) {
        if (m != q) {
            rest.members.push_back(m);
        }
    }
    JointState single;
    single.members = {q};
    if (is_dm(formalism_)) {
        rest.data = kernels::slice_dm(s.data, n, pos, outcome);
        for (auto &z : rest.data) {
            z /= prob;
        }
        single.data = outcome ? std::vector<cplx>{0, 0, 0, 1} : std::vector<cplx>{1, 0, 0, 0};
    } else {
        rest.data = kernels::slice_ket(s.data, n, pos, outcome);
        const double norm = std::sqrt(prob);
        for (auto &z : rest.data) {
            z /= norm;
        }
        single.data = outcome ? std::vector<cplx>{0, 1} : std::vector<cplx>{1, 0};
    }
    groups_[g].reset();
    free_groups_.push_back(g);
    if (!rest.members.empty()) {
        new_group(std::move(rest));
    }
    new_group(std::move(single));
}

int StateRegistry::measure(QubitId q, Basis basis, double flip_prob) {
    check_probability(flip_prob, "measure");
    decoherence_catch_up(q);
    const QubitId target[1] = {q};
    const auto h = make_gate(GateKind::H).matrix();
    if (basis == Basis::X) {
        apply_unitary(h, target);
    }
    std::optional<int> forced;
    if (forced_pos_ < forced_.size()) {
        forced = forced_[forced_pos_++];
    }
    ++measurements_;

    std::size_t g = record(q).group;
    JointState &s = *groups_[g];
    const unsigned pos = position(s, q);
    int reported;
    if (is_dm(formalism_)) {
        const double p_one = std::clamp(kernels::prob_one_dm(s.data, num_qubits(s), pos), 0.0, 1.0);
        // Reported-bit instrument: the classical flip leaves the qubit in its
        // true post-measurement state, which stays correlated with the record.
        const double p_rep_one = p_one * (1 - flip_prob) + (1 - p_one) * flip_prob;
        reported = sample_true_outcome(p_rep_one, forced);
        const double w1 = reported ? 1 - flip_prob : flip_prob;
        const double w0 = reported ? flip_prob : 1 - flip_prob;
        const double p_rep = reported ? p_rep_one : 1 - p_rep_one;
        if (w0 == 0.0 || w1 == 0.0) {
            const int truth = w1 == 0.0 ? 0 : 1;
            split_out(g, q, truth, truth ? p_one : 1 - p_one);
        } else {
            kernels::weight_blocks_dm(s.data, num_qubits(s), pos, w0 / p_rep, w1 / p_rep);
        }
    } else {
        const double p_one = std::clamp(kernels::prob_one_ket(s.data, num_qubits(s), pos), 0.0, 1.0);
        const int truth = sample_true_outcome(p_one, forced);
        split_out(g, q, truth, truth ? p_one : 1 - p_one);
        reported = truth;
        if (flip_prob > 0 && rng_.bernoulli(flip_prob)) {
            reported ^= 1;
        }
    }
    if (basis == Basis::X) {
        // Rotate the post-measurement state back to the X basis without charging noise.
        g = record(q).group;
        JointState &t = *groups_[g];
        const unsigned pos2[1] = {position(t, q)};
        if (is_dm(formalism_)) {
            kernels::apply_unitary_dm(t.data, num_qubits(t), pos2, h);
        } else {
            kernels::apply_matrix(t.data, num_qubits(t), pos2, h);
        }
    }
    return reported;
}

std::vector<cplx> StateRegistry::reduced_density_matrix(std::span<const QubitId> targets) const {
    check_distinct(targets);
    std::vector<std::size_t> groups;
    for (QubitId q : targets) {
        const std::size_t g = record(q).group;
        if (std::find(groups.begin(), groups.end(), g) == groups.end()) {
            groups.push_back(g);
        }
    }
    JointState m = *groups_[groups.front()];
    for (std::size_t i = 1; i < groups.size(); ++i) {
        const JointState &b = *groups_[groups[i]];
        if (is_dm(formalism_)) {
            m.data = kernels::kron_dm(m.data, std::size_t{1} << m.members.size(), b.data,
                                      std::size_t{1} << b.members.size());
        } else {
            m.data = kernels::kron_ket(m.data, b.data);
        }
        m.members.insert(m.members.end(), b.members.begin(), b.members.end());
    }
    std::vector<unsigned> keep;
    for (QubitId q : targets) {
        keep.push_back(position(m, q));
    }
    if (is_dm(formalism_)) {
        return kernels::reduced_dm_from_dm(m.data, num_qubits(m), keep);
    }
    return kernels::reduced_dm_from_ket(m.data, num_qubits(m), keep);
}

double StateRegistry::fidelity(std::span<const QubitId> targets, std::span<const cplx> psi) const {
    if (targets.empty() || psi.size() != (std::size_t{1} << targets.size())) {
        throw ArgumentError("fidelity: target state has dimension " + std::to_string(psi.size()) +
                            " but " + std::to_string(targets.size()) + " qubit(s) were given");
    }
    double norm = 0;
    for (const auto &z : psi) {
        norm += std::norm(z);
    }
    const auto rho = reduced_density_matrix(targets);
    const std::size_t d = psi.size();
    cplx acc = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            acc += std::conj(psi[i]) * rho[i * d + j] * psi[j];
        }
    }
    return std::clamp(acc.real() / norm, 0.0, 1.0);
}

void StateRegistry::discard(QubitId q) {
    QubitRecord &r = record(q);
    const std::size_t g = r.group;
    JointState &s = *groups_[g];
    if (s.members.size() > 1 && is_dm(formalism_)) {
        const unsigned pos = position(s, q);
        std::vector<unsigned> keep;
        for (unsigned i = 0; i < s.members.size(); ++i) {
            if (i != pos) {
                keep.push_back(i);
            }
        }
        s.data = kernels::reduced_dm_from_dm(s.data, num_qubits(s), keep);
        s.members.erase(s.members.begin() + pos);
    } else {
        if (s.members.size() > 1) {
            const unsigned pos = position(s, q);
            const double p_one =
                std::clamp(kernels::prob_one_ket(s.data, num_qubits(s), pos), 0.0, 1.0);
            const int truth = rng_.uniform() < p_one ? 1 : 0;
            split_out(g, q, truth, truth ? p_one : 1 - p_one);
        }
        const std::size_t gq = qubits_[q].group;
        groups_[gq].reset();
        free_groups_.push_back(gq);
    }
    qubits_[q].alive = false;
    --live_;
}

void StateRegistry::assign_state(std::span<const QubitId> qubits, std::span<const cplx> rho) {
    check_distinct(qubits);
    const std::size_t k = qubits.size();
    const std::size_t d = std::size_t{1} << k;
    if (rho.size() != d * d) {
        throw ArgumentError("assign_state: matrix has " + std::to_string(rho.size()) +
                            " entries, expected " + std::to_string(d * d));
    }
    for (QubitId q : qubits) {
        if (groups_[record(q).group]->members.size() != 1) {
            throw ArgumentError("assign_state: qubit " + std::to_string(q) +
                                " is entangled with other qubits");
        }
    }
    JointState s;
    s.members.assign(qubits.begin(), qubits.end());
    if (is_dm(formalism_)) {
        s.data.assign(rho.begin(), rho.end());
    } else {
        Eigen::MatrixXcd m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m(i, j) = rho[i * d + j];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
        const auto &vals = eig.eigenvalues();
        double u = rng_.uniform() * vals.sum();
        Eigen::Index pick = d - 1;
        for (Eigen::Index i = static_cast<Eigen::Index>(d) - 1; i >= 0; --i) {
            const double w = std::max(vals(i), 0.0);
            if (u < w) {
                pick = i;
                break;
            }
            u -= w;
        }
        const auto vec = eig.eigenvectors().col(pick);
        s.data.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            s.data[i] = vec(static_cast<Eigen::Index>(i));
        }
    }
    for (QubitId q : qubits) {
        const std::size_t g = qubits_[q].group;
        groups_[g].reset();
        free_groups_.push_back(g);
    }
    new_group(std::move(s));
}

const JointState &StateRegistry::state_of(QubitId q) const { return *groups_[record(q).group]; }

bool StateRegistry::alive(QubitId q) const { return q < qubits_.size() && qubits_[q].alive; }

double StateRegistry::invariant_violation() const {
    double worst = 0;
    for (const auto &g : groups_) {
        if (!g) {
            continue;
        }
        const std::size_t d = std::size_t{1} << g->members.size();
        if (!is_dm(formalism_)) {
            double norm = 0;
            for (const auto &z : g->data) {
                norm += std::norm(z);
            }
            worst = std::max(worst, std::abs(norm - 1));
            continue;
        }
        Eigen::MatrixXcd m(d, d);
        cplx trace = 0;
        for (std::size_t i = 0; i < d; ++i) {
            trace += g->data[i * d + i];
            for (std::size_t j = 0; j < d; ++j) {
                m(i, j) = g->data[i * d + j];
            }
        }
        worst = std::max(worst, std::abs(trace - cplx{1}));
        worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
        worst = std::max(worst, -eig.eigenvalues().minCoeff());
    }
    return worst;
}

} // namespace dqcsim::qstate
