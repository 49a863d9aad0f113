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

#include <catch_amalgamated.hpp>

#include <memory>
#include <string>
#include <vector>

#include "dqcsim/errors.hpp"
#include "dqcsim/hardware/machine.hpp"
#include "dqcsim/hardware/network.hpp"
#include "oracle.hpp"

using namespace dqcsim;
using namespace dqcsim::hardware;
using qstate::GateKind;
using qstate::make_gate;

namespace {

QpuConfig reference_qpu() {
    QpuConfig c;
    c.num_positions = 10;
    c.num_comm_qubits = 2;
    c.single_qubit_gate_time = 135e3;
    c.two_qubit_gate_time = 600e3;
    c.measurement_time = 600e4;
    return c;
}

DqcNetwork reference_net(double fidelity = 1.0) {
    return build_dqc(3, {{0, 1}}, all_pairs(3), reference_qpu(), ConnectionConfig::werner(1e9 / 182, fidelity));
}

struct Bench {
    DqcNetwork net;
    sim::Kernel kernel{5};
    qstate::StateRegistry states;
    Machine machine;

    explicit Bench(DqcNetwork n, qstate::Formalism f = qstate::Formalism::DensityMatrix)
        : net(std::move(n)), states(f, kernel.rng(), [this] { return kernel.now(); }), machine(net, kernel, states) {}
};

} // namespace

TEST_CASE("build_dqc reproduces the three-node example network", "[hardware]") {
    const auto net = reference_net();
    REQUIRE(net.size() == 3);
    CHECK(net.qpus[0].name == "node_0");
    CHECK(net.qpus[2].name == "node_2");
    CHECK(net.has_quantum_link(0, 1));
    CHECK(net.has_quantum_link(1, 0));
    CHECK_FALSE(net.has_quantum_link(0, 2));
    CHECK(net.classical_links.size() == 3);
    CHECK(net.find("node_1") == 1);
    CHECK_FALSE(net.find("node_7"));
    CHECK(parse_node_name("node_12") == 12);
    CHECK_FALSE(parse_node_name("node_"));
    CHECK_FALSE(parse_node_name("qpu_1"));
    const auto mono = build_dqc(1, {}, {}, reference_qpu(), ConnectionConfig::werner(0, 1));
    CHECK(mono.size() == 1);
    CHECK(mono.quantum_links.empty());
}

TEST_CASE("build_dqc rejects bad topologies naming the pair", "[hardware]") {
    const auto q = reference_qpu();
    const auto c = ConnectionConfig::werner(0, 1);
    try {
        build_dqc(3, {{0, 3}}, {}, q, c);
        FAIL("expected TopologyError");
    } catch (const TopologyError &e) {
        CHECK(std::string(e.what()).find("(0, 3)") != std::string::npos);
    }
    CHECK_THROWS_AS(build_dqc(3, {{1, 1}}, {}, q, c), TopologyError);
    CHECK_THROWS_AS(build_dqc(3, {{0, 1}, {1, 0}}, {}, q, c), TopologyError);
    CHECK_THROWS_AS(build_dqc(3, {}, {{0, -1}}, q, c), TopologyError);
    CHECK_THROWS_AS(build_dqc(0, {}, {}, q, c), TopologyError);
}

TEST_CASE("configuration validation", "[hardware]") {
    auto q = reference_qpu();
    q.num_comm_qubits = 11;
    CHECK_THROWS_AS(q.validate(), ArgumentError);
    q = reference_qpu();
    q.meas_error_prob = 1.5;
    CHECK_THROWS_AS(q.validate(), ArgumentError);
    q = reference_qpu();
    q.two_qubit_gate_time = -1;
    CHECK_THROWS_AS(q.validate(), ArgumentError);
    ConnectionConfig c = ConnectionConfig::werner(10, 0.9);
    CHECK_NOTHROW(c.validate());
    c.delay = -1;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    c = ConnectionConfig::werner(10, 0.9);
    c.state4distribution[0] = 2.0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("gate and measurement durations", "[hardware]") {
    Bench b(reference_net());
    const int p[3] = {2, 3, 4};
    b.machine.init_positions(0, p);
    CHECK(b.kernel.now() == 0);
    double t_h = -1, t_cx = -1, t_m = -1;
    b.machine.execute_gate(0, make_gate(GateKind::H), {2}, [&] { t_h = b.kernel.now(); });
    b.machine.execute_gate(0, make_gate(GateKind::CNOT), {2, 3}, [&] { t_cx = b.kernel.now(); });
    b.machine.execute_measure(0, 2, qstate::Basis::Z, [&](int) { t_m = b.kernel.now(); });
    CHECK(b.kernel.run() == 135e3 + 600e3 + 6e6);
    CHECK(t_h == 135e3);
    CHECK(t_cx == 135e3 + 600e3);
    CHECK(t_m == 135e3 + 600e3 + 6e6);
    // Busy intervals on one QPU never overlap.
    const auto &iv = b.machine.busy_intervals();
    REQUIRE(iv.size() == 3);
    for (std::size_t i = 1; i < iv.size(); ++i) {
        CHECK(iv[i - 1].end <= iv[i].start);
    }
}

TEST_CASE("different QPUs execute concurrently", "[hardware]") {
    Bench b(reference_net());
    const int p[1] = {2};
    b.machine.init_positions(0, p);
    b.machine.init_positions(1, p);
    b.machine.execute_gate(0, make_gate(GateKind::H), {2}, nullptr);
    b.machine.execute_gate(1, make_gate(GateKind::H), {2}, nullptr);
    CHECK(b.kernel.run() == 135e3);
}

TEST_CASE("gate on an empty position names the QPU and position", "[hardware]") {
    Bench b(reference_net());
    try {
        b.machine.execute_gate(1, make_gate(GateKind::H), {5}, nullptr);
        FAIL("expected RuntimeFault");
    } catch (const RuntimeFault &e) {
        const std::string w = e.what();
        CHECK(w.find("node_1") != std::string::npos);
        CHECK(w.find('5') != std::string::npos);
    }
    CHECK_THROWS_AS(b.machine.execute_gate(1, make_gate(GateKind::H), {42}, nullptr), RuntimeFault);
}

TEST_CASE("entanglement delivery after the link delay", "[hardware]") {
    Bench b(reference_net());
    int pa = -1, pb = -1;
    double at = -1;
    b.machine.request_entanglement(0, 1, 7, [&](int p) {
        pa = p;
        at = b.kernel.now();
    });
    CHECK(b.machine.pending_entanglement_requests() == 1);
    b.machine.request_entanglement(1, 0, 7, [&](int p) { pb = p; });
    CHECK(b.kernel.run() == 1e9 / 182);
    CHECK(at == 1e9 / 182);
    CHECK(pa == 0);
    CHECK(pb == 0);
    const qstate::QubitId pair[2] = {b.machine.require_qubit(0, pa), b.machine.require_qubit(1, pb)};
    CHECK(b.states.fidelity(pair, qstate::bell_phi_plus()) == Catch::Approx(1).margin(1e-12));
    CHECK(b.states.last_touched(pair[0]) == 1e9 / 182);
    CHECK(b.machine.busy_comm_count(0) == 1);
    CHECK_THROWS_AS(b.machine.request_entanglement(0, 2, 1, [](int) {}), TopologyError);
}

TEST_CASE("werner pair matches the oracle state", "[hardware]") {
    Bench b(reference_net(0.9));
    int pa = -1, pb = -1;
    b.machine.request_entanglement(0, 1, 1, [&](int p) { pa = p; });
    b.machine.request_entanglement(1, 0, 1, [&](int p) { pb = p; });
    b.kernel.run();
    const qstate::QubitId pair[2] = {b.machine.require_qubit(0, pa), b.machine.require_qubit(1, pb)};
    CHECK(oracle::max_abs_diff(b.states.reduced_density_matrix(pair), oracle::werner(0.9)) < 1e-12);
}

TEST_CASE("concurrent requests are served FIFO and delivered at rendezvous plus delay", "[hardware]") {
    Bench b(reference_net());
    std::vector<std::pair<int, int>> order;
    b.machine.request_entanglement(0, 1, 1, [&](int p) { order.push_back({1, p}); });
    b.machine.request_entanglement(0, 1, 2, [&](int p) { order.push_back({2, p}); });
    b.machine.request_entanglement(1, 0, 1, [](int) {});
    b.kernel.schedule(100, [&] { b.machine.request_entanglement(1, 0, 2, [](int) {}); });
    b.kernel.run();
    REQUIRE(order.size() == 2);
    CHECK(order[0] == std::pair{1, 0});
    CHECK(order[1] == std::pair{2, 1});
    for (const auto &d : b.machine.deliveries()) {
        CHECK(d.delivered == d.rendezvous + 1e9 / 182);
    }
    CHECK(b.machine.deliveries()[1].rendezvous == 100);
    CHECK(b.machine.free_comm_count(0) + b.machine.busy_comm_count(0) == 2);
}

TEST_CASE("a third request waits for a freed comm qubit", "[hardware]") {
    Bench b(reference_net());
    std::vector<double> times;
    for (std::uint64_t tag = 1; tag <= 3; ++tag) {
        b.machine.request_entanglement(0, 1, tag, [&](int) { times.push_back(b.kernel.now()); });
        b.machine.request_entanglement(1, 0, tag, [](int) {});
    }
    const double d = 1e9 / 182;
    b.kernel.schedule(2 * d, [&] {
        CHECK(b.machine.free_comm_count(0) == 0);
        CHECK(b.machine.pending_entanglement_requests() == 2);
        b.machine.free_comm_qubit(0, 0);
        b.machine.free_comm_qubit(1, 0);
    });
    b.kernel.run();
    REQUIRE(times.size() == 3);
    CHECK(times[2] == 3 * d);
    CHECK(b.machine.busy_comm_count(0) == 2);
}

TEST_CASE("freeing comm qubits", "[hardware]") {
    Bench b(reference_net());
    b.machine.request_entanglement(0, 1, 1, [](int) {});
    b.machine.request_entanglement(1, 0, 1, [](int) {});
    b.kernel.run();
    b.machine.free_comm_qubit(0, 0);
    CHECK(b.machine.free_comm_count(0) == 2);
    CHECK_THROWS_AS(b.machine.free_comm_qubit(0, 0), RuntimeFault);
    const int p[1] = {4};
    b.machine.init_positions(0, p);
    CHECK_THROWS_AS(b.machine.free_comm_qubit(0, 4), RuntimeFault);
}

TEST_CASE("classical messages", "[hardware]") {
    auto net = build_dqc(3, {{0, 1}}, {{0, 1}}, reference_qpu(), ConnectionConfig::werner(0, 1), 250);
    Bench b(std::move(net));
    std::vector<Bits> got;
    double at = -1;
    b.machine.recv_classical(1, 0, 9, [&](Bits bits) {
        got.push_back(bits);
        at = b.kernel.now();
    });
    b.machine.send_classical(0, 1, 9, {1, 0});
    b.machine.send_classical(0, 1, 9, {0, 1});
    b.kernel.run();
    REQUIRE(got.size() == 1);
    CHECK(got[0] == Bits{1, 0});
    CHECK(at == 250);
    CHECK(b.machine.undelivered_messages() == 1);
    b.machine.recv_classical(1, 0, 9, [&](Bits bits) { got.push_back(bits); });
    REQUIRE(got.size() == 2);
    CHECK(got[1] == Bits{0, 1});
    CHECK_THROWS_AS(b.machine.send_classical(0, 2, 1, {1}), TopologyError);
    CHECK_THROWS_AS(b.machine.recv_classical(2, 1, 1, [](Bits) {}), TopologyError);
}

TEST_CASE("zero classical delay arrives in the same timestep", "[hardware]") {
    Bench b(reference_net());
    double at = -1;
    b.kernel.schedule(40, [&] { b.machine.send_classical(2, 0, 1, {1}); });
    b.machine.recv_classical(0, 2, 1, [&](Bits) { at = b.kernel.now(); });
    b.kernel.run();
    CHECK(at == 40);
}

TEST_CASE("idle noise is charged up to the start of an operation", "[hardware]") {
    auto cfg = reference_qpu();
    cfg.proc_qubit_depolar_rate = 1e4;
    Bench b(build_dqc(1, {}, {}, cfg, ConnectionConfig::werner(0, 1)));
    const int p[1] = {2};
    b.machine.init_positions(0, p);
    b.kernel.schedule(5e4, [&] { b.machine.execute_gate(0, make_gate(GateKind::X), {2}, nullptr); });
    b.kernel.run();
    const auto q = b.machine.require_qubit(0, 2);
    CHECK(b.states.last_touched(q) == 5e4 + 135e3);
    const double pm = oracle::memory_probability(1e4, 5e4);
    const auto expected =
        oracle::conjugate(oracle::gates::X(), oracle::depolarize(oracle::outer({1, 0}), {0}, 1, pm));
    const qstate::QubitId t[1] = {q};
    CHECK(oracle::max_abs_diff(b.states.reduced_density_matrix(t), expected) < 1e-12);
}

TEST_CASE("SWAP occupies three two-qubit slots", "[hardware]") {
    Bench b(reference_net());
    const int p[1] = {2};
    b.machine.init_positions(0, p);
    b.machine.execute_gate(0, make_gate(GateKind::X), {2}, nullptr);
    b.machine.execute_swap(0, 2, 7, nullptr);
    CHECK(b.kernel.run() == 135e3 + 3 * 600e3);
    const qstate::QubitId t[1] = {b.machine.require_qubit(0, 7)};
    CHECK(b.states.fidelity(t, std::vector<qstate::cplx>{0, 1}) == Catch::Approx(1).margin(1e-12));
}
