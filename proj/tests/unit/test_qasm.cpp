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

#include <string>

#include "corpus.hpp"
#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"

using namespace dqcsim;
using namespace dqcsim::qasm;
using circuit::MonolithicCircuit;

namespace {

MonolithicCircuit lower(const std::string &src) { return lower_to_circuit(parse_qasm(src)); }

std::string error_of(const std::string &src) {
    try {
        lower(src);
    } catch (const ParseError &e) {
        return e.what();
    }
    return "";
}

const std::string kHead = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

} // namespace

TEST_CASE("bell program", "[qasm]") {
    const auto prog = parse_qasm(kHead + "qreg q[2]; h q[0]; cx q[0],q[1];");
    CHECK(prog.statements.size() == 2);
    CHECK(prog.num_qubits() == 2);
    CHECK(dump(lower_to_circuit(prog)) == "(H,0)\n(CNOT,0,1)\n");
}

TEST_CASE("empty body after the header", "[qasm]") {
    const auto prog = parse_qasm(kHead);
    CHECK(prog.statements.empty());
    CHECK(lower_to_circuit(prog).gates.empty());
}

TEST_CASE("macro, constant folding and broadcast examples", "[qasm]") {
    CHECK(dump(lower(kHead + "gate bell a,b { h a; cx a,b; } qreg q[2]; bell q[0],q[1];")) == "(H,0)\n(CNOT,0,1)\n");
    const auto rz = lower(kHead + "qreg q[1]; rz(pi/2) q[0];");
    REQUIRE(rz.gates.size() == 1);
    CHECK(rz.gates[0].gate.kind == qstate::GateKind::RZ);
    CHECK(rz.gates[0].gate.params[0] == 1.5707963267948966);
    CHECK(dump(lower(kHead + "qreg q[3]; h q;")) == "(H,0)\n(H,1)\n(H,2)\n");
}

TEST_CASE("registers flatten in declaration order", "[qasm]") {
    const auto c = lower(kHead + "qreg a[2]; qreg b[3]; creg x[1]; creg y[2]; x b[1]; measure b[2] -> y[1];");
    CHECK(c.num_qubits == 5);
    CHECK(c.num_cbits == 3);
    CHECK(dump(c) == "(X,3)\n(MEASURE,4,c2)\n");
}

TEST_CASE("barriers are dropped and counted", "[qasm]") {
    LoweringReport report;
    const auto c = lower_to_circuit(parse_qasm(kHead + "qreg q[2]; h q[0]; barrier q; barrier q[0],q[1]; h q[1];"),
                                    &report);
    CHECK(c.gates.size() == 2);
    CHECK(report.barriers_dropped == 2);
}

TEST_CASE("diagnostics carry line, column and the offending construct", "[qasm]") {
    try {
        parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nx q[2];\n");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
    CHECK(error_of(kHead + "qreg q[1];\nh q[0]\n").find("expected ';'") != std::string::npos);
    CHECK(error_of(kHead + "qreg q[1]; creg c[1];\nif(c==1) x q[0];") == "4:1: unsupported construct: 'if'");
    CHECK(error_of(kHead + "opaque g a;").find("unsupported construct: 'opaque'") != std::string::npos);
    CHECK(error_of(kHead + "qreg q[1]; reset q[0];").find("unsupported construct: 'reset'") != std::string::npos);
    CHECK(error_of(kHead + "qreg q[1]; rz(theta) q[0];").find("non-constant parameter 'theta'") != std::string::npos);
    CHECK(error_of("OPENQASM 2.0;\nqreg q[1]; h q[0];").find("missing include") != std::string::npos);
    CHECK(error_of(kHead + "gate g a { g a; } qreg q[1]; g q[0];").find("recursively") != std::string::npos);
    CHECK(error_of(kHead + "qreg q[2]; cx q[0],q[0];") != "");
    CHECK(error_of(kHead + "qreg q[2]; qreg q[1];") != "");
    CHECK(error_of(kHead + "qreg q[2]; rz q[0];") != "");
    CHECK(error_of(kHead + "qreg q[2]; qreg r[3]; cx q,r;") != "");
    CHECK(error_of("OPENQASM 3.0;") != "");
    CHECK(error_of(kHead + "include \"other.inc\";") != "");
    CHECK(error_of(kHead + "qreg q[1]; h q[0]; @") != "");
}

TEST_CASE("constant expressions", "[qasm]") {
    CHECK(evaluate_constant("pi/2") == M_PI / 2);
    CHECK(evaluate_constant("sqrt(1/2)") == std::sqrt(0.5));
    CHECK(evaluate_constant("-2^2") == -4);
    CHECK(evaluate_constant("2^3^2") == 512);
    CHECK(evaluate_constant("1-2-3") == -4);
    CHECK(evaluate_constant("8/4/2") == 1);
    CHECK(evaluate_constant("exp(ln(3))") == Catch::Approx(3).epsilon(1e-15));
    CHECK(evaluate_constant("1e-3 * (2 + tan(0))") == Catch::Approx(0.002).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate_constant("x + 1"), ParseError);
    CHECK_THROWS_AS(evaluate_constant("1 +"), ParseError);
}

TEST_CASE("corpus matches golden files", "[qasm][corpus]") {
    const auto results = corpus::run(DQCSIM_CORPUS_DIR);
    REQUIRE(results.size() >= 10);
    int malformed = 0;
    for (const auto &r : results) {
        INFO(r.file << " produced:\n" << r.actual);
        CHECK(r.matches);
        malformed += r.malformed ? 1 : 0;
    }
    CHECK(malformed >= 2);
}

TEST_CASE("unparse round trip over the corpus", "[qasm][corpus]") {
    for (const auto &entry : std::filesystem::directory_iterator(DQCSIM_CORPUS_DIR)) {
        if (entry.path().extension() != ".qasm") {
            continue;
        }
        const std::string src = corpus::slurp(entry.path());
        MonolithicCircuit c;
        try {
            c = lower(src);
        } catch (const ParseError &) {
            continue;
        }
        INFO(entry.path().filename().string());
        const auto prog = parse_qasm(src);
        int declared = 0;
        for (const auto &r : prog.qregs) {
            declared += r.size;
        }
        CHECK(c.num_qubits == declared);
        const std::string text = unparse(c);
        CHECK(lower(text) == c);
        CHECK(lower(src) == c);
    }
}

TEST_CASE("builtin qelib1 declares the documented gates", "[qasm]") {
    const auto prog = parse_qasm(std::string("include \"qelib1.inc\";"));
    for (const char *g : {"u3", "u2", "u1", "cx", "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz",
                          "cz", "cy", "ch", "ccx", "crz", "cu1", "cu3", "swap", "cswap"}) {
        INFO(g);
        CHECK(prog.gates.count(g) == 1);
    }
    CHECK(qelib1_source().find("gate ccx") != std::string_view::npos);
}

#include "oracle.hpp"

namespace {

oracle::Mat circuit_unitary(const MonolithicCircuit &c) {
    using namespace oracle::gates;
    oracle::Mat u = oracle::identity(std::size_t{1} << c.num_qubits);
    for (const auto &g : c.gates) {
        const auto m = g.gate.matrix();
        u = oracle::matmul(oracle::embed(oracle::Mat(m.begin(), m.end()), g.qubits, c.num_qubits), u);
    }
    return u;
}

// max |a - e^{i phi} b| with the phase taken from the largest entry of b.
double phase_free_diff(const oracle::Mat &a, const oracle::Mat &b) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (std::abs(b[i]) > std::abs(b[k])) {
            k = i;
        }
    }
    const oracle::cplx phase = a[k] / b[k];
    return oracle::max_abs_diff(a, oracle::add(b, b, phase, 0));
}

oracle::Mat controlled(const oracle::Mat &u) {
    oracle::Mat m = oracle::identity(4);
    m[2 * 4 + 2] = u[0];
    m[2 * 4 + 3] = u[1];
    m[3 * 4 + 2] = u[2];
    m[3 * 4 + 3] = u[3];
    return m;
}

} // namespace

TEST_CASE("qelib1 decompositions implement the textbook unitaries", "[qasm][oracle]") {
    using namespace oracle::gates;
    auto check = [](const std::string &stmt, int n, const oracle::Mat &expected) {
        INFO(stmt);
        const auto c = lower(kHead + "qreg q[" + std::to_string(n) + "];\n" + stmt);
        CHECK(phase_free_diff(circuit_unitary(c), expected) < 1e-12);
    };
    check("cy q[0],q[1];", 2, controlled(Y()));
    check("ch q[0],q[1];", 2, controlled(H()));
    check("crz(0.7) q[0],q[1];", 2, controlled(RZ(0.7)));
    check("cu1(0.4) q[0],q[1];", 2, controlled({1, 0, 0, std::exp(oracle::cplx(0, 0.4))}));
    check("cu3(0.3,0.2,0.1) q[0],q[1];", 2, controlled(U(0.3, 0.2, 0.1)));
    check("swap q[0],q[1];", 2, SWAP());
    check("sdg q[0];", 1, oracle::dagger(S()));
    check("tdg q[0];", 1, oracle::dagger(T()));
    check("u2(0.5,0.25) q[0];", 1, U(M_PI / 2, 0.5, 0.25));
    oracle::Mat toffoli = oracle::identity(8);
    toffoli[6 * 8 + 6] = toffoli[7 * 8 + 7] = 0;
    toffoli[6 * 8 + 7] = toffoli[7 * 8 + 6] = 1;
    check("ccx q[0],q[1],q[2];", 3, toffoli);
    oracle::Mat fredkin = oracle::identity(8);
    fredkin[5 * 8 + 5] = fredkin[6 * 8 + 6] = 0;
    fredkin[5 * 8 + 6] = fredkin[6 * 8 + 5] = 1;
    check("cswap q[0],q[1],q[2];", 3, fredkin);
}
