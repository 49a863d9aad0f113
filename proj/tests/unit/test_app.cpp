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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dqcsim/app/app.hpp"
#include "dqcsim/errors.hpp"

using namespace dqcsim;
namespace fs = std::filesystem;

namespace {

const std::string kSrc = DQCSIM_SOURCE_DIR;
const std::string kNoiseless = kSrc + "/scenarios/bell_noiseless.yaml";
const std::string kNoisy = kSrc + "/scenarios/bell_noisy.yaml";

struct Cli {
    int code = -1;
    std::string out, err;
};

Cli cli(std::vector<std::string> args) {
    args.insert(args.begin(), "dqcsim");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Cli r;
    r.code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / "dqcsim_test_app";
    fs::create_directories(d);
    return d;
}

std::string write(const std::string &name, const std::string &text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string read(const std::string &path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const std::string kHardware = R"y(hardware:
  num_qpus: 2
  quantum_topology: [[0, 1]]
  classical_topology: all
  qpu:
    num_positions: 6
    num_comm_qubits: 2
  connection:
    delay_ns: 100
)y";

} // namespace

TEST_CASE("run prints the noiseless summary", "[app]") {
    const auto r = cli({"run", "--config", kNoiseless});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("shot,fidelity,final_time_ns,seed,classical_bits\n0,1,", 0) == 0);
    CHECK(r.err.find("mean fidelity: 1.0000000000000000") != std::string::npos);
}

TEST_CASE("run writes csv and json files", "[app]") {
    const std::string csv = (scratch() / "out.csv").string();
    auto r = cli({"run", "--config", kNoisy, "--out", csv, "--shots", "3", "--seed", "11"});
    CHECK(r.code == 0);
    CHECK(r.out.find("shots: 3") != std::string::npos);
    const std::string text = read(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find("\n2,") != std::string::npos);
    const std::string json = (scratch() / "out.json").string();
    r = cli({"run", "--config", kNoisy, "--out", json, "--format", "json"});
    CHECK(r.code == 0);
    CHECK(read(json).find("\"fidelity\"") != std::string::npos);
}

TEST_CASE("ket override agrees with the density matrix when noiseless", "[app]") {
    const auto dm = app::load_scenario_file(kNoiseless);
    const auto ket = app::load_scenario_file(kNoiseless, {"run.formalism=ket"});
    CHECK(ket.scenario.options.formalism == qstate::Formalism::Ket);
    const auto a = runtime::run_master(dm.scenario, 0);
    const auto b = runtime::run_master(ket.scenario, 0);
    CHECK(std::abs(*a.fidelity - *b.fidelity) < 1e-9);
}

TEST_CASE("dumped configuration reproduces the run", "[app]") {
    const std::string dump = (scratch() / "effective.yaml").string();
    const auto first = cli({"run", "--config", kNoisy, "--set", "run.shots=4", "--set",
                            "hardware.connection.werner_fidelity=0.8", "--seed", "5", "--dump-config", dump});
    REQUIRE(first.code == 0);
    const auto second = cli({"run", "--config", dump});
    REQUIRE(second.code == 0);
    CHECK(first.out == second.out);
    CHECK(read(dump).find("0.8") != std::string::npos);
}

TEST_CASE("compile reports resources", "[app]") {
    auto r = cli({"compile", "--config", kNoiseless});
    CHECK(r.code == 0);
    CHECK(r.out.find("# ebits=1 classical_bits=2") != std::string::npos);
    CHECK(r.out.find(".qpu node_2\n  INIT 2 3 4\n") != std::string::npos);
    const auto local = write("local.dqc", "INIT 2@node_0 3@node_0\nH 2@node_0\nCNOT 2@node_0 3@node_0\n");
    r = cli({"compile", "--config", kNoiseless, "--circuit", local, "--set", "run.collector=~"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# ebits=0 classical_bits=0") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2", "[app]") {
    const auto bad_link = write("bad_link.dqc", "INIT 2@node_0\nINIT 2@node_2\nCNOT 2@node_0 2@node_2 cat\n");
    auto r = cli({"compile", "--config", kNoiseless, "--circuit", bad_link, "--set", "run.collector=~"});
    CHECK(r.code == 2);
    CHECK(r.err.find("no quantum link between node_0 and node_2") != std::string::npos);
    CHECK(cli({"run", "--config", kNoiseless, "--set", "hardware.bogus=1"}).code == 2);
    CHECK(cli({"run", "--config", kNoiseless, "--set", "hardware.connection.delay_ns=5"}).code == 2);
    CHECK(cli({"run", "--config", kNoiseless, "--set", "run.formalism=stabilizer"}).code == 2);
    CHECK(cli({"run", "--config", kNoiseless, "--set", "hardware.quantum_topology=[[0,3]]"}).code == 2);
    CHECK(cli({"run", "--config", "/nonexistent.yaml"}).code == 2);
    CHECK(cli({"run"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("collector targets are checked against the circuit", "[app]") {
    const auto yaml = write("minimal.yaml", kHardware + R"y(software:
  circuit: |
    INIT 2@node_0
run:
  seed: 1
)y");
    CHECK(cli({"run", "--config", yaml}).code == 0);
    const auto fault = write("fault.yaml", kHardware + R"y(software:
  circuit: |
    INIT 2@node_0
    H 2@node_0
run:
  collector:
    targets: ["3@node_0"]
    desired_state: [1, 0]
)y");
    CHECK(cli({"run", "--config", fault}).code == 2);
}

TEST_CASE("inline qasm with partitioning", "[app]") {
    const auto yaml = write("qasm.yaml", kHardware + R"y(software:
  qasm: |
    OPENQASM 2.0;
    include "qelib1.inc";
    qreg q[4];
    h q[0];
    cx q[0],q[3];
  capacities: [2, 2]
  default_scheme: 2tp
run:
  collector:
    targets: [0, 3]
    desired_state: ["1/sqrt(2)", 0, 0, "1/sqrt(2)"]
)y");
    const auto s = app::load_scenario_file(yaml);
    CHECK(s.scenario.program.resources.ebits == 2);
    const auto row = runtime::run_master(s.scenario, 0);
    CHECK(*row.fidelity == Catch::Approx(1).margin(1e-12));
    CHECK_THROWS_AS(app::load_scenario_file(yaml, {"software.circuit=H 2@node_0"}), ConfigError);
}

TEST_CASE("custom partitioners are selectable by name", "[app]") {
    app::register_partitioner("reverse", [](const circuit::MonolithicCircuit &c, const hardware::DqcNetwork &n,
                                            circuit::Scheme s) {
        circuit::MonolithicCircuit r = c;
        for (auto &g : r.gates) {
            for (int &q : g.qubits) {
                q = c.num_qubits - 1 - q;
            }
        }
        return circuit::partition_contiguous(r, n, s);
    });
    const auto yaml = write("custom.yaml", kHardware + R"y(software:
  qasm: "include \"qelib1.inc\"; qreg q[2]; x q[0];"
  partitioner: reverse
)y");
    const auto s = app::load_scenario_file(yaml);
    CHECK(compiler::format_instruction(s.scenario.program.streams[0].instructions.back()) == "APPLY X 3");
    CHECK_THROWS_AS(app::load_scenario_file(yaml, {"software.partitioner=nope"}), ConfigError);
}

TEST_CASE("parse subcommand", "[app]") {
    const auto bell = write("bell.qasm", "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n");
    auto r = cli({"parse", bell});
    CHECK(r.code == 0);
    CHECK(r.out == "(H,0)\n(CNOT,0,1)\n");
    const auto macro = write("macro.qasm", "include \"qelib1.inc\";\ngate bell a,b { h a; cx a,b; }\nqreg q[2];\nbell q[1],q[0];\n");
    r = cli({"parse", "--circuit", macro});
    CHECK(r.out == "(H,1)\n(CNOT,1,0)\n");
    const auto broken = write("broken.qasm", "OPENQASM 2.0;\nqreg q[2]\nh q[0];\n");
    r = cli({"parse", broken});
    CHECK(r.code == 2);
    CHECK(r.err.find("broken.qasm:3:1:") != std::string::npos);
}
