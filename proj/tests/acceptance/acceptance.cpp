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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "corpus.hpp"
#include "dqcsim/app/app.hpp"
#include "dqcsim/errors.hpp"
#include "dqcsim/qstate/registry.hpp"
#include "oracle.hpp"

using namespace dqcsim;
using circuit::Address;
using qstate::cplx;

namespace {

const std::string kSrc = DQCSIM_SOURCE_DIR;
const std::string kNoiseless = kSrc + "/scenarios/bell_noiseless.yaml";
const std::string kNoisy = kSrc + "/scenarios/bell_noisy.yaml";
constexpr double kExpectedNoisy = 0.8921630426886507;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string &title, double limit_s, const std::function<Verdict()> &fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
        v.pass = false;
        v.detail += " (took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s)";
    }
    failures += v.pass ? 0 : 1;
    std::printf("%s criterion %d: %s [%.3f s] %s\n", v.pass ? "PASS" : "FAIL", n, title.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
}

std::string real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

hardware::QpuConfig reference_qpu() {
    hardware::QpuConfig c;
    c.num_positions = 10;
    c.num_comm_qubits = 2;
    c.single_qubit_gate_time = 135e3;
    c.two_qubit_gate_time = 600e3;
    c.measurement_time = 600e4;
    return c;
}

hardware::DqcNetwork reference_network() {
    return hardware::build_dqc(3, {{0, 1}}, hardware::all_pairs(3), reference_qpu(),
                               hardware::ConnectionConfig::werner(1e9 / 182, 1));
}

runtime::Scenario compile_text(const hardware::DqcNetwork &net, const std::string &text) {
    runtime::Scenario s;
    s.network = net;
    const auto c = circuit::parse_distributed(text);
    s.program = compiler::compile(c, s.network, circuit::infer_qubit_map(c));
    return s;
}

std::string u_gate(double a, double b, double c) {
    return "U(" + real(a) + "," + real(b) + "," + real(c) + ")";
}

Verdict noiseless() {
    const auto s = app::load_scenario_file(kNoiseless);
    const auto r = runtime::run_shots(s.scenario, 1, s.seed);
    const double f = r.rows.at(0).fidelity.value();
    return {std::abs(f - 1.0) <= 1e-9, "fidelity " + real(f)};
}

Verdict noisy() {
    const auto s = app::load_scenario_file(kNoisy);
    const auto r = runtime::run_shots(s.scenario, 1, s.seed);
    const double f = r.rows.at(0).fidelity.value();
    const auto branches = runtime::enumerate_branches(s.scenario, s.seed);
    double lo = 1, hi = 0;
    for (const auto &b : branches) {
        lo = std::min(lo, b.fidelity);
        hi = std::max(hi, b.fidelity);
    }
    const bool close = std::abs(f - kExpectedNoisy) <= 0.02;
    const bool narrow = hi - lo <= 0.01;
    return {close && narrow, "fidelity " + real(f) + ", |diff| " + real(std::abs(f - kExpectedNoisy)) + ", " +
                                 std::to_string(branches.size()) + " branches spanning [" + real(lo) + ", " + real(hi) +
                                 "]"};
}

Verdict scheme_equivalence() {
    const auto net = hardware::build_dqc(2, {{0, 1}}, {{0, 1}}, reference_qpu(),
                                         hardware::ConnectionConfig::werner(1e9 / 182, 1));
    std::mt19937_64 g(2718);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    double worst = 0;
    int runs = 0;
    for (const char *scheme : {"cat", "1tp", "2tp", "tp_safe"}) {
        for (int trial = 0; trial < 50; ++trial) {
            double a[6];
            for (double &x : a) {
                x = angle(g);
            }
            auto s = compile_text(net, "INIT 2@node_0\nINIT 2@node_1\n" + u_gate(a[0], a[1], a[2]) + " 2@node_0\n" +
                                           u_gate(a[3], a[4], a[5]) + " 2@node_1\nCNOT 2@node_0 2@node_1 " + scheme +
                                           "\n");
            // Monolithic reference: CNOT on the dense product state.
            const oracle::Vec c = oracle::apply(oracle::gates::U(a[0], a[1], a[2]), {1, 0});
            const oracle::Vec t = oracle::apply(oracle::gates::U(a[3], a[4], a[5]), {1, 0});
            const oracle::Vec psi = oracle::apply(oracle::gates::CNOT(), {c[0] * t[0], c[0] * t[1], c[1] * t[0], c[1] * t[1]});
            s.collector = runtime::make_fidelity_collector({s.program.resolve({2, 0}), s.program.resolve({2, 1})},
                                                           std::vector<cplx>(psi.begin(), psi.end()));
            const auto row = runtime::run_master(s, static_cast<std::uint64_t>(trial));
            worst = std::max(worst, std::abs(row.fidelity.value() - 1));
            ++runs;
        }
    }
    return {worst <= 1e-9, std::to_string(runs) + " runs, max |1 - F| = " + real(worst)};
}

Verdict channel_oracle() {
    std::mt19937_64 g(31415);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    int cases = 0;
    auto diff = [](const std::vector<cplx> &a, const oracle::Mat &b) { return oracle::max_abs_diff(a, b); };
    for (int i = 0; i < 100; ++i) {
        for (int n : {1, 2}) {
            sim::Rng rng(i);
            double now = 0;
            qstate::StateRegistry reg(qstate::Formalism::DensityMatrix, rng, [&] { return now; });
            const double rate = u(g) * 1e5;
            auto qs = reg.init_qubits(n, rate);
            const auto rho = oracle::random_dm(g, n);
            reg.assign_state(qs, std::vector<cplx>(rho.begin(), rho.end()));
            for (auto q : qs) {
                reg.touch(q);
            }
            // depolarizing on all qubits
            const double p = u(g);
            reg.apply_depolarizing(qs, p);
            std::vector<int> all(n);
            for (int k = 0; k < n; ++k) {
                all[k] = k;
            }
            auto expected = oracle::depolarize(rho, all, n, p);
            worst = std::max(worst, diff(reg.reduced_density_matrix(qs), expected));
            ++cases;
            // idle noise on the last qubit
            now = u(g) * 2e4;
            reg.decoherence_catch_up(qs.back());
            expected = oracle::depolarize(expected, {n - 1}, n, oracle::memory_probability(rate, now));
            worst = std::max(worst, diff(reg.reduced_density_matrix(qs), expected));
            ++cases;
        }
        const double F = u(g);
        worst = std::max(worst, diff(qstate::werner_state(F), oracle::werner(F)));
        ++cases;
    }
    return {worst <= 1e-12 && cases >= 200, std::to_string(cases) + " cases, max deviation " + real(worst)};
}

Verdict resources() {
    const auto net = reference_network();
    const std::map<std::string, std::pair<std::size_t, std::size_t>> expected = {
        {"cat", {1, 2}}, {"1tp", {1, 2}}, {"2tp", {2, 4}}, {"tp_safe", {2, 4}}};
    bool ok = true;
    std::string detail;
    for (const auto &[scheme, want] : expected) {
        const auto s = compile_text(net, "INIT 2@node_0\nINIT 2@node_1\nCNOT 2@node_0 2@node_1 " + scheme + "\n");
        std::set<std::uint64_t> tags;
        std::size_t bits = 0;
        for (const auto &st : s.program.streams) {
            for (const auto &ins : st.instructions) {
                if (ins.op == compiler::OpCode::Entangle) {
                    tags.insert(ins.tag);
                } else if (ins.op == compiler::OpCode::Send) {
                    bits += ins.vars.size();
                }
            }
        }
        ok = ok && tags.size() == want.first && bits == want.second;
        detail += scheme + "=" + std::to_string(tags.size()) + "/" + std::to_string(bits) + " ";
    }
    return {ok, detail};
}

Verdict timing() {
    const auto net = reference_network();
    compiler::Instruction ent, fr;
    ent.op = compiler::OpCode::Entangle;
    ent.slot = 0;
    fr.op = compiler::OpCode::Free;
    fr.operands = {compiler::Operand::slot(0)};
    std::vector<compiler::InstructionStream> streams = {{0, {ent, fr}}, {1, {ent, fr}}, {2, {}}};
    streams[0].instructions[0].peer = 1;
    streams[1].instructions[0].peer = 0;
    runtime::Simulation sim(net, {}, 0);
    const double t_ent = sim.run(streams);
    const auto seq = compile_text(net, "INIT 2@node_0 3@node_0\nH 2@node_0\nCNOT 2@node_0 3@node_0\nMEASURE 3@node_0 -> c0\n");
    const double t_seq = runtime::run_master(seq, 0).final_time;
    const bool ok = t_ent == 1e9 / 182 && t_seq == 135000.0 + 600000.0 + 6000000.0;
    return {ok, "ENTANGLE " + real(t_ent) + " ns, H+CNOT+MEASURE " + real(t_seq) + " ns"};
}

Verdict determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "dqcsim_acceptance";
    std::filesystem::create_directories(dir);
    std::string first;
    for (int i = 0; i < 5; ++i) {
        const std::string out = (dir / ("run" + std::to_string(i) + ".csv")).string();
        const char *argv[] = {"dqcsim", "run", "--config", kNoisy.c_str(), "--shots", "8", "--seed", "77", "--out",
                              out.c_str()};
        std::ostringstream o, e;
        if (app::run_cli(10, argv, o, e) != 0) {
            return {false, "run " + std::to_string(i) + " failed: " + e.str()};
        }
        const std::string text = corpus::slurp(out);
        if (i == 0) {
            first = text;
        } else if (text != first) {
            return {false, "run " + std::to_string(i) + " differs"};
        }
    }
    return {!first.empty(), "5 identical CSV files of " + std::to_string(first.size()) + " bytes"};
}

Verdict parser_corpus() {
    const auto results = corpus::run(DQCSIM_CORPUS_DIR);
    int malformed = 0, mismatched = 0;
    std::string bad;
    for (const auto &r : results) {
        malformed += r.malformed ? 1 : 0;
        if (!r.matches) {
            ++mismatched;
            bad += " " + r.file;
        }
    }
    const bool ok = results.size() >= 10 && malformed >= 2 && mismatched == 0;
    return {ok, std::to_string(results.size()) + " files, " + std::to_string(malformed) + " malformed, " +
                    std::to_string(mismatched) + " mismatched" + bad};
}

Verdict measurement_statistics() {
    const auto net = hardware::build_dqc(1, {}, {}, reference_qpu(), hardware::ConnectionConfig::werner(0, 1));
    auto s = compile_text(net, "INIT 2@node_0\nH 2@node_0\nMEASURE 2@node_0 -> c0\n");
    s.options.formalism = qstate::Formalism::Ket;
    const auto r = runtime::run_shots(s, 10000, 12345);
    int ones = 0;
    for (const auto &row : r.rows) {
        ones += row.classical_bits.at(0);
    }
    const double freq = ones / 10000.0;
    return {freq >= 0.48 && freq <= 0.52, "frequency of 1: " + real(freq)};
}

Verdict deadlock() {
    runtime::Scenario s;
    s.network = reference_network();
    s.program.streams.resize(3);
    for (int k = 0; k < 2; ++k) {
        compiler::Instruction recv;
        recv.op = compiler::OpCode::Recv;
        recv.peer = 1 - k;
        recv.tag = static_cast<std::uint64_t>(k);
        recv.vars = {"m" + std::to_string(k)};
        s.program.streams[k] = {k, {recv}};
    }
    s.program.streams[2].qpu = 2;
    auto fut = std::async(std::launch::async, [s] {
        try {
            runtime::run_master(s, 0);
        } catch (const sim::DeadlockError &e) {
            return std::string(e.what());
        }
        return std::string();
    });
    if (fut.wait_for(std::chrono::seconds(5)) != std::future_status::ready) {
        std::printf("FAIL criterion 10: deadlock detection [timeout] run did not terminate\n");
        std::fflush(stdout);
        std::_Exit(1);
    }
    const std::string msg = fut.get();
    const bool ok = msg.find("node_0") != std::string::npos && msg.find("node_1") != std::string::npos;
    return {ok, msg.empty() ? "no deadlock raised" : msg};
}

} // namespace

int main() {
    report(1, "noiseless example reproduces fidelity 1", 1.0, noiseless);
    report(2, "noisy example within tolerance of the reference value", 5.0, noisy);
    report(3, "scheme equivalence on 50 random product inputs per scheme", 30.0, scheme_equivalence);
    report(4, "noise channels match the dense oracle", 0, channel_oracle);
    report(5, "ebit and classical-bit accounting per scheme", 0, resources);
    report(6, "entanglement and sequential-gate timing", 0, timing);
    report(7, "byte-identical CSV over 5 runs", 0, determinism);
    report(8, "QASM corpus against golden files", 0, parser_corpus);
    report(9, "10000-shot Z statistics of H|0>", 0, measurement_statistics);
    report(10, "mutual RECV deadlock detected", 5.0, deadlock);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
