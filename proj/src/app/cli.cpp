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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dqcsim/app/app.hpp"
#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"

namespace dqcsim::app {

namespace {

struct Flags {
    std::string config;
    std::string circuit;
    std::string out;
    std::string format = "csv";
    std::string dump_config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> shots;
    bool fail_fast = false;
    bool verbose = false;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write " + path);
    }
    f << text;
}

std::vector<std::string> overrides(const Flags &f) {
    auto o = f.sets;
    if (!f.circuit.empty()) {
        o.push_back("software.circuit=~");
        o.push_back("software.qasm=~");
        o.push_back("software.circuit_file=" + std::filesystem::absolute(f.circuit).string());
    }
    if (f.seed) {
        o.push_back("run.seed=" + std::to_string(*f.seed));
    }
    if (f.shots) {
        o.push_back("run.shots=" + std::to_string(*f.shots));
    }
    return o;
}

LoadedScenario load(const Flags &f) {
    auto s = load_scenario_file(f.config, overrides(f));
    if (!f.dump_config.empty()) {
        write_file(f.dump_config, s.effective_yaml);
    }
    return s;
}

int cmd_run(const Flags &f, std::ostream &out, std::ostream &err) {
    const LoadedScenario s = load(f);
    auto scenario = s.scenario;
    scenario.options.verbose = f.verbose;
    runtime::ShotOptions opt;
    opt.fail_fast = f.fail_fast;
    opt.parallel = s.parallel_shots;
    runtime::RunResult result;
    try {
        result = runtime::run_shots(scenario, s.shots, s.seed, opt);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const std::string body = f.format == "json" ? result.to_json() : result.to_csv();
    std::ostream &summary = f.out.empty() ? err : out;
    if (f.out.empty()) {
        out << body;
    } else {
        write_file(f.out, body);
    }
    if (f.verbose) {
        for (const auto &row : result.rows) {
            err << "# shot " << row.shot << " seed " << row.seed << "\n";
            for (const auto &line : row.trace) {
                err << line << "\n";
            }
        }
    }
    std::size_t failed = 0;
    for (const auto &row : result.rows) {
        if (!row.error.empty()) {
            ++failed;
            err << "shot " << row.shot << " failed: " << row.error << "\n";
        }
    }
    summary << "shots: " << result.rows.size() << "\n";
    const double mean = result.mean_fidelity();
    if (!std::isnan(mean)) {
        summary << "mean fidelity: " << fmt("%.16f", mean) << "\n";
    }
    if (!result.rows.empty() && result.rows.front().error.empty()) {
        summary << "final time (ns): " << fmt("%.17g", result.rows.front().final_time) << "\n";
    }
    return failed ? 1 : 0;
}

int cmd_compile(const Flags &f, std::ostream &out, std::ostream &) {
    const LoadedScenario s = load(f);
    const auto &net = s.scenario.network;
    const auto &prog = s.scenario.program;
    std::string text = compiler::format_program(prog, net);
    const auto &r = prog.resources;
    text += "# ebits=" + std::to_string(r.ebits) + " classical_bits=" + std::to_string(r.classical_bits) + "\n";
    for (std::size_t k = 0; k < r.instructions_per_qpu.size(); ++k) {
        text += "# " + net.qpus[k].name + ": instructions=" + std::to_string(r.instructions_per_qpu[k]) +
                " depth=" + std::to_string(r.depth_per_qpu[k]) + "\n";
    }
    if (f.out.empty()) {
        out << text;
    } else {
        write_file(f.out, text);
    }
    return 0;
}

int cmd_parse(const std::string &path, const Flags &f, std::ostream &out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    circuit::MonolithicCircuit c;
    try {
        c = qasm::lower_to_circuit(qasm::parse_qasm(ss.str()));
    } catch (const ParseError &e) {
        throw ParseError(path + ":" + e.what(), e.line(), e.column());
    }
    const std::string text = qasm::dump(c);
    if (f.out.empty()) {
        out << text;
    } else {
        write_file(f.out, text);
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Discrete-event simulator for distributed quantum computers"};
    app.require_subcommand(1);
    Flags f;
    std::string qasm_path;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", f.config, "Scenario file (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--circuit", f.circuit, "Circuit file replacing the scenario's (.dqc or .qasm)")
            ->check(CLI::ExistingFile);
        sub->add_option("--set", f.sets, "Override a config value, e.g. --set run.formalism=ket");
        sub->add_option("--out", f.out, "Write output to this file instead of stdout");
        sub->add_option("--dump-config", f.dump_config, "Write the effective configuration here");
    };
    auto *run = app.add_subcommand("run", "Compile and run a scenario");
    common(run);
    run->add_option("--format", f.format, "Result format")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", f.seed, "Base seed (shot k uses seed + k)");
    run->add_option("--shots", f.shots, "Number of shots")->check(CLI::PositiveNumber);
    run->add_flag("--fail-fast", f.fail_fast, "Stop at the first failing shot");
    run->add_flag("--verbose", f.verbose, "Print the instruction trace");
    auto *compile = app.add_subcommand("compile", "Print the per-QPU instruction streams");
    common(compile);
    auto *parse = app.add_subcommand("parse", "Parse an OpenQASM 2.0 file and list its gates");
    parse->add_option("qasm", qasm_path, "QASM file");
    parse->add_option("--circuit", f.circuit, "QASM file (alternative to the positional argument)");
    parse->add_option("--out", f.out, "Write output to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*run) {
            return cmd_run(f, out, err);
        }
        if (*compile) {
            return cmd_compile(f, out, err);
        }
        const std::string path = !qasm_path.empty() ? qasm_path : f.circuit;
        if (path.empty()) {
            err << "error: parse needs a QASM file\n";
            return 2;
        }
        return cmd_parse(path, f, out);
    } catch (const sim::DeadlockError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const RuntimeFault &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        // Configuration, parse, topology, resource and argument problems.
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace dqcsim::app
