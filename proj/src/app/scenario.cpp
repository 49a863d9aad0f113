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

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dqcsim/app/app.hpp"
#include "dqcsim/errors.hpp"
#include "dqcsim/qasm/qasm.hpp"

namespace dqcsim::app {

namespace fs = std::filesystem;
using qstate::cplx;

namespace {

std::mutex &registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, circuit::PartitionerStrategy> &partitioners() {
    static std::map<std::string, circuit::PartitionerStrategy> p = {
        {"contiguous",
         [](const circuit::MonolithicCircuit &c, const hardware::DqcNetwork &n, circuit::Scheme s) {
             return circuit::partition_contiguous(c, n, s);
         }},
    };
    return p;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_keys(const YAML::Node &node, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!node) {
        return;
    }
    if (!node.IsMap()) {
        throw ConfigError(where + " must be a mapping");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T> T get(const YAML::Node &node, const std::string &where, T fallback) {
    if (!node || node.IsNull()) {
        return fallback;
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception &) {
        throw ConfigError(where + ": cannot read value '" + YAML::Dump(node) + "'");
    }
}

double number(const YAML::Node &node, const std::string &where) {
    if (!node.IsScalar()) {
        throw ConfigError(where + " must be a number or constant expression");
    }
    const auto text = node.as<std::string>();
    try {
        return qasm::evaluate_constant(text);
    } catch (const ParseError &e) {
        throw ConfigError(where + ": '" + text + "' is not a constant (" + e.what() + ")");
    }
}

cplx complex_entry(const YAML::Node &node, const std::string &where) {
    if (node.IsSequence()) {
        if (node.size() != 2) {
            throw ConfigError(where + ": complex entries are [re, im] pairs");
        }
        return {number(node[0], where), number(node[1], where)};
    }
    return {number(node, where), 0.0};
}

std::vector<hardware::Link> links(const YAML::Node &node, const std::string &where) {
    std::vector<hardware::Link> out;
    if (!node || node.IsNull()) {
        return out;
    }
    if (node.IsScalar() && node.as<std::string>() == "all") {
        return {};
    }
    if (!node.IsSequence()) {
        throw ConfigError(where + " must be a list of [i, j] pairs or \"all\"");
    }
    for (const auto &p : node) {
        if (!p.IsSequence() || p.size() != 2) {
            throw ConfigError(where + " entries must be [i, j] pairs");
        }
        out.emplace_back(get<int>(p[0], where, 0), get<int>(p[1], where, 0));
    }
    return out;
}

bool is_all(const YAML::Node &node) { return node && node.IsScalar() && node.as<std::string>() == "all"; }

void apply_override(YAML::Node &root, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' must look like path.to.key=value");
    }
    const std::string path = assignment.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(assignment.substr(eq + 1));
    } catch (const YAML::Exception &e) {
        throw ConfigError("override '" + assignment + "': " + e.what());
    }
    std::vector<std::string> parts;
    std::stringstream ss(path);
    for (std::string p; std::getline(ss, p, '.');) {
        if (p.empty()) {
            throw ConfigError("override '" + assignment + "' has an empty path component");
        }
        parts.push_back(p);
    }
    // yaml-cpp nodes are handles; walk with fresh handles so assignment rebinds the child.
    std::vector<YAML::Node> chain{root};
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        YAML::Node child = chain.back()[parts[i]];
        if (!child || child.IsNull()) {
            chain.back()[parts[i]] = YAML::Node(YAML::NodeType::Map);
            child = chain.back()[parts[i]];
        }
        if (!child.IsMap()) {
            throw ConfigError("override '" + assignment + "': '" + parts[i] + "' is not a table");
        }
        chain.push_back(child);
    }
    chain.back()[parts.back()] = value;
}

hardware::DqcNetwork build_network(const YAML::Node &hw) {
    check_keys(hw, "hardware",
               {"num_qpus", "quantum_topology", "classical_topology", "classical_delay_ns", "qpu", "connection"});
    if (!hw) {
        throw ConfigError("missing 'hardware' section");
    }
    const int n = get<int>(hw["num_qpus"], "hardware.num_qpus", 0);
    if (n < 1) {
        throw ConfigError("hardware.num_qpus must be at least 1");
    }
    const YAML::Node q = hw["qpu"];
    check_keys(q, "hardware.qpu",
               {"num_positions", "num_comm_qubits", "single_qubit_gate_time", "two_qubit_gate_time",
                "measurement_time", "single_qubit_gate_error_prob", "p_depolar_error_cnot", "meas_error_prob",
                "comm_qubit_depolar_rate", "proc_qubit_depolar_rate"});
    hardware::QpuConfig qc;
    auto num = [&](const char *key, double fallback) {
        const YAML::Node v = q[key];
        return v ? number(v, std::string("hardware.qpu.") + key) : fallback;
    };
    qc.num_positions = get<int>(q["num_positions"], "hardware.qpu.num_positions", qc.num_positions);
    qc.num_comm_qubits = get<int>(q["num_comm_qubits"], "hardware.qpu.num_comm_qubits", qc.num_comm_qubits);
    qc.single_qubit_gate_time = num("single_qubit_gate_time", 0);
    qc.two_qubit_gate_time = num("two_qubit_gate_time", 0);
    qc.measurement_time = num("measurement_time", 0);
    qc.single_qubit_gate_error_prob = num("single_qubit_gate_error_prob", 0);
    qc.p_depolar_error_cnot = num("p_depolar_error_cnot", 0);
    qc.meas_error_prob = num("meas_error_prob", 0);
    qc.comm_qubit_depolar_rate = num("comm_qubit_depolar_rate", 0);
    qc.proc_qubit_depolar_rate = num("proc_qubit_depolar_rate", 0);
    try {
        qc.validate();
    } catch (const ArgumentError &e) {
        throw ConfigError(std::string("hardware.qpu: ") + e.what());
    }

    const YAML::Node c = hw["connection"];
    check_keys(c, "hardware.connection", {"delay_ns", "ent_dist_rate_hz", "werner_fidelity", "state"});
    const bool has_delay = c && c["delay_ns"], has_rate = c && c["ent_dist_rate_hz"];
    if (has_delay == has_rate) {
        throw ConfigError("hardware.connection needs exactly one of delay_ns and ent_dist_rate_hz");
    }
    double delay = 0;
    if (has_delay) {
        delay = number(c["delay_ns"], "hardware.connection.delay_ns");
    } else {
        const double rate = number(c["ent_dist_rate_hz"], "hardware.connection.ent_dist_rate_hz");
        if (!(rate > 0)) {
            throw ConfigError("hardware.connection.ent_dist_rate_hz must be positive");
        }
        delay = 1e9 / rate;
    }
    hardware::ConnectionConfig conn;
    if (c["werner_fidelity"] && c["state"]) {
        throw ConfigError("hardware.connection takes werner_fidelity or state, not both");
    }
    try {
        if (c["state"]) {
            const YAML::Node s = c["state"];
            if (!s.IsSequence() || s.size() != 4) {
                throw ConfigError("hardware.connection.state must be a 4x4 matrix (list of 4 rows)");
            }
            conn.delay = delay;
            for (const auto &row : s) {
                if (!row.IsSequence() || row.size() != 4) {
                    throw ConfigError("hardware.connection.state rows must have 4 entries");
                }
                for (const auto &e : row) {
                    conn.state4distribution.push_back(complex_entry(e, "hardware.connection.state"));
                }
            }
            conn.validate();
        } else {
            const double f = c["werner_fidelity"] ? number(c["werner_fidelity"], "hardware.connection.werner_fidelity")
                                                  : 1.0;
            conn = hardware::ConnectionConfig::werner(delay, f);
        }
    } catch (const ArgumentError &e) {
        throw ConfigError(std::string("hardware.connection: ") + e.what());
    }

    const auto qt = is_all(hw["quantum_topology"]) ? hardware::all_pairs(n)
                                                   : links(hw["quantum_topology"], "hardware.quantum_topology");
    const auto ct = is_all(hw["classical_topology"]) ? hardware::all_pairs(n)
                                                     : links(hw["classical_topology"], "hardware.classical_topology");
    const double cdelay =
        hw["classical_delay_ns"] ? number(hw["classical_delay_ns"], "hardware.classical_delay_ns") : 0.0;
    if (!(cdelay >= 0)) {
        throw ConfigError("hardware.classical_delay_ns must be non-negative");
    }
    return hardware::build_dqc(n, qt, ct, qc, conn, cdelay);
}

std::vector<cplx> desired_state(const YAML::Node &node) {
    if (!node || !node.IsSequence()) {
        throw ConfigError("run.collector.desired_state must be a list of amplitudes");
    }
    std::vector<cplx> out;
    for (const auto &e : node) {
        out.push_back(complex_entry(e, "run.collector.desired_state"));
    }
    return out;
}

} // namespace

void register_partitioner(const std::string &name, circuit::PartitionerStrategy strategy) {
    std::lock_guard lock(registry_mutex());
    partitioners()[name] = std::move(strategy);
}

LoadedScenario load_scenario_yaml(const std::string &yaml, const std::string &base_dir,
                                  const std::vector<std::string> &overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception &e) {
        throw ConfigError(std::string("invalid YAML: ") + e.what());
    }
    if (!root || root.IsNull()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!root.IsMap()) {
        throw ConfigError("scenario must be a mapping with hardware, software and run sections");
    }
    for (const auto &o : overrides) {
        apply_override(root, o);
    }
    check_keys(root, "scenario", {"hardware", "software", "run"});

    LoadedScenario out;
    out.scenario.network = build_network(root["hardware"]);
    const auto &net = out.scenario.network;

    // Software.
    YAML::Node sw = root["software"];
    check_keys(sw, "software",
               {"circuit_file", "circuit", "qasm", "partitioner", "capacities", "default_scheme",
                "noiseless_corrections"});
    if (!sw) {
        throw ConfigError("missing 'software' section");
    }
    auto present = [](const YAML::Node &n) { return n && !n.IsNull(); };
    const int sources = (present(sw["circuit_file"]) ? 1 : 0) + (present(sw["circuit"]) ? 1 : 0) +
                        (present(sw["qasm"]) ? 1 : 0);
    if (sources != 1) {
        throw ConfigError("software needs exactly one of circuit_file, circuit (inline) and qasm (inline)");
    }
    const std::string scheme_text = get<std::string>(sw["default_scheme"], "software.default_scheme", "cat");
    const auto scheme = circuit::parse_scheme(scheme_text);
    if (!scheme) {
        throw ConfigError("software.default_scheme '" + scheme_text + "' is not one of cat, 1tp, 2tp, tp_safe");
    }
    out.scenario.options.noiseless_corrections =
        get<bool>(sw["noiseless_corrections"], "software.noiseless_corrections", false);

    std::optional<circuit::MonolithicCircuit> mono;
    circuit::LogicalQubitMap qmap;
    if (present(sw["circuit_file"])) {
        fs::path p = get<std::string>(sw["circuit_file"], "software.circuit_file", "");
        if (p.is_relative()) {
            p = fs::path(base_dir) / p;
        }
        p = p.lexically_normal();
        sw["circuit_file"] = p.string();
        const std::string text = read_file(p.string());
        try {
            if (p.extension() == ".qasm") {
                mono = qasm::lower_to_circuit(qasm::parse_qasm(text));
            } else {
                out.circuit = circuit::parse_distributed(text);
            }
        } catch (const ParseError &e) {
            throw ParseError(p.string() + ":" + e.what(), e.line(), e.column());
        }
    } else if (present(sw["qasm"])) {
        mono = qasm::lower_to_circuit(qasm::parse_qasm(get<std::string>(sw["qasm"], "software.qasm", "")));
    } else {
        out.circuit = circuit::parse_distributed(get<std::string>(sw["circuit"], "software.circuit", ""));
    }
    if (mono) {
        const std::string name = get<std::string>(sw["partitioner"], "software.partitioner", "contiguous");
        circuit::PartitionerStrategy strategy;
        {
            std::lock_guard lock(registry_mutex());
            auto it = partitioners().find(name);
            if (it == partitioners().end()) {
                throw ConfigError("unknown partitioner '" + name + "'");
            }
            strategy = it->second;
        }
        circuit::Partition part;
        if (sw["capacities"]) {
            if (name != "contiguous") {
                throw ConfigError("software.capacities applies to the contiguous partitioner only");
            }
            part = circuit::partition_contiguous(*mono, get<std::vector<int>>(sw["capacities"], "software.capacities", {}),
                                                 net, *scheme);
        } else {
            part = strategy(*mono, net, *scheme);
        }
        out.circuit = std::move(part.circuit);
        qmap = std::move(part.qmap);
    } else {
        qmap = circuit::infer_qubit_map(out.circuit);
    }
    const auto diags = circuit::validate_distributed(out.circuit, net);
    if (!diags.empty()) {
        std::string msg = "circuit is not valid for this hardware:";
        for (const auto &d : diags) {
            msg += "\n  gate " + std::to_string(d.gate_index) + ": " + d.message;
        }
        throw ConfigError(msg);
    }
    compiler::CompileOptions copt;
    copt.default_scheme = *scheme;
    out.scenario.program = compiler::compile(out.circuit, net, qmap, copt);

    // Run.
    YAML::Node run = root["run"];
    check_keys(run, "run", {"formalism", "seed", "shots", "parallel", "collector"});
    const std::string formalism = get<std::string>(run["formalism"], "run.formalism", "dm");
    if (formalism == "dm" || formalism == "density_matrix") {
        out.scenario.options.formalism = qstate::Formalism::DensityMatrix;
    } else if (formalism == "ket") {
        out.scenario.options.formalism = qstate::Formalism::Ket;
    } else {
        throw ConfigError("run.formalism must be dm or ket, got '" + formalism + "'");
    }
    const long long seed = get<long long>(run["seed"], "run.seed", 0);
    const long long shots = get<long long>(run["shots"], "run.shots", 1);
    if (seed < 0) {
        throw ConfigError("run.seed must be non-negative");
    }
    if (shots < 1) {
        throw ConfigError("run.shots must be at least 1");
    }
    out.seed = static_cast<std::uint64_t>(seed);
    out.shots = static_cast<std::size_t>(shots);
    out.parallel_shots = get<bool>(run["parallel"], "run.parallel", true);
    if (const YAML::Node col = run["collector"]; col && !col.IsNull()) {
        check_keys(col, "run.collector", {"targets", "desired_state"});
        if (!col["targets"] || !col["targets"].IsSequence()) {
            throw ConfigError("run.collector.targets must be a list such as [\"2@node_0\", \"2@node_1\"]");
        }
        std::vector<circuit::Address> targets;
        for (const auto &t : col["targets"]) {
            const auto text = t.as<std::string>();
            circuit::Address home;
            const auto at = text.find('@');
            if (at == std::string::npos) {
                std::size_t logical = 0;
                try {
                    logical = std::stoul(text);
                } catch (const std::exception &) {
                    throw ConfigError("collector target '" + text + "' is neither pos@node_k nor a logical index");
                }
                if (logical >= out.scenario.program.initial_qmap.size()) {
                    throw ConfigError("collector target " + text + " exceeds the number of logical qubits");
                }
                home = out.scenario.program.initial_qmap.at(logical);
            } else {
                auto node = hardware::parse_node_name(text.substr(at + 1));
                try {
                    home.position = std::stoi(text.substr(0, at));
                } catch (const std::exception &) {
                    node.reset();
                }
                if (!node) {
                    throw ConfigError("collector target '" + text + "' is not pos@node_k");
                }
                home.node = *node;
            }
            try {
                targets.push_back(out.scenario.program.resolve(home));
            } catch (const ArgumentError &) {
                throw ConfigError("collector target '" + text + "' holds no qubit of the circuit");
            }
        }
        try {
            out.scenario.collector = runtime::make_fidelity_collector(targets, desired_state(col["desired_state"]));
        } catch (const ArgumentError &e) {
            throw ConfigError(std::string("run.collector: ") + e.what());
        }
    }

    YAML::Emitter em;
    em << root;
    out.effective_yaml = std::string(em.c_str()) + "\n";
    return out;
}

LoadedScenario load_scenario_file(const std::string &path, const std::vector<std::string> &overrides) {
    const std::string text = read_file(path);
    const auto dir = fs::absolute(fs::path(path)).parent_path();
    return load_scenario_yaml(text, dir.string(), overrides);
}

} // namespace dqcsim::app
