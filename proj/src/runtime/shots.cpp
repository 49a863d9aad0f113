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
#include <exception>

#include <nlohmann/json.hpp>

#include "dqcsim/errors.hpp"
#include "dqcsim/runtime/runtime.hpp"

namespace dqcsim::runtime {

namespace {

std::string real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string bits_text(const std::map<int, int> &bits) {
    std::string out;
    for (const auto &[k, v] : bits) {
        if (!out.empty()) {
            out += ';';
        }
        out += "c" + std::to_string(k) + "=" + std::to_string(v);
    }
    return out;
}

std::string csv_quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    }
    return out + "\"";
}

} // namespace

std::string RunResult::to_csv() const {
    bool any_error = false;
    for (const auto &r : rows) {
        any_error = any_error || !r.error.empty();
    }
    std::string out = "shot,fidelity,final_time_ns,seed,classical_bits";
    out += any_error ? ",error\n" : "\n";
    for (const auto &r : rows) {
        out += std::to_string(r.shot) + "," + (r.fidelity ? real(*r.fidelity) : "") + "," + real(r.final_time) +
               "," + std::to_string(r.seed) + "," + bits_text(r.classical_bits);
        if (any_error) {
            out += "," + csv_quote(r.error);
        }
        out += "\n";
    }
    return out;
}

std::string RunResult::to_json() const {
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json j;
        j["shot"] = r.shot;
        j["fidelity"] = r.fidelity ? nlohmann::ordered_json(*r.fidelity) : nlohmann::ordered_json(nullptr);
        j["final_time_ns"] = r.final_time;
        j["seed"] = r.seed;
        nlohmann::ordered_json bits = nlohmann::ordered_json::object();
        for (const auto &[k, v] : r.classical_bits) {
            bits["c" + std::to_string(k)] = v;
        }
        j["classical_bits"] = bits;
        if (!r.error.empty()) {
            j["error"] = r.error;
        }
        rows_json.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["rows"] = rows_json;
    return doc.dump(2) + "\n";
}

double RunResult::mean_fidelity() const {
    double sum = 0;
    std::size_t n = 0;
    for (const auto &r : rows) {
        if (r.error.empty() && r.fidelity) {
            sum += *r.fidelity;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : std::nan("");
}

RunRow run_master(const Scenario &scenario, std::uint64_t seed, std::vector<int> forced_outcomes) {
    Simulation sim(scenario.network, scenario.options, seed);
    if (!forced_outcomes.empty()) {
        sim.force_outcomes(std::move(forced_outcomes));
    }
    RunRow row;
    row.seed = seed;
    row.final_time = sim.run(scenario.program.streams);
    if (scenario.collector) {
        row.fidelity = sim.fidelity(*scenario.collector);
    }
    row.classical_bits = sim.classical_bits();
    row.trace = sim.trace_lines();
    return row;
}

RunResult run_shots(const Scenario &scenario, std::size_t n_shots, std::uint64_t base_seed,
                    const ShotOptions &options) {
    if (n_shots == 0) {
        throw ArgumentError("run_shots needs at least one shot");
    }
    RunResult result;
    result.rows.resize(n_shots);
    std::vector<std::exception_ptr> errors(n_shots);
    const auto n = static_cast<long>(n_shots);
#pragma omp parallel for schedule(dynamic) if (options.parallel && n_shots > 1)
    for (long k = 0; k < n; ++k) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
        try {
            result.rows[k] = run_master(scenario, seed);
        } catch (const std::exception &e) {
            errors[k] = std::current_exception();
            result.rows[k] = RunRow{};
            result.rows[k].seed = seed;
            result.rows[k].final_time = std::nan("");
            result.rows[k].error = e.what();
        }
        result.rows[k].shot = static_cast<std::size_t>(k);
    }
    if (options.fail_fast) {
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    return result;
}

std::vector<Branch> enumerate_branches(const Scenario &scenario, std::uint64_t seed, std::size_t max_measurements) {
    if (!scenario.collector) {
        throw ArgumentError("branch enumeration needs a fidelity collector");
    }
    std::vector<Branch> out;
    std::vector<std::vector<int>> pending{{}};
    while (!pending.empty()) {
        std::vector<int> prefix = std::move(pending.back());
        pending.pop_back();
        Simulation sim(scenario.network, scenario.options, seed);
        sim.force_outcomes(prefix);
        try {
            sim.run(scenario.program.streams);
        } catch (const qstate::ImpossibleBranch &) {
            continue;
        }
        const std::size_t taken = sim.states().measurements_taken();
        if (taken > prefix.size()) {
            if (prefix.size() >= max_measurements) {
                throw ArgumentError("more than " + std::to_string(max_measurements) +
                                    " measurements; branch enumeration refused");
            }
            for (int bit : {1, 0}) {
                auto next = prefix;
                next.push_back(bit);
                pending.push_back(std::move(next));
            }
            continue;
        }
        out.push_back({prefix, sim.fidelity(*scenario.collector)});
    }
    return out;
}

} // namespace dqcsim::runtime
