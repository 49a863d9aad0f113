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
 * Scenario files (YAML) and the command-line driver.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dqcsim/circuit/circuit.hpp"
#include "dqcsim/runtime/runtime.hpp"

namespace dqcsim::app {

struct LoadedScenario {
    runtime::Scenario scenario;
    circuit::DistributedCircuit circuit;
    std::uint64_t seed = 0;
    std::size_t shots = 1;
    bool parallel_shots = true;
    /// The configuration after overrides, with paths made absolute.
    std::string effective_yaml;
};

/// `overrides` are "dotted.path=value" strings; values are parsed as YAML.
/// Throws ConfigError, ParseError, TopologyError or ResourceError.
LoadedScenario load_scenario_file(const std::string &path, const std::vector<std::string> &overrides = {});
LoadedScenario load_scenario_yaml(const std::string &yaml, const std::string &base_dir,
                                  const std::vector<std::string> &overrides = {});

/// Makes a partitioner selectable as software.partitioner.
void register_partitioner(const std::string &name, circuit::PartitionerStrategy strategy);

/// Exit codes: 0 ok, 1 runtime failure, 2 usage or configuration error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace dqcsim::app
