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

#pragma once

#include <stdexcept>
#include <string>

namespace dqcsim {

/// Invalid argument to a public operation (bad probability, repeated qubit, ...).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Network construction or use violates the configured topology.
class TopologyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Static resource shortage found while compiling (comm qubits, free positions).
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Failure while executing an instruction stream.
class RuntimeFault : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Scenario or CLI configuration problem.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (QASM source, circuit file). Line and column are 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &message, int line, int column)
        : std::runtime_error(message), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

} // namespace dqcsim
