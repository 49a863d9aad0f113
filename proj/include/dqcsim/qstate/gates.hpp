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

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dqcsim::qstate {

using cplx = std::complex<double>;

enum class GateKind { Init, H, X, Y, Z, S, T, RX, RY, RZ, U, CNOT, CZ, SWAP, Measure };

/// A gate symbol plus its real parameters (RX/RY/RZ take one, U takes three).
struct GateSpec {
    GateKind kind = GateKind::H;
    std::vector<double> params;

    bool operator==(const GateSpec &) const = default;

    /// Number of qubits acted on; 0 for INIT (any count).
    int arity() const;
    bool is_unitary() const { return kind != GateKind::Init && kind != GateKind::Measure; }

    /// Row-major 2^k x 2^k unitary, first operand most significant.
    std::vector<cplx> matrix() const;

    /// Symbol with parameters, e.g. "RZ(1.5707963267948966)".
    std::string to_string() const;
};

GateSpec make_gate(GateKind kind, std::vector<double> params = {});

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);
std::size_t param_count(GateKind kind);

/// Format a real with 17 significant digits (shortest round-trip safe form).
std::string format_real(double v);

/// Controlled gates usable as the local part of a telegate: (CNOT -> X, CZ -> Z).
std::optional<GateKind> controlled_target_gate(GateKind kind);

} // namespace dqcsim::qstate
