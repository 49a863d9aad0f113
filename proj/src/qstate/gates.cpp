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

#include "dqcsim/qstate/gates.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "dqcsim/errors.hpp"

namespace dqcsim::qstate {

namespace {

struct GateInfo {
    GateKind kind;
    std::string_view name;
    int arity;
    std::size_t params;
};

constexpr std::array<GateInfo, 15> kGates{{
    {GateKind::Init, "INIT", 0, 0},
    {GateKind::H, "H", 1, 0},
    {GateKind::X, "X", 1, 0},
    {GateKind::Y, "Y", 1, 0},
    {GateKind::Z, "Z", 1, 0},
    {GateKind::S, "S", 1, 0},
    {GateKind::T, "T", 1, 0},
    {GateKind::RX, "RX", 1, 1},
    {GateKind::RY, "RY", 1, 1},
    {GateKind::RZ, "RZ", 1, 1},
    {GateKind::U, "U", 1, 3},
    {GateKind::CNOT, "CNOT", 2, 0},
    {GateKind::CZ, "CZ", 2, 0},
    {GateKind::SWAP, "SWAP", 2, 0},
    {GateKind::Measure, "MEASURE", 1, 0},
}};

const GateInfo &info(GateKind kind) {
    for (const auto &g : kGates) {
        if (g.kind == kind) {
            return g;
        }
    }
    throw ArgumentError("unknown gate kind");
}

} // namespace

int GateSpec::arity() const { return info(kind).arity; }

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::size_t param_count(GateKind kind) { return info(kind).params; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &g : kGates) {
        if (g.name == name) {
            return g.kind;
        }
    }
    return std::nullopt;
}

GateSpec make_gate(GateKind kind, std::vector<double> params) {
    if (params.size() != param_count(kind)) {
        throw ArgumentError(std::string(gate_name(kind)) + " takes " +
                            std::to_string(param_count(kind)) + " parameter(s), got " +
                            std::to_string(params.size()));
    }
    return GateSpec{kind, std::move(params)};
}

std::optional<GateKind> controlled_target_gate(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
        return GateKind::X;
    case GateKind::CZ:
        return GateKind::Z;
    default:
        return std::nullopt;
    }
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string GateSpec::to_string() const {
    std::string out(gate_name(kind));
    if (!params.empty()) {
        out += '(';
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_real(params[i]);
        }
        out += ')';
    }
    return out;
}

std::vector<cplx> GateSpec::matrix() const {
    using namespace std::complex_literals;
    const double r = M_SQRT1_2;
    switch (kind) {
    case GateKind::H:
        return {r, r, r, -r};
    case GateKind::X:
        return {0, 1, 1, 0};
    case GateKind::Y:
        return {0, -1i, 1i, 0};
    case GateKind::Z:
        return {1, 0, 0, -1};
    case GateKind::S:
        return {1, 0, 0, 1i};
    case GateKind::T:
        return {1, 0, 0, std::polar(1.0, M_PI / 4)};
    case GateKind::RX: {
        const double c = std::cos(params.at(0) / 2), s = std::sin(params.at(0) / 2);
        return {c, -1i * s, -1i * s, c};
    }
    case GateKind::RY: {
        const double c = std::cos(params.at(0) / 2), s = std::sin(params.at(0) / 2);
        return {c, -s, s, c};
    }
    case GateKind::RZ: {
        const double h = params.at(0) / 2;
        return {std::polar(1.0, -h), 0, 0, std::polar(1.0, h)};
    }
    case GateKind::U: {
        // OpenQASM 2 convention: U(theta, phi, lambda).
        const double th = params.at(0), ph = params.at(1), la = params.at(2);
        const double c = std::cos(th / 2), s = std::sin(th / 2);
        return {c, -std::polar(1.0, la) * s, std::polar(1.0, ph) * s, std::polar(1.0, ph + la) * c};
    }
    case GateKind::CNOT:
        return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case GateKind::CZ:
        return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
    case GateKind::SWAP:
        return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
    case GateKind::Init:
    case GateKind::Measure:
        break;
    }
    throw ArgumentError(std::string(gate_name(kind)) + " has no unitary matrix");
}

} // namespace dqcsim::qstate
