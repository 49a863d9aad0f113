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

// Parallel kernels against the serial reference loops.
#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "dqcsim/qstate/kernels.hpp"

namespace k = dqcsim::qstate::kernels;
using k::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t size) {
    std::mt19937_64 g(7);
    std::normal_distribution<double> n(0, 1);
    std::vector<cplx> v(size);
    for (auto &a : v) {
        a = {n(g), n(g)};
    }
    return v;
}

const std::vector<cplx> kCnot = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};

template <auto Fn>
void ket_cnot(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    auto psi = random_vector(std::size_t{1} << n);
    const std::array<unsigned, 2> targets = {0, n - 1};
    for (auto _ : state) {
        Fn(psi, n, std::span<const unsigned>(targets), kCnot);
        benchmark::DoNotOptimize(psi.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.size()));
}

template <auto Fn>
void dm_cnot(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    auto rho = random_vector(std::size_t{1} << (2 * n));
    const std::array<unsigned, 2> targets = {0, n - 1};
    for (auto _ : state) {
        Fn(rho, n, std::span<const unsigned>(targets), kCnot);
        benchmark::DoNotOptimize(rho.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rho.size()));
}

template <auto Fn>
void dm_depolarize(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    auto rho = random_vector(std::size_t{1} << (2 * n));
    const std::array<unsigned, 1> targets = {1};
    for (auto _ : state) {
        Fn(rho, n, std::span<const unsigned>(targets), 0.01);
        benchmark::DoNotOptimize(rho.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rho.size()));
}

template <auto Fn>
void ket_prob_one(benchmark::State &state) {
    const auto n = static_cast<unsigned>(state.range(0));
    const auto psi = random_vector(std::size_t{1} << n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Fn(psi, n, n / 2));
    }
}

} // namespace

BENCHMARK(ket_cnot<k::apply_matrix>)->Name("ket_cnot/parallel")->DenseRange(12, 22, 5);
BENCHMARK(ket_cnot<k::reference::apply_matrix>)->Name("ket_cnot/reference")->DenseRange(12, 22, 5);
BENCHMARK(dm_cnot<k::apply_unitary_dm>)->Name("dm_cnot/parallel")->DenseRange(6, 9, 3);
BENCHMARK(dm_cnot<k::reference::apply_unitary_dm>)->Name("dm_cnot/reference")->DenseRange(6, 9, 3);
BENCHMARK(dm_depolarize<k::depolarize_dm>)->Name("dm_depolarize/parallel")->DenseRange(6, 9, 3);
BENCHMARK(dm_depolarize<k::reference::depolarize_dm>)->Name("dm_depolarize/reference")->DenseRange(6, 9, 3);
BENCHMARK(ket_prob_one<k::prob_one_ket>)->Name("ket_prob_one/parallel")->DenseRange(12, 22, 5);
BENCHMARK(ket_prob_one<k::reference::prob_one_ket>)->Name("ket_prob_one/reference")->DenseRange(12, 22, 5);

BENCHMARK_MAIN();
