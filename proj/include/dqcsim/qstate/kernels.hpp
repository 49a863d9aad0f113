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
 * Dense linear-algebra kernels over ket vectors and density matrices.
 *
 * Qubit q of an n-qubit register corresponds to bit (n - 1 - q) of the basis
 * index, so qubit 0 is the most significant bit. A density matrix is stored
 * row-major and is treated as a 2n-qubit vector: the row qubits occupy
 * positions [0, n) and the column qubits [n, 2n).
 *
 * Two implementations share every signature: the OpenMP-parallel kernels in
 * `kernels` and the plain loops in `kernels::reference`. The reference
 * versions are kept for testing and benchmarking.
 */
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dqcsim::qstate::kernels {

using cplx = std::complex<double>;

/// Work size (number of amplitude groups) below which kernels stay serial.
inline constexpr std::size_t kParallelThreshold = 1u << 12;

/// amps <- M applied on `targets` (targets[0] is the most significant index of M).
void apply_matrix(std::span<cplx> amps, unsigned num_qubits, std::span<const unsigned> targets,
                  std::span<const cplx> mat);

/// rho <- U rho U^dagger.
void apply_unitary_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                      std::span<const cplx> mat);

/// rho <- (1 - p) rho + p (I / 2^k  (x)  tr_targets rho).
void depolarize_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                   double p);

/// Reduced density matrix of the `keep` qubits, in the given order.
std::vector<cplx> reduced_dm_from_ket(std::span<const cplx> psi, unsigned num_qubits,
                                      std::span<const unsigned> keep);
std::vector<cplx> reduced_dm_from_dm(std::span<const cplx> rho, unsigned num_qubits,
                                     std::span<const unsigned> keep);

double prob_one_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit);
double prob_one_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit);

namespace reference {

void apply_matrix(std::span<cplx> amps, unsigned num_qubits, std::span<const unsigned> targets,
                  std::span<const cplx> mat);
void apply_unitary_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                      std::span<const cplx> mat);
void depolarize_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                   double p);
std::vector<cplx> reduced_dm_from_ket(std::span<const cplx> psi, unsigned num_qubits,
                                      std::span<const unsigned> keep);
std::vector<cplx> reduced_dm_from_dm(std::span<const cplx> rho, unsigned num_qubits,
                                     std::span<const unsigned> keep);
double prob_one_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit);
double prob_one_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit);

} // namespace reference

// Serial helpers for state bookkeeping (not hot paths).

/// Tensor product a (x) b of two kets.
std::vector<cplx> kron_ket(std::span<const cplx> a, std::span<const cplx> b);
/// Tensor product of two square matrices of dimensions da and db.
std::vector<cplx> kron_dm(std::span<const cplx> a, std::size_t da, std::span<const cplx> b,
                          std::size_t db);

/// Amplitudes with `qubit` fixed to `outcome`, the qubit removed (unnormalized).
std::vector<cplx> slice_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit,
                            int outcome);
/// Block of rho with `qubit` fixed to `outcome` on both sides, qubit removed (unnormalized).
std::vector<cplx> slice_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit,
                           int outcome);
/// rho <- w0 P0 rho P0 + w1 P1 rho P1 for the Z-basis projectors on `qubit`.
void weight_blocks_dm(std::span<cplx> rho, unsigned num_qubits, unsigned qubit, double w0,
                      double w1);

} // namespace dqcsim::qstate::kernels
