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

#include "dqcsim/qstate/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace dqcsim::qstate::kernels {

namespace {

using Index = std::uint64_t;

inline unsigned bit_of(unsigned num_qubits, unsigned qubit) { return num_qubits - 1 - qubit; }

// Bit positions in ascending order, for zero insertion.
std::vector<unsigned> sorted_bits(unsigned num_qubits, std::span<const unsigned> qubits) {
    std::vector<unsigned> bits;
    bits.reserve(qubits.size());
    for (unsigned q : qubits) {
        bits.push_back(bit_of(num_qubits, q));
    }
    std::sort(bits.begin(), bits.end());
    return bits;
}

inline Index insert_zeros(Index i, const std::vector<unsigned> &bits) {
    for (unsigned b : bits) {
        const Index low = i & ((Index{1} << b) - 1);
        i = ((i >> b) << (b + 1)) | low;
    }
    return i;
}

// offsets[j] = basis offset selecting local index j over `qubits` (qubits[0] most significant).
std::vector<Index> local_offsets(unsigned num_qubits, std::span<const unsigned> qubits) {
    const std::size_t k = qubits.size();
    std::vector<Index> offsets(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        Index off = 0;
        for (std::size_t m = 0; m < k; ++m) {
            if ((j >> (k - 1 - m)) & 1u) {
                off |= Index{1} << bit_of(num_qubits, qubits[m]);
            }
        }
        offsets[j] = off;
    }
    return offsets;
}

std::vector<unsigned> complement(unsigned num_qubits, std::span<const unsigned> keep) {
    std::vector<unsigned> rest;
    for (unsigned q = 0; q < num_qubits; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            rest.push_back(q);
        }
    }
    return rest;
}

} // namespace

void apply_matrix(std::span<cplx> amps, unsigned num_qubits, std::span<const unsigned> targets,
                  std::span<const cplx> mat) {
    const std::size_t k = targets.size();
    const std::size_t dim = std::size_t{1} << k;
    const auto bits = sorted_bits(num_qubits, targets);
    const auto offsets = local_offsets(num_qubits, targets);
    const auto groups = static_cast<std::int64_t>(amps.size() >> k);

#pragma omp parallel if (static_cast<std::size_t>(groups) >= kParallelThreshold)
    {
        std::vector<cplx> in(dim);
#pragma omp for schedule(static)
        for (std::int64_t g = 0; g < groups; ++g) {
            const Index base = insert_zeros(static_cast<Index>(g), bits);
            for (std::size_t j = 0; j < dim; ++j) {
                in[j] = amps[base + offsets[j]];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                cplx acc = 0;
                const cplx *row = mat.data() + r * dim;
                for (std::size_t c = 0; c < dim; ++c) {
                    acc += row[c] * in[c];
                }
                amps[base + offsets[r]] = acc;
            }
        }
    }
}

void apply_unitary_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                      std::span<const cplx> mat) {
    std::vector<unsigned> rows(targets.begin(), targets.end());
    std::vector<unsigned> cols;
    cols.reserve(targets.size());
    for (unsigned t : targets) {
        cols.push_back(t + num_qubits);
    }
    std::vector<cplx> conj_mat(mat.begin(), mat.end());
    for (auto &z : conj_mat) {
        z = std::conj(z);
    }
    apply_matrix(rho, 2 * num_qubits, rows, mat);
    apply_matrix(rho, 2 * num_qubits, cols, conj_mat);
}

void depolarize_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                   double p) {
    const std::size_t k = targets.size();
    const std::size_t dim = std::size_t{1} << k;
    const unsigned wide = 2 * num_qubits;
    std::vector<unsigned> both(targets.begin(), targets.end());
    for (unsigned t : targets) {
        both.push_back(t + num_qubits);
    }
    const auto bits = sorted_bits(wide, both);
    const auto row_off = local_offsets(wide, targets);
    std::vector<unsigned> col_qubits;
    for (unsigned t : targets) {
        col_qubits.push_back(t + num_qubits);
    }
    const auto col_off = local_offsets(wide, col_qubits);
    const auto groups = static_cast<std::int64_t>(rho.size() >> (2 * k));
    const double keep = 1.0 - p;
    const double mix = p / static_cast<double>(dim);

#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(groups) >= kParallelThreshold)
    for (std::int64_t g = 0; g < groups; ++g) {
        const Index base = insert_zeros(static_cast<Index>(g), bits);
        cplx trace = 0;
        for (std::size_t s = 0; s < dim; ++s) {
            trace += rho[base + row_off[s] + col_off[s]];
        }
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < dim; ++b) {
                cplx &z = rho[base + row_off[a] + col_off[b]];
                z *= keep;
                if (a == b) {
                    z += mix * trace;
                }
            }
        }
    }
}

std::vector<cplx> reduced_dm_from_ket(std::span<const cplx> psi, unsigned num_qubits,
                                      std::span<const unsigned> keep) {
    const auto rest = complement(num_qubits, keep);
    const auto koff = local_offsets(num_qubits, keep);
    const auto roff = local_offsets(num_qubits, rest);
    const std::size_t dk = koff.size();
    std::vector<cplx> out(dk * dk);
    const auto entries = static_cast<std::int64_t>(dk * dk);
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(entries) * roff.size() >= kParallelThreshold)
    for (std::int64_t e = 0; e < entries; ++e) {
        const std::size_t i = static_cast<std::size_t>(e) / dk, j = static_cast<std::size_t>(e) % dk;
        cplx acc = 0;
        for (Index r : roff) {
            acc += psi[koff[i] + r] * std::conj(psi[koff[j] + r]);
        }
        out[static_cast<std::size_t>(e)] = acc;
    }
    return out;
}

std::vector<cplx> reduced_dm_from_dm(std::span<const cplx> rho, unsigned num_qubits,
                                     std::span<const unsigned> keep) {
    const auto rest = complement(num_qubits, keep);
    const auto koff = local_offsets(num_qubits, keep);
    const auto roff = local_offsets(num_qubits, rest);
    const std::size_t dk = koff.size();
    const std::size_t full = std::size_t{1} << num_qubits;
    std::vector<cplx> out(dk * dk);
    const auto entries = static_cast<std::int64_t>(dk * dk);
#pragma omp parallel for schedule(static) if (static_cast<std::size_t>(entries) * roff.size() >= kParallelThreshold)
    for (std::int64_t e = 0; e < entries; ++e) {
        const std::size_t i = static_cast<std::size_t>(e) / dk, j = static_cast<std::size_t>(e) % dk;
        cplx acc = 0;
        for (Index r : roff) {
            acc += rho[(koff[i] + r) * full + koff[j] + r];
        }
        out[static_cast<std::size_t>(e)] = acc;
    }
    return out;
}

double prob_one_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit) {
    const Index mask = Index{1} << bit_of(num_qubits, qubit);
    const auto n = static_cast<std::int64_t>(psi.size());
    double p = 0;
#pragma omp parallel for reduction(+ : p) schedule(static) if (psi.size() >= kParallelThreshold)
    for (std::int64_t i = 0; i < n; ++i) {
        if (static_cast<Index>(i) & mask) {
            p += std::norm(psi[static_cast<std::size_t>(i)]);
        }
    }
    return p;
}

double prob_one_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit) {
    const Index mask = Index{1} << bit_of(num_qubits, qubit);
    const auto full = static_cast<std::int64_t>(std::size_t{1} << num_qubits);
    double p = 0;
#pragma omp parallel for reduction(+ : p) schedule(static) if (static_cast<std::size_t>(full) >= kParallelThreshold)
    for (std::int64_t i = 0; i < full; ++i) {
        if (static_cast<Index>(i) & mask) {
            p += rho[static_cast<std::size_t>(i * full + i)].real();
        }
    }
    return p;
}

std::vector<cplx> kron_ket(std::span<const cplx> a, std::span<const cplx> b) {
    std::vector<cplx> out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

std::vector<cplx> kron_dm(std::span<const cplx> a, std::size_t da, std::span<const cplx> b,
                          std::size_t db) {
    const std::size_t d = da * db;
    std::vector<cplx> out(d * d);
    for (std::size_t i1 = 0; i1 < da; ++i1) {
        for (std::size_t j1 = 0; j1 < da; ++j1) {
            const cplx x = a[i1 * da + j1];
            if (x == cplx{}) {
                continue;
            }
            for (std::size_t i2 = 0; i2 < db; ++i2) {
                for (std::size_t j2 = 0; j2 < db; ++j2) {
                    out[(i1 * db + i2) * d + j1 * db + j2] = x * b[i2 * db + j2];
                }
            }
        }
    }
    return out;
}

std::vector<cplx> slice_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit,
                            int outcome) {
    const unsigned b = bit_of(num_qubits, qubit);
    std::vector<cplx> out(psi.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Index low = i & ((Index{1} << b) - 1);
        const Index full = ((i >> b) << (b + 1)) | (Index(outcome) << b) | low;
        out[i] = psi[full];
    }
    return out;
}

std::vector<cplx> slice_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit,
                           int outcome) {
    const unsigned b = bit_of(num_qubits, qubit);
    const std::size_t full_dim = std::size_t{1} << num_qubits;
    const std::size_t dim = full_dim / 2;
    auto expand = [&](std::size_t i) {
        const Index low = i & ((Index{1} << b) - 1);
        return ((i >> b) << (b + 1)) | (Index(outcome) << b) | low;
    };
    std::vector<cplx> out(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const Index fi = expand(i);
        for (std::size_t j = 0; j < dim; ++j) {
            out[i * dim + j] = rho[fi * full_dim + expand(j)];
        }
    }
    return out;
}

void weight_blocks_dm(std::span<cplx> rho, unsigned num_qubits, unsigned qubit, double w0,
                      double w1) {
    const Index mask = Index{1} << bit_of(num_qubits, qubit);
    const std::size_t full = std::size_t{1} << num_qubits;
    for (std::size_t i = 0; i < full; ++i) {
        for (std::size_t j = 0; j < full; ++j) {
            const bool bi = i & mask, bj = j & mask;
            cplx &z = rho[i * full + j];
            if (bi != bj) {
                z = 0;
            } else {
                z *= bi ? w1 : w0;
            }
        }
    }
}

namespace reference {

namespace {

inline bool bit(Index i, unsigned num_qubits, unsigned q) { return (i >> bit_of(num_qubits, q)) & 1u; }

// Local index of basis state i restricted to `qubits` (qubits[0] most significant).
std::size_t extract(Index i, unsigned num_qubits, std::span<const unsigned> qubits) {
    std::size_t j = 0;
    for (unsigned q : qubits) {
        j = (j << 1) | static_cast<std::size_t>(bit(i, num_qubits, q));
    }
    return j;
}

// Basis state i with `qubits` overwritten by local index j.
Index deposit(Index i, unsigned num_qubits, std::span<const unsigned> qubits, std::size_t j) {
    const std::size_t k = qubits.size();
    for (std::size_t m = 0; m < k; ++m) {
        const Index mask = Index{1} << bit_of(num_qubits, qubits[m]);
        if ((j >> (k - 1 - m)) & 1u) {
            i |= mask;
        } else {
            i &= ~mask;
        }
    }
    return i;
}

} // namespace

void apply_matrix(std::span<cplx> amps, unsigned num_qubits, std::span<const unsigned> targets,
                  std::span<const cplx> mat) {
    const std::size_t dim = std::size_t{1} << targets.size();
    std::vector<cplx> out(amps.size(), cplx{});
    for (Index i = 0; i < amps.size(); ++i) {
        const std::size_t col = extract(i, num_qubits, targets);
        for (std::size_t row = 0; row < dim; ++row) {
            out[deposit(i, num_qubits, targets, row)] += mat[row * dim + col] * amps[i];
        }
    }
    std::copy(out.begin(), out.end(), amps.begin());
}

void apply_unitary_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                      std::span<const cplx> mat) {
    // Explicit U rho U^dagger with U embedded on the full space.
    const std::size_t full = std::size_t{1} << num_qubits;
    const std::size_t dim = std::size_t{1} << targets.size();
    auto u = [&](Index r, Index c) -> cplx {
        // Identity on the non-target qubits.
        if (deposit(r, num_qubits, targets, 0) != deposit(c, num_qubits, targets, 0)) {
            return 0;
        }
        return mat[extract(r, num_qubits, targets) * dim + extract(c, num_qubits, targets)];
    };
    std::vector<cplx> tmp(full * full, cplx{});
    for (Index i = 0; i < full; ++i) {
        for (Index k = 0; k < full; ++k) {
            const cplx a = u(i, k);
            if (a == cplx{}) {
                continue;
            }
            for (Index j = 0; j < full; ++j) {
                tmp[i * full + j] += a * rho[k * full + j];
            }
        }
    }
    std::fill(rho.begin(), rho.end(), cplx{});
    for (Index i = 0; i < full; ++i) {
        for (Index k = 0; k < full; ++k) {
            for (Index j = 0; j < full; ++j) {
                const cplx b = u(j, k);
                if (b != cplx{}) {
                    rho[i * full + j] += tmp[i * full + k] * std::conj(b);
                }
            }
        }
    }
}

void depolarize_dm(std::span<cplx> rho, unsigned num_qubits, std::span<const unsigned> targets,
                   double p) {
    const std::size_t full = std::size_t{1} << num_qubits;
    const std::size_t dim = std::size_t{1} << targets.size();
    const auto rest = complement(num_qubits, targets);
    const auto sigma = reduced_dm_from_dm(rho, num_qubits, rest);
    const std::size_t drest = std::size_t{1} << rest.size();
    for (Index r = 0; r < full; ++r) {
        for (Index c = 0; c < full; ++c) {
            cplx v = (1 - p) * rho[r * full + c];
            if (extract(r, num_qubits, targets) == extract(c, num_qubits, targets)) {
                v += p / static_cast<double>(dim) *
                     sigma[extract(r, num_qubits, rest) * drest + extract(c, num_qubits, rest)];
            }
            rho[r * full + c] = v;
        }
    }
}

std::vector<cplx> reduced_dm_from_ket(std::span<const cplx> psi, unsigned num_qubits,
                                      std::span<const unsigned> keep) {
    const std::size_t dk = std::size_t{1} << keep.size();
    const auto rest = complement(num_qubits, keep);
    std::vector<cplx> out(dk * dk, cplx{});
    for (Index a = 0; a < psi.size(); ++a) {
        for (Index b = 0; b < psi.size(); ++b) {
            if (extract(a, num_qubits, rest) != extract(b, num_qubits, rest)) {
                continue;
            }
            out[extract(a, num_qubits, keep) * dk + extract(b, num_qubits, keep)] +=
                psi[a] * std::conj(psi[b]);
        }
    }
    return out;
}

std::vector<cplx> reduced_dm_from_dm(std::span<const cplx> rho, unsigned num_qubits,
                                     std::span<const unsigned> keep) {
    const std::size_t full = std::size_t{1} << num_qubits;
    const std::size_t dk = std::size_t{1} << keep.size();
    const auto rest = complement(num_qubits, keep);
    std::vector<cplx> out(dk * dk, cplx{});
    for (Index a = 0; a < full; ++a) {
        for (Index b = 0; b < full; ++b) {
            if (extract(a, num_qubits, rest) != extract(b, num_qubits, rest)) {
                continue;
            }
            out[extract(a, num_qubits, keep) * dk + extract(b, num_qubits, keep)] +=
                rho[a * full + b];
        }
    }
    return out;
}

double prob_one_ket(std::span<const cplx> psi, unsigned num_qubits, unsigned qubit) {
    double p = 0;
    for (Index i = 0; i < psi.size(); ++i) {
        if (bit(i, num_qubits, qubit)) {
            p += std::norm(psi[i]);
        }
    }
    return p;
}

double prob_one_dm(std::span<const cplx> rho, unsigned num_qubits, unsigned qubit) {
    const std::size_t full = std::size_t{1} << num_qubits;
    double p = 0;
    for (Index i = 0; i < full; ++i) {
        if (bit(i, num_qubits, qubit)) {
            p += rho[i * full + i].real();
        }
    }
    return p;
}

} // namespace reference

} // namespace dqcsim::qstate::kernels
