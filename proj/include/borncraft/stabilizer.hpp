// Copyright 2026 The borncraft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Stabilizer tableau simulation (destabilizer/stabilizer form) and exact
 * extraction of the computational-basis output distribution as the uniform
 * distribution over an affine subspace.
 */

#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "borncraft/affine.hpp"
#include "borncraft/circuit.hpp"
#include "borncraft/f2linalg.hpp"

namespace borncraft {

/// Hermitian Pauli operator (-1)^sign X^x Z^z.
struct PauliRow {
    BitVec x;
    BitVec z;
    bool sign = false;

    explicit PauliRow(std::size_t n = 0) : x(n), z(n) {}

    bool commutes_with(const PauliRow &o) const { return x.dot(o.z) == z.dot(o.x); }

    /// this <- other * this, keeping track of the sign. Both operands must
    /// commute, so the product is again Hermitian.
    void left_multiply(const PauliRow &other) {
        // Exponent of i accumulated by multiplying single-qubit Paulis.
        int e = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const int x1 = other.x.get(j), z1 = other.z.get(j);
            const int x2 = x.get(j), z2 = z.get(j);
            if (x1 && z1) {
                e += z2 - x2;
            } else if (x1) {
                e += z2 * (2 * x2 - 1);
            } else if (z1) {
                e += x2 * (1 - 2 * z2);
            }
        }
        e += 2 * (sign ? 1 : 0) + 2 * (other.sign ? 1 : 0);
        e = ((e % 4) + 4) % 4;
        assert(e == 0 || e == 2);
        sign = e == 2;
        x ^= other.x;
        z ^= other.z;
    }
};

class StabTableau {
  public:
    /// Tableau of |0^n>: destabilizers X_i, stabilizers Z_i.
    explicit StabTableau(std::size_t n) : n_(n), rows_(2 * n, PauliRow(n)) {
        for (std::size_t i = 0; i < n; ++i) {
            rows_[i].x.set(i, true);
            rows_[n + i].z.set(i, true);
        }
    }

    std::size_t num_qubits() const noexcept { return n_; }
    const PauliRow &destabilizer(std::size_t i) const noexcept { return rows_[i]; }
    const PauliRow &stabilizer(std::size_t i) const noexcept { return rows_[n_ + i]; }

    void h(std::size_t a) {
        for (auto &r : rows_) {
            const bool xa = r.x.get(a), za = r.z.get(a);
            r.sign ^= xa && za;
            r.x.set(a, za);
            r.z.set(a, xa);
        }
    }

    void s(std::size_t a) {
        for (auto &r : rows_) {
            const bool xa = r.x.get(a), za = r.z.get(a);
            r.sign ^= xa && za;
            r.z.set(a, za ^ xa);
        }
    }

    void cnot(std::size_t c, std::size_t t) {
        for (auto &r : rows_) {
            const bool xc = r.x.get(c), zc = r.z.get(c);
            const bool xt = r.x.get(t), zt = r.z.get(t);
            r.sign ^= xc && zt && !(xt ^ zc);
            r.x.set(t, xt ^ xc);
            r.z.set(c, zc ^ zt);
        }
    }

    void swap(std::size_t a, std::size_t b) {
        for (auto &r : rows_) {
            const bool xa = r.x.get(a), za = r.z.get(a);
            r.x.set(a, r.x.get(b));
            r.z.set(a, r.z.get(b));
            r.x.set(b, xa);
            r.z.set(b, za);
        }
    }

    void apply(const Gate &g) {
        switch (g.kind) {
        case GateKind::H: h(g.q0); break;
        case GateKind::S: s(g.q0); break;
        case GateKind::CNOT: cnot(g.q0, g.q1); break;
        case GateKind::SWAP: swap(g.q0, g.q1); break;
        case GateKind::T: throw NonCliffordGate("non-Clifford gate T cannot be applied to a tableau");
        }
#ifndef NDEBUG
        assert(is_valid());
#endif
    }

    /// Symplectic structure: stabilizers commute pairwise, destabilizers commute
    /// pairwise, and destabilizer i anticommutes exactly with stabilizer i.
    bool is_valid() const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (!rows_[n_ + i].commutes_with(rows_[n_ + j]) ||
                    !rows_[i].commutes_with(rows_[j]) ||
                    rows_[i].commutes_with(rows_[n_ + j]) == (i == j)) {
                    return false;
                }
            }
        }
        return true;
    }

  private:
    std::size_t n_;
    std::vector<PauliRow> rows_;
};

/// Runs a Clifford circuit on |0^n>. Throws NonCliffordGate if `c` contains T.
inline StabTableau simulate_clifford(const Circuit &c) {
    if (!c.is_clifford()) {
        throw NonCliffordGate("simulate_clifford: circuit contains a non-Clifford gate (T)");
    }
    StabTableau tab(c.num_qubits());
    for (const auto &layer : c.layers()) {
        for (const auto &g : layer) {
            tab.apply(g);
        }
    }
    return tab;
}

/// Support of the stabilized state in the computational basis.
///
/// Stabilizer generators are row-reduced on their X parts. Generators left
/// with no X part read (-1)^r Z^z and force z . x = r on every outcome x; the
/// outcome distribution is uniform over the solutions of these constraints.
inline AffineSubspace support(const StabTableau &tab) {
    const std::size_t n = tab.num_qubits();
    std::vector<PauliRow> gens;
    gens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        gens.push_back(tab.stabilizer(i));
    }
    std::size_t next = 0;
    for (std::size_t col = 0; col < n && next < n; ++col) {
        std::size_t p = next;
        while (p < n && !gens[p].x.get(col)) {
            ++p;
        }
        if (p == n) {
            continue;
        }
        std::swap(gens[p], gens[next]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != next && gens[r].x.get(col)) {
                gens[r].left_multiply(gens[next]);
            }
        }
        ++next;
    }

    std::vector<BitVec> constraints;
    BitVec rhs(n - next);
    for (std::size_t r = next; r < n; ++r) {
        constraints.push_back(gens[r].z);
        rhs.set(r - next, gens[r].sign);
    }
    auto sol = solve_linear_system(constraints, rhs, n);
    // A valid stabilizer state always satisfies its own Z constraints.
    assert(sol.has_value());
    return AffineSubspace(std::move(sol->kernel), std::move(sol->particular));
}

inline BitVec sample(const StabTableau &tab, Rng &rng) { return support(tab).sample(rng); }

/// Measurement-sample source for a stabilizer state. The support is extracted
/// once; each draw costs one affine map.
class StabilizerSampler {
  public:
    StabilizerSampler(const StabTableau &tab, Rng rng) : support_(support(tab)), rng_(rng) {}

    BitVec draw() {
        ++queries_;
        return support_.sample(rng_);
    }

    std::size_t num_bits() const noexcept { return support_.ambient_dim(); }
    std::uint64_t queries() const noexcept { return queries_; }
    const AffineSubspace &support_space() const noexcept { return support_; }

  private:
    AffineSubspace support_;
    Rng rng_;
    std::uint64_t queries_ = 0;
};

} // namespace borncraft
