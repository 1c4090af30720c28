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
 * Gaussian elimination over F2: rank, greedy independent subsets, span
 * membership, and solving linear systems.
 *
 * Pivoting is deterministic everywhere: vectors are consumed in input order and
 * each pivot is the lowest set column of the reduced vector.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "borncraft/bits.hpp"

namespace borncraft {

/// Incrementally built basis in echelon form. Each stored vector is reduced
/// against all earlier ones, so a single forward pass fully reduces a query.
class EchelonBasis {
  public:
    explicit EchelonBasis(std::size_t len) : len_(len) {}

    std::size_t dim() const noexcept { return basis_.size(); }
    std::size_t length() const noexcept { return len_; }

    BitVec reduce(BitVec v) const {
        if (v.size() != len_) {
            throw DimensionMismatch("EchelonBasis: vector length mismatch");
        }
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            if (v.get(pivots_[j])) {
                v ^= basis_[j];
            }
        }
        return v;
    }

    bool contains(const BitVec &v) const { return reduce(v).is_zero(); }

    /// Adds v if it is independent of the current basis; returns whether it was added.
    bool insert(const BitVec &v) {
        BitVec r = reduce(v);
        if (r.is_zero()) {
            return false;
        }
        pivots_.push_back(r.lowest_set());
        basis_.push_back(std::move(r));
        return true;
    }

  private:
    std::size_t len_;
    std::vector<BitVec> basis_;
    std::vector<std::size_t> pivots_;
};

/// Dimension of the row space.
inline std::size_t rank(const BitMatrix &m) {
    EchelonBasis basis(m.cols());
    for (const auto &row : m.row_list()) {
        basis.insert(row);
        if (basis.dim() == m.cols()) {
            break;
        }
    }
    return basis.dim();
}

/// Indices of a maximal linearly independent subset, chosen greedily in input
/// order. The selected vectors span the same space as `vs`.
inline std::vector<std::size_t> max_independent_subset(std::span<const BitVec> vs) {
    std::vector<std::size_t> picked;
    if (vs.empty()) {
        return picked;
    }
    EchelonBasis basis(vs.front().size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i].size() != basis.length()) {
            throw DimensionMismatch("max_independent_subset: vectors differ in length");
        }
        if (basis.dim() < basis.length() && basis.insert(vs[i])) {
            picked.push_back(i);
        }
    }
    return picked;
}

/// True iff x = R b + t for some b, where the columns of R are the basis vectors.
inline bool in_affine_span(const BitMatrix &r, const BitVec &t, const BitVec &x) {
    if (t.size() != r.rows() || x.size() != r.rows()) {
        throw DimensionMismatch("in_affine_span: R has " + std::to_string(r.rows()) +
                                " rows but t/x have lengths " + std::to_string(t.size()) + "/" +
                                std::to_string(x.size()));
    }
    EchelonBasis basis(r.rows());
    for (std::size_t c = 0; c < r.cols(); ++c) {
        basis.insert(r.column(c));
    }
    return basis.contains(x ^ t);
}

/// Solution set {particular + span(kernel)} of a linear system.
struct LinearSolution {
    BitVec particular;
    std::vector<BitVec> kernel;
};

/// Solves A x = rhs with A given by its rows (each of length `vars`).
/// Returns nullopt when the system is inconsistent. Free variables are set to
/// zero in the particular solution; the kernel basis has one vector per free
/// variable in increasing column order.
inline std::optional<LinearSolution> solve_linear_system(std::span<const BitVec> rows,
                                                         const BitVec &rhs, std::size_t vars) {
    if (rhs.size() != rows.size()) {
        throw DimensionMismatch("solve_linear_system: rhs length != number of equations");
    }
    std::vector<BitVec> a(rows.begin(), rows.end());
    BitVec b = rhs;
    for (const auto &row : a) {
        if (row.size() != vars) {
            throw DimensionMismatch("solve_linear_system: equation has wrong length");
        }
    }

    std::vector<std::size_t> pivot_col;
    std::size_t next = 0;
    for (std::size_t c = 0; c < vars && next < a.size(); ++c) {
        std::size_t p = next;
        while (p < a.size() && !a[p].get(c)) {
            ++p;
        }
        if (p == a.size()) {
            continue;
        }
        std::swap(a[p], a[next]);
        {
            const bool tmp = b.get(p);
            b.set(p, b.get(next));
            b.set(next, tmp);
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r != next && a[r].get(c)) {
                a[r] ^= a[next];
                b.set(r, b.get(r) ^ b.get(next));
            }
        }
        pivot_col.push_back(c);
        ++next;
    }
    for (std::size_t r = next; r < a.size(); ++r) {
        if (b.get(r)) {
            return std::nullopt;
        }
    }

    LinearSolution sol{BitVec(vars), {}};
    std::vector<bool> is_pivot(vars, false);
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
        is_pivot[pivot_col[r]] = true;
        sol.particular.set(pivot_col[r], b.get(r));
    }
    for (std::size_t f = 0; f < vars; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        BitVec k(vars);
        k.set(f, true);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            if (a[r].get(f)) {
                k.set(pivot_col[r], true);
            }
        }
        sol.kernel.push_back(std::move(k));
    }
    return sol;
}

} // namespace borncraft
