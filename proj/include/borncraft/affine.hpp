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

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "borncraft/bits.hpp"
#include "borncraft/f2linalg.hpp"
#include "borncraft/rng.hpp"

namespace borncraft {

/// A = { R b + t : b in F2^m } with linearly independent columns of R.
class AffineSubspace {
  public:
    /// Throws std::invalid_argument if the basis vectors are dependent.
    AffineSubspace(std::vector<BitVec> basis, BitVec offset)
        : basis_(std::move(basis)), offset_(std::move(offset)), echelon_(offset_.size()) {
        for (const auto &v : basis_) {
            if (v.size() != offset_.size()) {
                throw DimensionMismatch("AffineSubspace: basis vector length != offset length");
            }
            if (!echelon_.insert(v)) {
                throw std::invalid_argument("AffineSubspace: basis vectors are linearly dependent");
            }
        }
    }

    /// From an n x m matrix whose columns are the basis.
    AffineSubspace(const BitMatrix &r, BitVec offset) : AffineSubspace(r.columns(), std::move(offset)) {
        if (r.rows() != offset_.size()) {
            throw DimensionMismatch("AffineSubspace: R rows != offset length");
        }
    }

    static AffineSubspace point(BitVec t) { return AffineSubspace(std::vector<BitVec>{}, std::move(t)); }

    static AffineSubspace full(std::size_t n) {
        std::vector<BitVec> basis;
        for (std::size_t i = 0; i < n; ++i) {
            BitVec e(n);
            e.set(i, true);
            basis.push_back(std::move(e));
        }
        return AffineSubspace(std::move(basis), BitVec(n));
    }

    std::size_t ambient_dim() const noexcept { return offset_.size(); }
    std::size_t dim() const noexcept { return basis_.size(); }
    const BitVec &offset() const noexcept { return offset_; }
    const std::vector<BitVec> &basis() const noexcept { return basis_; }

    /// The n x m matrix R.
    BitMatrix matrix() const { return BitMatrix::from_columns(basis_, offset_.size()); }

    bool contains(const BitVec &x) const {
        if (x.size() != offset_.size()) {
            throw DimensionMismatch("AffineSubspace::contains: length mismatch");
        }
        return echelon_.contains(x ^ offset_);
    }

    bool linear_contains(const BitVec &v) const { return echelon_.contains(v); }

    /// 2^-m on A, 0 elsewhere.
    double probability(const BitVec &x) const {
        return contains(x) ? std::ldexp(1.0, -static_cast<int>(dim())) : 0.0;
    }

    /// R b + t.
    BitVec point_at(const BitVec &b) const {
        BitVec x = offset_;
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            if (b.get(j)) {
                x ^= basis_[j];
            }
        }
        return x;
    }

    BitVec sample(Rng &rng) const { return point_at(rng.bits(dim())); }

    /// Visits every point of A in Gray-code order. Requires dim() < 64.
    template <class Fn> void for_each_point(Fn &&fn) const {
        if (dim() >= 63) {
            throw Infeasible("AffineSubspace::for_each_point: dimension too large");
        }
        BitVec x = offset_;
        fn(static_cast<const BitVec &>(x));
        const std::uint64_t count = std::uint64_t{1} << dim();
        for (std::uint64_t i = 1; i < count; ++i) {
            x ^= basis_[static_cast<std::size_t>(std::countr_zero(i))];
            fn(static_cast<const BitVec &>(x));
        }
    }

    /// Dimension of A ∩ B, or nullopt when they are disjoint.
    std::optional<std::size_t> intersection_dim(const AffineSubspace &other) const {
        if (other.ambient_dim() != ambient_dim()) {
            throw DimensionMismatch("intersection_dim: ambient dimensions differ");
        }
        // R_a b + R_b c = t_a + t_b; the solution space has dimension
        // dim(L_a ∩ L_b) because each basis is independent.
        const std::size_t vars = dim() + other.dim();
        std::vector<BitVec> rows(ambient_dim(), BitVec(vars));
        for (std::size_t j = 0; j < dim(); ++j) {
            for (std::size_t i = 0; i < ambient_dim(); ++i) {
                rows[i].set(j, basis_[j].get(i));
            }
        }
        for (std::size_t j = 0; j < other.dim(); ++j) {
            for (std::size_t i = 0; i < ambient_dim(); ++i) {
                rows[i].set(dim() + j, other.basis_[j].get(i));
            }
        }
        const auto sol = solve_linear_system(rows, offset_ ^ other.offset_, vars);
        if (!sol) {
            return std::nullopt;
        }
        return sol->kernel.size();
    }

    /// Set equality.
    bool same_set(const AffineSubspace &other) const {
        if (other.ambient_dim() != ambient_dim() || other.dim() != dim() || !contains(other.offset_)) {
            return false;
        }
        for (const auto &v : other.basis_) {
            if (!echelon_.contains(v)) {
                return false;
            }
        }
        return true;
    }

  private:
    std::vector<BitVec> basis_;
    BitVec offset_;
    EchelonBasis echelon_;
};

} // namespace borncraft
