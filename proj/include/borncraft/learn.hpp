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
 * Learners: affine-subspace recovery from samples (the closure learner), a
 * correlation-query baseline for parities, and an exhaustive LPN decoder used
 * to validate noisy-parity sample sources.
 */

#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "borncraft/affine.hpp"
#include "borncraft/dist.hpp"
#include "borncraft/f2linalg.hpp"
#include "borncraft/oracle.hpp"

namespace borncraft {

struct LearnedAffine {
    BitMatrix r;
    BitVec t;
    std::size_t m = 0;
    std::size_t samples_used = 0;

    AffineSubspace subspace() const { return AffineSubspace(r, t); }
    /// Generator and evaluator of the learned distribution.
    Dist to_dist() const { return Dist::affine_uniform(subspace()); }
};

struct LearnReport {
    bool success = false;
    double tv_to_truth = 1.0;
    std::uint64_t queries = 0;
    double wall_time_s = 0.0;
};

/// Anything that hands out bit strings of a fixed width: SampleOracle,
/// StabilizerSampler, or a test double.
template <class Source>
concept SampleSource = requires(Source &s) {
    { s.draw() } -> std::convertible_to<BitVec>;
    { s.num_bits() } -> std::convertible_to<std::size_t>;
};

/// n + ceil(log2(1/delta)).
inline std::size_t closure_sample_count(std::size_t n, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("closure_learn: delta must lie in (0, 1)");
    }
    return n + static_cast<std::size_t>(std::ceil(std::log2(1.0 / delta)));
}

/// Learns the affine subspace A from samples of the uniform distribution on A.
///
/// Draws k samples x_1..x_k, shifts them to y_i = x_i + x_1, keeps a maximal
/// independent subset of the y_i as the columns of R, and returns (R, x_1).
/// The result parametrizes A exactly iff the shifted samples span A - x_1.
template <SampleSource Source>
LearnedAffine closure_learn_k(Source &oracle, std::size_t n, std::size_t k) {
    if (n == 0) {
        throw std::invalid_argument("closure_learn: n must be positive");
    }
    if (oracle.num_bits() != n) {
        throw DimensionMismatch("closure_learn: oracle emits strings of a different length");
    }
    if (k == 0) {
        throw std::invalid_argument("closure_learn: at least one sample is required");
    }
    std::vector<BitVec> ys;
    ys.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        ys.push_back(oracle.draw());
    }
    const BitVec x1 = ys.front();
    for (auto &y : ys) {
        y ^= x1;
    }
    std::vector<BitVec> cols;
    for (const auto i : max_independent_subset(ys)) {
        cols.push_back(ys[i]);
    }
    LearnedAffine out;
    out.m = cols.size();
    out.r = BitMatrix::from_columns(cols, n);
    out.t = x1;
    out.samples_used = k;
    return out;
}

template <SampleSource Source>
LearnedAffine closure_learn(Source &oracle, std::size_t n, double delta) {
    return closure_learn_k(oracle, n, closure_sample_count(n, delta));
}

/// Queries phi_t(x, y) = (-1)^(y xor t.x) for candidates t in a seeded random
/// order and returns the first t whose answer exceeds 1/2. The oracle must
/// wrap a distribution over k + 1 bits. Returns nullopt once `budget` queries
/// are spent without a hit.
inline std::optional<BitVec> sq_correlation_learner(StatOracle &oracle, std::size_t k, std::uint64_t budget,
                                                    Rng &order_rng) {
    if (k == 0 || k >= 63) {
        throw std::invalid_argument("sq_correlation_learner: k must lie in [1, 62]");
    }
    if (oracle.dist().num_bits() != k + 1) {
        throw DimensionMismatch("sq_correlation_learner: oracle must be over k + 1 bits");
    }
    const std::uint64_t space = std::uint64_t{1} << k;
    // Lazy Fisher-Yates: only displaced slots are stored.
    std::unordered_map<std::uint64_t, std::uint64_t> displaced;
    auto slot = [&](std::uint64_t i) {
        const auto it = displaced.find(i);
        return it == displaced.end() ? i : it->second;
    };
    for (std::uint64_t i = 0; i < budget && i < space; ++i) {
        const std::uint64_t j = i + order_rng.below(space - i);
        const std::uint64_t candidate = slot(j);
        displaced[j] = slot(i);
        const BitVec t = BitVec::from_index(candidate, k);
        if (oracle.query(StatQuery::parity_correlation(t)) > 0.5) {
            return t;
        }
    }
    return std::nullopt;
}

struct LabeledSample {
    BitVec x;
    bool y;
};

inline constexpr std::size_t kMaxLpnBruteForceBits = 20;

/// argmax_t |{i : y_i = t.x_i}| over all t in {0,1}^k, ties broken by
/// lexicographic order of t. Agreement counts for every t come from one
/// Walsh-Hadamard transform of the signed sample histogram.
inline BitVec lpn_brute_force(std::span<const LabeledSample> samples, std::size_t k) {
    if (k > kMaxLpnBruteForceBits) {
        throw Infeasible("lpn_brute_force: k must be at most 20");
    }
    const std::size_t size = std::size_t{1} << k;
    std::vector<std::int64_t> w(size, 0);
    for (const auto &s : samples) {
        if (s.x.size() != k) {
            throw DimensionMismatch("lpn_brute_force: sample has wrong length");
        }
        w[s.x.to_index()] += s.y ? -1 : 1;
    }
    for (std::size_t len = 1; len < size; len <<= 1) {
        for (std::size_t i = 0; i < size; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const auto a = w[j], b = w[j + len];
                w[j] = a + b;
                w[j + len] = a - b;
            }
        }
    }
    // w[t] = agreements - disagreements. Lexicographic order on bit strings
    // compares bit 0 first, i.e. the bit-reversed index.
    auto lex_key = [k](std::size_t t) {
        std::size_t r = 0;
        for (std::size_t i = 0; i < k; ++i) {
            r = (r << 1) | ((t >> i) & 1);
        }
        return r;
    };
    std::size_t best = 0;
    for (std::size_t t = 1; t < size; ++t) {
        if (w[t] > w[best] || (w[t] == w[best] && lex_key(t) < lex_key(best))) {
            best = t;
        }
    }
    return BitVec::from_index(best, k);
}

} // namespace borncraft
