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
 * Sample and statistical-query oracles over a Dist, with exact query counting.
 *
 * A statistical query with tolerance tau answers E_{x~P}[phi(x)] up to an
 * additive error of at most tau. Three answering modes are provided:
 *
 *  - exact:       the true expectation.
 *  - empirical:   a sample mean over ceil(ln(2/delta') / (2 tau^2)) draws, where
 *                 delta' = delta / query_budget (Hoeffding + union bound).
 *  - adversarial: truth +/- tau, the sign fixed by a seeded hash of the query
 *                 index, clamped to [-1, 1].
 *
 * The meaningful regime is tau = 1/poly(n); any tau in (0, 1) is accepted.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "borncraft/dist.hpp"

namespace borncraft {

/// A query phi: {0,1}^n -> [-1, 1]. Character queries phi(z) = (-1)^(a.z)
/// also carry `a`, which allows closed-form answers on structured variants.
struct StatQuery {
    std::function<double(const BitVec &)> fn;
    std::optional<BitVec> character;

    static StatQuery function(std::function<double(const BitVec &)> f) { return {std::move(f), std::nullopt}; }

    static StatQuery character_of(BitVec a) {
        return {[a](const BitVec &z) { return a.dot(z) ? -1.0 : 1.0; }, a};
    }

    /// phi_t(x, y) = (-1)^(y xor t.x) on k + 1 bits.
    static StatQuery parity_correlation(const BitVec &t) {
        BitVec a = t.concat(BitVec(1));
        a.set(t.size(), true);
        return character_of(std::move(a));
    }

    double operator()(const BitVec &z) const { return fn(z); }
};

/// Closed-form E[(-1)^(a.z)] where the variant admits one.
inline std::optional<double> character_expectation(const Dist &d, const BitVec &a) {
    return std::visit(
        overloaded{
            [&](const AffineUniform &u) -> std::optional<double> {
                for (const auto &v : u.space.basis()) {
                    if (a.dot(v)) {
                        return 0.0;
                    }
                }
                return a.dot(u.space.offset()) ? -1.0 : 1.0;
            },
            [&](const NoisyParity &p) -> std::optional<double> {
                const std::size_t k = p.s.size();
                const BitVec ax = a.slice(0, k);
                if (!a.get(k)) {
                    return ax.is_zero() ? 1.0 : 0.0;
                }
                return ax == p.s ? 1.0 - 2.0 * p.eta : 0.0;
            },
            [&](const PointMass &p) -> std::optional<double> { return a.dot(p.x) ? -1.0 : 1.0; },
            [&](const Product &p) -> std::optional<double> {
                double e = 1.0;
                std::size_t off = 0;
                for (const auto &f : p.factors) {
                    const auto part = character_expectation(f, a.slice(off, f.num_bits()));
                    if (!part) {
                        return std::nullopt;
                    }
                    e *= *part;
                    off += f.num_bits();
                }
                return e;
            },
            [](const auto &) -> std::optional<double> { return std::nullopt; },
        },
        d.node().repr);
}

/// Exact E_{x~P}[phi(x)].
inline double expectation(const Dist &d, const StatQuery &q) {
    if (q.character) {
        if (q.character->size() != d.num_bits()) {
            throw DimensionMismatch("expectation: character length != distribution width");
        }
        if (const auto e = character_expectation(d, *q.character)) {
            return *e;
        }
    }
    double s = 0.0;
    for_each_support_point(d, [&](const BitVec &x, double p) { s += p * q(x); });
    return s;
}

/// Boolean-function statistical query E_{x~base}[phi(x, f(x))], evaluated by
/// enumerating the base distribution directly.
inline double boolean_stat_query(const BitVec &truth_table, const Dist &base,
                                 const std::function<double(const BitVec &, bool)> &phi) {
    double s = 0.0;
    for_each_support_point(base, [&](const BitVec &x, double p) { s += p * phi(x, truth_table.get(x.to_index())); });
    return s;
}

class SampleOracle {
  public:
    SampleOracle(Dist d, Rng rng) : dist_(std::move(d)), rng_(rng) {}

    BitVec draw() {
        ++queries_;
        return dist_.sample(rng_);
    }

    std::uint64_t queries() const noexcept { return queries_; }
    std::size_t num_bits() const noexcept { return dist_.num_bits(); }
    const Dist &dist() const noexcept { return dist_; }

  private:
    Dist dist_;
    Rng rng_;
    std::uint64_t queries_ = 0;
};

enum class StatMode { exact, empirical, adversarial };

struct StatOracleConfig {
    double tau = 0.1;
    StatMode mode = StatMode::empirical;
    /// Total failure probability for empirical mode, split over query_budget.
    double delta = 0.01;
    std::uint64_t query_budget = 1000;
    /// Drives empirical sampling and the adversarial sign sequence.
    std::uint64_t seed = 0;
};

class StatOracle {
  public:
    StatOracle(Dist d, StatOracleConfig cfg) : dist_(std::move(d)), cfg_(cfg), rng_(Rng::stream(cfg.seed, {0x5a})) {
        if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) {
            throw std::invalid_argument("StatOracle: tau must lie in (0, 1)");
        }
        if (cfg.mode == StatMode::empirical) {
            if (!(cfg.delta > 0.0 && cfg.delta < 1.0) || cfg.query_budget == 0) {
                throw std::invalid_argument("StatOracle: empirical mode needs delta in (0, 1) and a budget");
            }
            const double delta_q = cfg.delta / static_cast<double>(cfg.query_budget);
            samples_per_query_ = static_cast<std::uint64_t>(
                std::ceil(std::log(2.0 / delta_q) / (2.0 * cfg.tau * cfg.tau)));
        }
    }

    double query(const StatQuery &q) {
        const std::uint64_t index = queries_++;
        switch (cfg_.mode) {
        case StatMode::exact:
            return expectation(dist_, q);
        case StatMode::adversarial: {
            const double truth = expectation(dist_, q);
            const double sign = (mix64(cfg_.seed ^ mix64(index)) & 1) != 0 ? 1.0 : -1.0;
            return std::clamp(truth + sign * cfg_.tau, -1.0, 1.0);
        }
        case StatMode::empirical: {
            double s = 0.0;
            for (std::uint64_t i = 0; i < samples_per_query_; ++i) {
                s += q(dist_.sample(rng_));
            }
            samples_drawn_ += samples_per_query_;
            return s / static_cast<double>(samples_per_query_);
        }
        }
        return 0.0;
    }

    std::uint64_t queries() const noexcept { return queries_; }
    std::uint64_t samples_drawn() const noexcept { return samples_drawn_; }
    std::uint64_t samples_per_query() const noexcept { return samples_per_query_; }
    double tau() const noexcept { return cfg_.tau; }
    const Dist &dist() const noexcept { return dist_; }

  private:
    Dist dist_;
    StatOracleConfig cfg_;
    Rng rng_;
    std::uint64_t queries_ = 0;
    std::uint64_t samples_drawn_ = 0;
    std::uint64_t samples_per_query_ = 0;
};

} // namespace borncraft
