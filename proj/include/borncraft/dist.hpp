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
 * Exactly representable distributions over {0,1}^n.
 *
 * Every variant is both a generator (sample) and an evaluator (eval):
 *
 *  - AffineUniform: uniform over an affine subspace (Clifford outputs).
 *  - NoisyParity:   (x, s.x xor e) with x uniform on k bits and e ~ Bernoulli(eta).
 *  - FunctionDist:  (x, f(x)) with x drawn from a base distribution.
 *  - PointMass:     a single string.
 *  - Product:       concatenation of independent factors.
 *  - Dense:         an explicit probability table (n <= 20).
 *
 * Dist is a cheap-to-copy immutable handle.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "borncraft/affine.hpp"
#include "borncraft/bits.hpp"
#include "borncraft/errors.hpp"
#include "borncraft/rng.hpp"
#include "borncraft/statevector.hpp"

namespace borncraft {

/// Largest bit length evaluated by exhaustive enumeration.
inline constexpr std::size_t kMaxDenseBits = 20;
/// Largest log2 support size enumerated for exact sums over a support.
inline constexpr std::size_t kMaxSupportLog2 = 24;

struct DistNode;

class Dist {
  public:
    static Dist affine_uniform(AffineSubspace a);
    static Dist uniform(std::size_t n) { return affine_uniform(AffineSubspace::full(n)); }
    /// Noisy parity distribution on s.size() + 1 bits.
    static Dist noisy_parity(BitVec s, double eta);
    static Dist parity(BitVec s) { return noisy_parity(std::move(s), 0.0); }
    /// (x, f(x)) with x ~ base; `truth_table` has 2^n bits indexed by x.to_index().
    static Dist function(BitVec truth_table, Dist base);
    static Dist point_mass(BitVec x);
    static Dist product(std::vector<Dist> factors);
    static Dist dense(DenseDist table);

    std::size_t num_bits() const noexcept;
    const DistNode &node() const noexcept { return *node_; }
    bool shares_node(const Dist &other) const noexcept { return node_ == other.node_; }

    double eval(const BitVec &x) const;
    BitVec sample(Rng &rng) const;

  private:
    explicit Dist(std::shared_ptr<const DistNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const DistNode> node_;
};

struct AffineUniform {
    AffineSubspace space;
};

struct NoisyParity {
    BitVec s;
    double eta;
};

struct FunctionDist {
    BitVec table;
    Dist base;
};

struct PointMass {
    BitVec x;
};

struct Product {
    std::vector<Dist> factors;
};

struct Dense {
    DenseDist table;
    std::vector<double> cdf;
};

struct DistNode {
    std::variant<AffineUniform, NoisyParity, FunctionDist, PointMass, Product, Dense> repr;
    std::size_t bits;
};

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

inline Dist Dist::affine_uniform(AffineSubspace a) {
    const std::size_t n = a.ambient_dim();
    return Dist(std::make_shared<const DistNode>(DistNode{AffineUniform{std::move(a)}, n}));
}

inline Dist Dist::noisy_parity(BitVec s, double eta) {
    if (s.empty()) {
        throw std::invalid_argument("noisy_parity: secret must have at least one bit");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("noisy_parity: eta must lie in [0, 1]");
    }
    const std::size_t n = s.size() + 1;
    return Dist(std::make_shared<const DistNode>(DistNode{NoisyParity{std::move(s), eta}, n}));
}

inline Dist Dist::function(BitVec truth_table, Dist base) {
    const std::size_t n = base.num_bits();
    if (n > kMaxDenseBits || truth_table.size() != (std::size_t{1} << n)) {
        throw DimensionMismatch("function: truth table must have 2^n bits for a base over n <= 20 bits");
    }
    return Dist(std::make_shared<const DistNode>(
        DistNode{FunctionDist{std::move(truth_table), std::move(base)}, n + 1}));
}

inline Dist Dist::point_mass(BitVec x) {
    const std::size_t n = x.size();
    return Dist(std::make_shared<const DistNode>(DistNode{PointMass{std::move(x)}, n}));
}

inline Dist Dist::product(std::vector<Dist> factors) {
    std::size_t n = 0;
    for (const auto &f : factors) {
        n += f.num_bits();
    }
    return Dist(std::make_shared<const DistNode>(DistNode{Product{std::move(factors)}, n}));
}

inline Dist Dist::dense(DenseDist table) {
    if (table.n > kMaxDenseBits || table.probs.size() != (std::size_t{1} << table.n)) {
        throw DimensionMismatch("dense: table must have 2^n entries with n <= 20");
    }
    std::vector<double> cdf(table.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < table.probs.size(); ++i) {
        if (!(table.probs[i] >= 0.0)) {
            throw std::invalid_argument("dense: negative probability");
        }
        acc += table.probs[i];
        cdf[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-10) {
        throw std::invalid_argument("dense: probabilities sum to " + std::to_string(acc));
    }
    const std::size_t n = table.n;
    return Dist(std::make_shared<const DistNode>(DistNode{Dense{std::move(table), std::move(cdf)}, n}));
}

inline std::size_t Dist::num_bits() const noexcept { return node_->bits; }

inline double Dist::eval(const BitVec &x) const {
    if (x.size() != num_bits()) {
        throw DimensionMismatch("eval: expected " + std::to_string(num_bits()) + " bits, got " +
                                std::to_string(x.size()));
    }
    return std::visit(
        overloaded{
            [&](const AffineUniform &a) { return a.space.probability(x); },
            [&](const NoisyParity &p) {
                const std::size_t k = p.s.size();
                const bool parity = p.s.dot(x.slice(0, k));
                const double scale = std::ldexp(1.0, -static_cast<int>(k));
                return scale * (x.get(k) == parity ? 1.0 - p.eta : p.eta);
            },
            [&](const FunctionDist &f) {
                const std::size_t n = f.base.num_bits();
                const BitVec head = x.slice(0, n);
                return x.get(n) == f.table.get(head.to_index()) ? f.base.eval(head) : 0.0;
            },
            [&](const PointMass &p) { return x == p.x ? 1.0 : 0.0; },
            [&](const Product &p) {
                double prob = 1.0;
                std::size_t off = 0;
                for (const auto &f : p.factors) {
                    prob *= f.eval(x.slice(off, f.num_bits()));
                    off += f.num_bits();
                    if (prob == 0.0) {
                        break;
                    }
                }
                return prob;
            },
            [&](const Dense &d) { return d.table.probs[x.to_index()]; },
        },
        node_->repr);
}

inline BitVec Dist::sample(Rng &rng) const {
    return std::visit(
        overloaded{
            [&](const AffineUniform &a) { return a.space.sample(rng); },
            [&](const NoisyParity &p) {
                const std::size_t k = p.s.size();
                BitVec x = rng.bits(k).concat(BitVec(1));
                const bool noise = p.eta > 0.0 && rng.bernoulli(p.eta);
                x.set(k, p.s.dot(x.slice(0, k)) ^ noise);
                return x;
            },
            [&](const FunctionDist &f) {
                BitVec head = f.base.sample(rng);
                BitVec y(1);
                y.set(0, f.table.get(head.to_index()));
                return head.concat(y);
            },
            [&](const PointMass &p) { return p.x; },
            [&](const Product &p) {
                BitVec out;
                for (const auto &f : p.factors) {
                    out = out.concat(f.sample(rng));
                }
                return out;
            },
            [&](const Dense &d) {
                const double u = rng.uniform();
                auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
                auto idx = static_cast<std::size_t>(it - d.cdf.begin());
                // Rounding can leave the last cdf entry just below 1.
                if (idx >= d.cdf.size()) {
                    idx = d.cdf.size() - 1;
                    while (idx > 0 && d.table.probs[idx] == 0.0) {
                        --idx;
                    }
                }
                return BitVec::from_index(idx, d.table.n);
            },
        },
        node_->repr);
}

inline double eval(const Dist &d, const BitVec &x) { return d.eval(x); }
inline BitVec sample(const Dist &d, Rng &rng) { return d.sample(rng); }

/// Exact affine representation when the distribution is uniform over an
/// affine subspace (AffineUniform, PointMass, noiseless parity, and products
/// of those).
inline std::optional<AffineSubspace> as_affine(const Dist &d) {
    return std::visit(
        overloaded{
            [](const AffineUniform &a) -> std::optional<AffineSubspace> { return a.space; },
            [](const PointMass &p) -> std::optional<AffineSubspace> { return AffineSubspace::point(p.x); },
            [](const NoisyParity &p) -> std::optional<AffineSubspace> {
                if (p.eta != 0.0 && p.eta != 1.0) {
                    return std::nullopt;
                }
                // Columns (e_i, s_i); offset flips y when eta = 1.
                const std::size_t k = p.s.size();
                std::vector<BitVec> basis;
                for (std::size_t i = 0; i < k; ++i) {
                    BitVec v(k + 1);
                    v.set(i, true);
                    v.set(k, p.s.get(i));
                    basis.push_back(std::move(v));
                }
                BitVec t(k + 1);
                t.set(k, p.eta == 1.0);
                return AffineSubspace(std::move(basis), std::move(t));
            },
            [](const Product &p) -> std::optional<AffineSubspace> {
                std::size_t n = 0;
                for (const auto &f : p.factors) {
                    n += f.num_bits();
                }
                std::vector<BitVec> basis;
                BitVec t;
                std::size_t off = 0;
                for (const auto &f : p.factors) {
                    auto a = as_affine(f);
                    if (!a) {
                        return std::nullopt;
                    }
                    for (const auto &v : a->basis()) {
                        BitVec padded = BitVec(off).concat(v).concat(BitVec(n - off - v.size()));
                        basis.push_back(std::move(padded));
                    }
                    t = t.concat(a->offset());
                    off += f.num_bits();
                }
                return AffineSubspace(std::move(basis), std::move(t));
            },
            [](const auto &) -> std::optional<AffineSubspace> { return std::nullopt; },
        },
        d.node().repr);
}

/// Upper bound on log2 of the support size.
inline std::size_t support_log2_bound(const Dist &d) {
    return std::visit(
        overloaded{
            [](const AffineUniform &a) -> std::size_t { return a.space.dim(); },
            [](const NoisyParity &p) -> std::size_t {
                return p.s.size() + (p.eta == 0.0 || p.eta == 1.0 ? 0 : 1);
            },
            [](const FunctionDist &f) -> std::size_t { return support_log2_bound(f.base); },
            [](const PointMass &) -> std::size_t { return 0; },
            [](const Product &p) -> std::size_t {
                std::size_t s = 0;
                for (const auto &f : p.factors) {
                    s += support_log2_bound(f);
                }
                return s;
            },
            [](const Dense &d) -> std::size_t { return d.table.n; },
        },
        d.node().repr);
}

/// Calls fn(x, P(x)) for every x with P(x) > 0.
inline void for_each_support_point(const Dist &d, const std::function<void(const BitVec &, double)> &fn) {
    if (support_log2_bound(d) > kMaxSupportLog2) {
        throw Infeasible("support too large to enumerate exactly");
    }
    std::visit(
        overloaded{
            [&](const AffineUniform &a) {
                const double p = std::ldexp(1.0, -static_cast<int>(a.space.dim()));
                a.space.for_each_point([&](const BitVec &x) { fn(x, p); });
            },
            [&](const NoisyParity &p) {
                const std::size_t k = p.s.size();
                const double scale = std::ldexp(1.0, -static_cast<int>(k));
                for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) {
                    BitVec x = BitVec::from_index(i, k).concat(BitVec(1));
                    const bool parity = p.s.dot(x.slice(0, k));
                    x.set(k, parity);
                    if (p.eta < 1.0) {
                        fn(x, scale * (1.0 - p.eta));
                    }
                    x.set(k, !parity);
                    if (p.eta > 0.0) {
                        fn(x, scale * p.eta);
                    }
                }
            },
            [&](const FunctionDist &f) {
                for_each_support_point(f.base, [&](const BitVec &x, double px) {
                    BitVec y(1);
                    y.set(0, f.table.get(x.to_index()));
                    fn(x.concat(y), px);
                });
            },
            [&](const PointMass &p) { fn(p.x, 1.0); },
            [&](const Product &p) {
                std::function<void(std::size_t, const BitVec &, double)> rec =
                    [&](std::size_t j, const BitVec &prefix, double prob) {
                        if (j == p.factors.size()) {
                            fn(prefix, prob);
                            return;
                        }
                        for_each_support_point(p.factors[j], [&](const BitVec &x, double px) {
                            rec(j + 1, prefix.concat(x), prob * px);
                        });
                    };
                rec(0, BitVec(), 1.0);
            },
            [&](const Dense &d) {
                for (std::size_t i = 0; i < d.table.probs.size(); ++i) {
                    if (d.table.probs[i] > 0.0) {
                        fn(BitVec::from_index(i, d.table.n), d.table.probs[i]);
                    }
                }
            },
        },
        d.node().repr);
}

/// Exact total variation distance.
///
/// Affine-representable pairs use |A ∩ B| in closed form; otherwise the sum runs
/// over all of {0,1}^n (n <= 20) or over the smaller support.
inline double tv(const Dist &p, const Dist &q) {
    const std::size_t n = p.num_bits();
    if (q.num_bits() != n) {
        throw DimensionMismatch("tv: distributions over different bit lengths");
    }
    if (p.shares_node(q)) {
        return 0.0;
    }
    if (const auto a = as_affine(p)) {
        if (const auto b = as_affine(q)) {
            const auto inter = a->intersection_dim(*b);
            if (!inter) {
                return 1.0;
            }
            const auto hi = static_cast<int>(std::max(a->dim(), b->dim()));
            return 1.0 - std::ldexp(1.0, static_cast<int>(*inter) - hi);
        }
    }
    if (n <= kMaxDenseBits) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
            const BitVec x = BitVec::from_index(i, n);
            s += std::abs(p.eval(x) - q.eval(x));
        }
        return 0.5 * s;
    }
    const Dist &small = support_log2_bound(p) <= support_log2_bound(q) ? p : q;
    const Dist &other = &small == &p ? q : p;
    if (support_log2_bound(small) > kMaxSupportLog2) {
        throw Infeasible("tv: no exact evaluation route for this pair");
    }
    // TV = sum over supp(small) of max(small - other, 0).
    double s = 0.0;
    for_each_support_point(small, [&](const BitVec &x, double px) { s += std::max(px - other.eval(x), 0.0); });
    return s;
}

/// P on k bits -> P ⊗ point mass at 0^(n-k).
inline Dist embed(const Dist &d, std::size_t n) {
    const std::size_t k = d.num_bits();
    if (k > n) {
        throw std::invalid_argument("embed: target width " + std::to_string(n) +
                                    " is smaller than the distribution width " + std::to_string(k));
    }
    if (k == n) {
        return d;
    }
    return Dist::product({d, Dist::point_mass(BitVec(n - k))});
}

/// Marginal on the first k bits.
inline Dist marginalize(const Dist &d, std::size_t k) {
    const std::size_t n = d.num_bits();
    if (k > n) {
        throw std::invalid_argument("marginalize: k exceeds the distribution width");
    }
    if (k == n) {
        return d;
    }
    return std::visit(
        overloaded{
            [&](const AffineUniform &a) {
                // The image of a uniform affine distribution under a linear map
                // is uniform on the image.
                std::vector<BitVec> cols;
                for (const auto &v : a.space.basis()) {
                    cols.push_back(v.slice(0, k));
                }
                std::vector<BitVec> kept;
                for (const auto i : max_independent_subset(cols)) {
                    kept.push_back(cols[i]);
                }
                return Dist::affine_uniform(AffineSubspace(std::move(kept), a.space.offset().slice(0, k)));
            },
            [&](const NoisyParity &) { return Dist::uniform(k); },
            [&](const FunctionDist &f) { return marginalize(f.base, k); },
            [&](const PointMass &p) { return Dist::point_mass(p.x.slice(0, k)); },
            [&](const Product &p) {
                std::vector<Dist> kept;
                std::size_t covered = 0;
                for (const auto &f : p.factors) {
                    if (covered == k) {
                        break;
                    }
                    if (covered + f.num_bits() <= k) {
                        kept.push_back(f);
                        covered += f.num_bits();
                    } else {
                        kept.push_back(marginalize(f, k - covered));
                        covered = k;
                    }
                }
                return kept.size() == 1 ? kept.front() : Dist::product(std::move(kept));
            },
            [&](const Dense &t) {
                DenseDist out{k, std::vector<double>(std::size_t{1} << k, 0.0)};
                const std::size_t mask = (std::size_t{1} << k) - 1;
                for (std::size_t i = 0; i < t.table.probs.size(); ++i) {
                    out.probs[i & mask] += t.table.probs[i];
                }
                return Dist::dense(std::move(out));
            },
        },
        d.node().repr);
}

// --- JSON (schema "dist_v1") -----------------------------------------------

namespace detail {

inline nlohmann::json dist_body(const Dist &d) {
    using nlohmann::json;
    return std::visit(
        overloaded{
            [](const AffineUniform &a) {
                const BitMatrix r = a.space.matrix();
                json rows = json::array();
                for (std::size_t i = 0; i < r.rows(); ++i) {
                    rows.push_back(r.row(i).to_hex());
                }
                return json{{"type", "affine_uniform"},
                            {"n", a.space.ambient_dim()},
                            {"m", a.space.dim()},
                            {"R", rows},
                            {"t", a.space.offset().to_hex()}};
            },
            [](const NoisyParity &p) {
                return json{{"type", "noisy_parity"}, {"k", p.s.size()}, {"s", p.s.to_hex()}, {"eta", p.eta}};
            },
            [](const FunctionDist &f) {
                return json{{"type", "function"},
                            {"n", f.base.num_bits()},
                            {"f", f.table.to_hex()},
                            {"base", dist_body(f.base)}};
            },
            [](const PointMass &p) {
                return json{{"type", "point_mass"}, {"n", p.x.size()}, {"x", p.x.to_hex()}};
            },
            [](const Product &p) {
                json factors = json::array();
                for (const auto &f : p.factors) {
                    factors.push_back(dist_body(f));
                }
                return json{{"type", "product"}, {"factors", factors}};
            },
            [](const Dense &d) { return json{{"type", "dense"}, {"n", d.table.n}, {"p", d.table.probs}}; },
        },
        d.node().repr);
}

inline Dist dist_from_body(const nlohmann::json &j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "affine_uniform") {
            const auto n = j.at("n").get<std::size_t>();
            const auto m = j.at("m").get<std::size_t>();
            const auto &rows = j.at("R");
            if (rows.size() != n) {
                throw ParseError("affine_uniform: R must have n rows");
            }
            std::vector<BitVec> rv;
            for (const auto &r : rows) {
                rv.push_back(BitVec::from_hex(r.get<std::string>(), m));
            }
            const BitMatrix r = BitMatrix::from_rows(std::move(rv), m);
            return Dist::affine_uniform(AffineSubspace(r, BitVec::from_hex(j.at("t").get<std::string>(), n)));
        }
        if (type == "noisy_parity") {
            const auto k = j.at("k").get<std::size_t>();
            return Dist::noisy_parity(BitVec::from_hex(j.at("s").get<std::string>(), k), j.at("eta").get<double>());
        }
        if (type == "function") {
            const auto n = j.at("n").get<std::size_t>();
            if (n > kMaxDenseBits) {
                throw ParseError("function: n exceeds 20");
            }
            Dist base = dist_from_body(j.at("base"));
            return Dist::function(BitVec::from_hex(j.at("f").get<std::string>(), std::size_t{1} << n),
                                  std::move(base));
        }
        if (type == "point_mass") {
            const auto n = j.at("n").get<std::size_t>();
            return Dist::point_mass(BitVec::from_hex(j.at("x").get<std::string>(), n));
        }
        if (type == "product") {
            std::vector<Dist> factors;
            for (const auto &f : j.at("factors")) {
                factors.push_back(dist_from_body(f));
            }
            return Dist::product(std::move(factors));
        }
        if (type == "dense") {
            return Dist::dense(DenseDist{j.at("n").get<std::size_t>(), j.at("p").get<std::vector<double>>()});
        }
        throw ParseError("unknown distribution type '" + type + "'");
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed dist_v1 document: ") + e.what());
    }
}

} // namespace detail

inline nlohmann::json to_json(const Dist &d) {
    nlohmann::json j = detail::dist_body(d);
    j["schema"] = "dist_v1";
    return j;
}

inline Dist dist_from_json(const nlohmann::json &j) {
    if (!j.contains("schema") || j.at("schema") != "dist_v1") {
        throw ParseError("expected a document with schema \"dist_v1\"");
    }
    return detail::dist_from_body(j);
}

/// Structural equality (same variant tree and parameters).
inline bool same_structure(const Dist &a, const Dist &b) { return to_json(a) == to_json(b); }

} // namespace borncraft
