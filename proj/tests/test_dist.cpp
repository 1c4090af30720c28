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

#include <gtest/gtest.h>

#include <boost/rational.hpp>

#include "borncraft/dist.hpp"
#include "borncraft/stabilizer.hpp"
#include "dist_helpers.hpp"
#include "oracles.hpp"

using namespace borncraft;
using oracle::kEtaT;

namespace {

double table_tv(const std::vector<double> &p, const std::vector<double> &q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += std::abs(p[i] - q[i]);
    }
    return 0.5 * s;
}

} // namespace

TEST(Eval, AffineUniform) {
    Rng rng(1);
    const auto a = oracle::random_affine(6, 3, rng);
    const Dist d = Dist::affine_uniform(a);
    const auto members = oracle::enumerate_affine(a.basis(), a.offset());
    for (std::uint64_t i = 0; i < 64; ++i) {
        const BitVec x = BitVec::from_index(i, 6);
        EXPECT_EQ(d.eval(x), members.count(x.to_string()) ? 0.125 : 0.0);
    }
}

TEST(Eval, NoisyParity) {
    const BitVec s = BitVec::from_string("0110");
    const Dist d = Dist::noisy_parity(s, kEtaT);
    for (std::uint64_t i = 0; i < 16; ++i) {
        BitVec z = BitVec::from_index(i, 4).concat(BitVec(1));
        const bool parity = s.dot(BitVec::from_index(i, 4));
        z.set(4, parity);
        EXPECT_DOUBLE_EQ(d.eval(z), (1.0 - kEtaT) / 16.0);
        z.set(4, !parity);
        EXPECT_DOUBLE_EQ(d.eval(z), kEtaT / 16.0);
    }
}

TEST(Eval, NoiselessParityEqualsFunctionDist) {
    const BitVec s = BitVec::from_string("10011");
    BitVec table(32);
    for (std::uint64_t i = 0; i < 32; ++i) {
        table.set(i, s.dot(BitVec::from_index(i, 5)));
    }
    const Dist parity = Dist::parity(s);
    const Dist fn = Dist::function(table, Dist::uniform(5));
    for (std::uint64_t i = 0; i < 64; ++i) {
        const BitVec z = BitVec::from_index(i, 6);
        EXPECT_EQ(parity.eval(z), fn.eval(z));
    }
    EXPECT_EQ(parity.eval(BitVec::from_string("000000")), 1.0 / 32.0);
}

TEST(Eval, LengthMismatchThrows) {
    EXPECT_THROW(Dist::uniform(3).eval(BitVec(4)), DimensionMismatch);
    EXPECT_THROW(Dist::parity(BitVec(2)).eval(BitVec(2)), DimensionMismatch);
}

TEST(Eval, StructuredVariantsAreNormalized) {
    Rng rng(2);
    for (int i = 0; i < 300; ++i) {
        const Dist d = oracle::random_structured(10, rng);
        double s = 0.0;
        for (double p : oracle::eval_table(d)) {
            ASSERT_GE(p, 0.0);
            s += p;
        }
        EXPECT_NEAR(s, 1.0, 1e-12) << to_json(d).dump();
    }
}

TEST(Eval, DyadicVariantsSumToExactlyOne) {
    Rng rng(3);
    const Dist variants[] = {
        Dist::affine_uniform(oracle::random_affine(9, 4, rng)),
        Dist::parity(rng.bits(7)),
        Dist::function(rng.bits(64), Dist::uniform(6)),
        Dist::point_mass(rng.bits(5)),
        Dist::product({Dist::parity(rng.bits(3)), Dist::uniform(2), Dist::point_mass(rng.bits(2))}),
    };
    for (const auto &d : variants) {
        double s = 0.0;
        for (double p : oracle::eval_table(d)) {
            s += p;
        }
        EXPECT_EQ(s, 1.0);
    }
}

TEST(Sample, PointMassIsConstant) {
    const BitVec t = BitVec::from_string("10110");
    const Dist d = Dist::point_mass(t);
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(d.sample(rng), t);
    }
}

TEST(Sample, NoisyParityFlipRate) {
    const Dist d = Dist::noisy_parity(BitVec::from_string("1"), kEtaT);
    Rng rng(5);
    constexpr int kDraws = 1000000;
    int flips = 0;
    for (int i = 0; i < kDraws; ++i) {
        const BitVec z = d.sample(rng);
        flips += z.get(1) != z.get(0) ? 1 : 0;
    }
    const double rate = static_cast<double>(flips) / kDraws;
    const double sigma = std::sqrt(kEtaT * (1 - kEtaT) / kDraws);
    EXPECT_NEAR(kEtaT, 0.14645, 1e-5);
    EXPECT_LE(std::abs(rate - kEtaT), 3 * sigma) << rate;
}

TEST(Sample, AffineDimThreeUniform) {
    Rng rng(6);
    const auto a = oracle::random_affine(7, 3, rng);
    const Dist d = Dist::affine_uniform(a);
    std::map<std::string, double> counts;
    for (const auto &s : oracle::enumerate_affine(a.basis(), a.offset())) {
        counts[s] = 0;
    }
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
        const auto it = counts.find(d.sample(rng).to_string());
        ASSERT_NE(it, counts.end());
        it->second += 1;
    }
    ASSERT_EQ(counts.size(), 8u);
    double chi = 0.0;
    for (const auto &[_, c] : counts) {
        chi += (c - kDraws / 8.0) * (c - kDraws / 8.0) / (kDraws / 8.0);
    }
    EXPECT_GT(oracle::chi_square_upper_tail(chi, 7), 1e-3) << chi;
}

TEST(Sample, GeneratorMatchesEvaluator) {
    Rng rng(7);
    const Dist variants[] = {
        Dist::affine_uniform(oracle::random_affine(6, 4, rng)),
        Dist::noisy_parity(BitVec::from_string("1011"), kEtaT),
        Dist::function(rng.bits(16), Dist::affine_uniform(oracle::random_affine(4, 3, rng))),
        Dist::point_mass(rng.bits(6)),
        Dist::product({Dist::noisy_parity(BitVec::from_string("11"), 0.25), Dist::uniform(2)}),
        Dist::dense(DenseDist{3, {0.1, 0.2, 0.0, 0.05, 0.3, 0.15, 0.1, 0.1}}),
    };
    constexpr int kDraws = 1000000;
    for (const auto &d : variants) {
        std::vector<double> counts(std::size_t{1} << d.num_bits(), 0.0);
        for (int i = 0; i < kDraws; ++i) {
            counts[d.sample(rng).to_index()] += 1;
        }
        const auto table = oracle::eval_table(d);
        for (std::size_t x = 0; x < table.size(); ++x) {
            const double sigma = std::sqrt(table[x] * (1 - table[x]) / kDraws);
            EXPECT_LE(std::abs(counts[x] / kDraws - table[x]), 4 * sigma + 1e-12)
                << to_json(d).dump() << " at " << x;
        }
    }
}

TEST(Tv, Examples) {
    Rng rng(8);
    const Dist p = oracle::random_structured(8, rng);
    EXPECT_EQ(tv(p, p), 0.0);
    EXPECT_EQ(tv(Dist::point_mass(BitVec::from_string("01")), Dist::point_mass(BitVec::from_string("10"))), 1.0);
    EXPECT_THROW(tv(Dist::uniform(3), Dist::uniform(4)), DimensionMismatch);
}

TEST(Tv, DistinctParitiesAreHalfApart) {
    // Rational oracle: P_s puts 1/2^k on the graph of s.x.
    using Q = boost::rational<long long>;
    constexpr std::size_t k = 5;
    for (std::uint64_t s = 0; s < 32; ++s) {
        for (std::uint64_t t = 0; t < 32; ++t) {
            Q sum(0);
            for (std::uint64_t i = 0; i < 64; ++i) {
                const BitVec z = BitVec::from_index(i, k + 1);
                const BitVec x = z.slice(0, k);
                const Q ps = z.get(k) == BitVec::from_index(s, k).dot(x) ? Q(1, 32) : Q(0);
                const Q pt = z.get(k) == BitVec::from_index(t, k).dot(x) ? Q(1, 32) : Q(0);
                sum += abs(ps - pt);
            }
            const Q expected = sum / 2;
            ASSERT_EQ(expected, s == t ? Q(0) : Q(1, 2));
            const double got = tv(Dist::parity(BitVec::from_index(s, k)), Dist::parity(BitVec::from_index(t, k)));
            EXPECT_EQ(got, boost::rational_cast<double>(expected));
        }
    }
}

TEST(Tv, ClosedFormsMatchDenseEnumeration) {
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + rng.below(8);
        Dist p = oracle::random_structured(n, rng);
        Dist q = oracle::random_structured(n, rng);
        const std::size_t w = std::max(p.num_bits(), q.num_bits());
        p = embed(p, w);
        q = embed(q, w);
        EXPECT_NEAR(tv(p, q), table_tv(oracle::eval_table(p), oracle::eval_table(q)), 1e-12)
            << to_json(p).dump() << " vs " << to_json(q).dump();
    }
}

TEST(Tv, WideDistributionsUseSupportEnumeration) {
    Rng rng(10);
    for (int i = 0; i < 20; ++i) {
        const Dist p = oracle::random_structured(8, rng);
        const Dist q = oracle::random_structured(8, rng);
        const std::size_t w = std::max(p.num_bits(), q.num_bits());
        const double narrow = tv(embed(p, w), embed(q, w));
        EXPECT_NEAR(tv(embed(p, 26), embed(q, 26)), narrow, 1e-12);
    }
}

TEST(Tv, InfeasiblePairThrows) {
    const Dist p = Dist::product({Dist::noisy_parity(BitVec(13), 0.25), Dist::noisy_parity(BitVec(13), 0.25)});
    const Dist q = Dist::product({Dist::noisy_parity(BitVec(13), 0.3), Dist::noisy_parity(BitVec(13), 0.3)});
    EXPECT_THROW(tv(p, q), Infeasible);
}

TEST(Embed, RoundTripAndSlice) {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Dist p = oracle::random_structured(8, rng);
        const std::size_t k = p.num_bits();
        const std::size_t n = k + rng.below(5);
        const Dist e = embed(p, n);
        ASSERT_EQ(e.num_bits(), n);
        EXPECT_TRUE(same_structure(marginalize(e, k), p));
        for (int j = 0; j < 20; ++j) {
            const BitVec x = rng.bits(k);
            EXPECT_EQ(e.eval(x.concat(BitVec(n - k))), p.eval(x));
            if (n > k) {
                BitVec pad = rng.bits(n - k);
                if (pad.is_zero()) {
                    pad.set(0, true);
                }
                EXPECT_EQ(e.eval(x.concat(pad)), 0.0);
            }
        }
    }
    EXPECT_THROW(embed(Dist::uniform(5), 4), std::invalid_argument);
    EXPECT_THROW(marginalize(Dist::uniform(5), 6), std::invalid_argument);
}

TEST(Embed, PreservesTv) {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const std::size_t k = 2 + rng.below(7);
        const Dist p = embed(oracle::random_structured(k, rng), k);
        const Dist q = embed(oracle::random_structured(k, rng), k);
        const std::size_t n = k + rng.below(6);
        EXPECT_EQ(tv(embed(p, n), embed(q, n)), tv(p, q));
    }
}

TEST(Marginalize, MatchesSummedTable) {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        Dist p = oracle::random_structured(9, rng);
        if (rng.below(4) == 0) {
            p = Dist::dense(DenseDist{p.num_bits(), oracle::eval_table(p)});
        }
        const std::size_t k = rng.below(p.num_bits() + 1);
        const auto full = oracle::eval_table(p);
        std::vector<double> expected(std::size_t{1} << k, 0.0);
        for (std::size_t x = 0; x < full.size(); ++x) {
            expected[x & ((std::size_t{1} << k) - 1)] += full[x];
        }
        if (k == 0) {
            continue;
        }
        const auto got = oracle::eval_table(marginalize(p, k));
        for (std::size_t x = 0; x < expected.size(); ++x) {
            EXPECT_NEAR(got[x], expected[x], 1e-12) << to_json(p).dump();
        }
    }
}

TEST(Embed, StretchBookkeepingForCircuits) {
    // A k-qubit circuit embedded into g(k) = k^2 wires: same depth, and its
    // output distribution is the embedded distribution.
    Rng rng(14);
    for (std::size_t k = 2; k <= 4; ++k) {
        const Circuit c = random_circuit(k, 5 + rng.below(10), rng);
        const Circuit wide = embed_circuit(c, k * k);
        EXPECT_EQ(wide.num_qubits(), k * k);
        EXPECT_EQ(depth(wide), depth(c));
        const Dist narrow = Dist::affine_uniform(support(simulate_clifford(c)));
        const Dist embedded = Dist::affine_uniform(support(simulate_clifford(wide)));
        EXPECT_EQ(tv(embedded, embed(narrow, k * k)), 0.0);
    }
}

TEST(Json, RoundTripPreservesDistribution) {
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        const Dist p = oracle::random_structured(9, rng);
        const auto j = to_json(p);
        EXPECT_EQ(j.at("schema"), "dist_v1");
        const Dist back = dist_from_json(nlohmann::json::parse(j.dump()));
        EXPECT_TRUE(same_structure(back, p));
        EXPECT_EQ(oracle::eval_table(back), oracle::eval_table(p));
    }
}

TEST(Json, Layout) {
    const auto j = to_json(Dist::noisy_parity(BitVec::from_string("101"), 0.25));
    EXPECT_EQ(j.dump(), R"({"eta":0.25,"k":3,"s":"a","schema":"dist_v1","type":"noisy_parity"})");
    EXPECT_THROW(dist_from_json(nlohmann::json::parse(R"({"type":"point_mass","n":1,"x":"8"})")), ParseError);
    EXPECT_THROW(dist_from_json(nlohmann::json::parse(R"({"schema":"dist_v1","type":"cauchy"})")), ParseError);
    EXPECT_THROW(dist_from_json(nlohmann::json::parse(R"({"schema":"dist_v1","type":"point_mass"})")), ParseError);
}

TEST(Dense, RejectsBadTables) {
    EXPECT_THROW(Dist::dense(DenseDist{2, {0.5, 0.5, 0.5, -0.5}}), std::invalid_argument);
    EXPECT_THROW(Dist::dense(DenseDist{2, {0.5, 0.5, 0.5}}), DimensionMismatch);
    EXPECT_THROW(Dist::dense(DenseDist{1, {0.5, 0.6}}), std::invalid_argument);
}
