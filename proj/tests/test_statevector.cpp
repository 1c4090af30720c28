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

#include <numbers>

#include "borncraft/statevector.hpp"

using namespace borncraft;

TEST(SvDistribution, Examples) {
    const auto empty = sv_distribution(Circuit(3));
    EXPECT_EQ(empty.probs[0], 1.0);
    for (std::size_t i = 1; i < 8; ++i) {
        EXPECT_EQ(empty.probs[i], 0.0);
    }
    Circuit h(1);
    h.h(0);
    const auto d = sv_distribution(h);
    EXPECT_NEAR(d.probs[0], 0.5, 1e-15);
    EXPECT_NEAR(d.probs[1], 0.5, 1e-15);
}

TEST(SvDistribution, GuardRejectsLargeCircuits) {
    EXPECT_THROW(sv_distribution(Circuit(21)), Infeasible);
    EXPECT_THROW(circuit_unitary(Circuit(11)), Infeasible);
}

TEST(StateVector, NormPreservedAfterEveryLayer) {
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const Circuit c = random_circuit(1 + rng.below(8), 1 + rng.below(30), rng, {false, true, true});
        StateVector sv(c.num_qubits());
        for (const auto &layer : c.layers()) {
            for (const auto &g : layer) {
                sv.apply(g);
            }
            ASSERT_NEAR(sv.norm_squared(), 1.0, 1e-10);
        }
    }
}

TEST(CircuitUnitary, Examples) {
    const auto id = circuit_unitary(Circuit(2));
    EXPECT_TRUE(id.isApprox(Eigen::MatrixXcd::Identity(4, 4), 1e-15));

    Circuit t(1);
    t.t(0);
    const auto u = circuit_unitary(t);
    EXPECT_NEAR(std::abs(u(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, std::numbers::pi / 4)), 0.0, 1e-15);
    EXPECT_EQ(u(0, 1), complex_t(0.0));
    EXPECT_EQ(u(1, 0), complex_t(0.0));
}

TEST(CircuitUnitary, CnotConvention) {
    // Control 0, target 1: |01> (index 1, qubit 0 set) -> |11> (index 3).
    Circuit c(2);
    c.cnot(0, 1);
    const auto u = circuit_unitary(c);
    EXPECT_EQ(u(3, 1), complex_t(1.0));
    EXPECT_EQ(u(2, 2), complex_t(1.0));
}

TEST(CircuitUnitary, RandomCircuitsAreUnitary) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng.below(6);
        const Circuit c = random_circuit(n, 1 + rng.below(12), rng, {false, true, true});
        const auto u = circuit_unitary(c);
        const auto dim = u.rows();
        EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).norm(), 1e-10);
    }
}

TEST(OpnormTv, Examples) {
    Rng rng(4);
    const Circuit c = random_circuit(3, 6, rng, {false, true, true});
    const auto same = opnorm_tv_check(c, c);
    EXPECT_EQ(same.opnorm, 0.0);
    EXPECT_EQ(same.tv, 0.0);

    Circuit t(1);
    t.t(0);
    const auto r = opnorm_tv_check(t, Circuit(1));
    // |e^{i pi/4} - 1| = 2 sin(pi/8).
    EXPECT_NEAR(r.opnorm, 0.7653668647301796, 1e-12);
    EXPECT_EQ(r.tv, 0.0);
    EXPECT_THROW(opnorm_tv_check(Circuit(2), Circuit(3)), DimensionMismatch);
}

TEST(OpnormTv, TvNeverExceedsOpnorm) {
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng.below(6);
        const Circuit base = random_circuit(n, 1 + rng.below(10), rng, {false, true, true});
        Circuit extended = base;
        const Circuit extra = random_circuit(n, 1, rng, {false, true, true});
        extended.append(extra.gates().front());
        const auto r = opnorm_tv_check(base, extended);
        EXPECT_LE(r.tv, r.opnorm) << "trial " << i;
    }
}
