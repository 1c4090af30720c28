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
 * Dense statevector simulation for small circuits, including T gates.
 *
 * Basis index bit q is the value of qubit q. This is the reference
 * implementation the other simulators are checked against, so it applies each
 * gate directly to the amplitudes without any fusion or reordering.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "borncraft/circuit.hpp"
#include "borncraft/errors.hpp"

namespace borncraft {

inline constexpr std::size_t kMaxStatevectorQubits = 20;
inline constexpr std::size_t kMaxUnitaryQubits = 10;

using complex_t = std::complex<double>;

class StateVector {
  public:
    /// |0^n>.
    explicit StateVector(std::size_t n) : n_(n) {
        if (n > kMaxStatevectorQubits) {
            throw Infeasible("statevector limited to " + std::to_string(kMaxStatevectorQubits) +
                             " qubits, got " + std::to_string(n));
        }
        amps_.assign(std::size_t{1} << n, complex_t{0.0, 0.0});
        amps_[0] = 1.0;
    }

    /// Computational basis state |index>.
    static StateVector basis(std::size_t n, std::uint64_t index) {
        StateVector sv(n);
        sv.amps_[0] = 0.0;
        sv.amps_.at(index) = 1.0;
        return sv;
    }

    std::size_t num_qubits() const noexcept { return n_; }
    const std::vector<complex_t> &amplitudes() const noexcept { return amps_; }

    double norm_squared() const noexcept {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    void apply(const Gate &g) {
        const std::uint64_t bit0 = std::uint64_t{1} << g.q0;
        const std::uint64_t dim = amps_.size();
        switch (g.kind) {
        case GateKind::H: {
            const double r = std::numbers::sqrt2 / 2.0;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (!(i & bit0)) {
                    const complex_t a0 = amps_[i], a1 = amps_[i | bit0];
                    amps_[i] = r * (a0 + a1);
                    amps_[i | bit0] = r * (a0 - a1);
                }
            }
            break;
        }
        case GateKind::S:
            phase(bit0, complex_t{0.0, 1.0});
            break;
        case GateKind::T:
            phase(bit0, std::polar(1.0, std::numbers::pi / 4.0));
            break;
        case GateKind::CNOT: {
            const std::uint64_t bit1 = std::uint64_t{1} << g.q1;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & bit0) && !(i & bit1)) {
                    std::swap(amps_[i], amps_[i | bit1]);
                }
            }
            break;
        }
        case GateKind::SWAP: {
            const std::uint64_t bit1 = std::uint64_t{1} << g.q1;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & bit0) && !(i & bit1)) {
                    std::swap(amps_[i], amps_[i ^ bit0 ^ bit1]);
                }
            }
            break;
        }
        }
    }

    void run(const Circuit &c) {
        if (c.num_qubits() != n_) {
            throw DimensionMismatch("StateVector::run: qubit count mismatch");
        }
        for (const auto &layer : c.layers()) {
            for (const auto &g : layer) {
                apply(g);
            }
        }
    }

  private:
    void phase(std::uint64_t bit, complex_t w) {
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) {
                amps_[i] *= w;
            }
        }
    }

    std::size_t n_;
    std::vector<complex_t> amps_;
};

/// Probability table over {0,1}^n indexed by basis index.
struct DenseDist {
    std::size_t n = 0;
    std::vector<double> probs;

    double operator[](std::uint64_t index) const { return probs[index]; }
};

inline DenseDist sv_distribution(const Circuit &c) {
    StateVector sv(c.num_qubits());
    sv.run(c);
    DenseDist d{c.num_qubits(), {}};
    d.probs.reserve(sv.amplitudes().size());
    for (const auto &a : sv.amplitudes()) {
        d.probs.push_back(std::norm(a));
    }
    return d;
}

inline double tv_distance(const DenseDist &p, const DenseDist &q) {
    if (p.n != q.n) {
        throw DimensionMismatch("tv_distance: distributions over different bit lengths");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        s += std::abs(p.probs[i] - q.probs[i]);
    }
    return 0.5 * s;
}

/// Column k is the circuit applied to |k>.
inline Eigen::MatrixXcd circuit_unitary(const Circuit &c) {
    const std::size_t n = c.num_qubits();
    if (n > kMaxUnitaryQubits) {
        throw Infeasible("circuit_unitary limited to " + std::to_string(kMaxUnitaryQubits) +
                         " qubits, got " + std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        auto sv = StateVector::basis(n, static_cast<std::uint64_t>(k));
        sv.run(c);
        for (Eigen::Index r = 0; r < dim; ++r) {
            u(r, k) = sv.amplitudes()[static_cast<std::size_t>(r)];
        }
    }
    return u;
}

struct OpnormTv {
    double opnorm;
    double tv;
};

/// Operator norm of U - W (largest singular value, no global phase fixing) and
/// TV distance between the two Born distributions.
inline OpnormTv opnorm_tv_check(const Circuit &a, const Circuit &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionMismatch("opnorm_tv_check: circuits act on different qubit counts");
    }
    const Eigen::MatrixXcd diff = circuit_unitary(a) - circuit_unitary(b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
    const double opnorm = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    return {opnorm, tv_distance(sv_distribution(a), sv_distribution(b))};
}

} // namespace borncraft
