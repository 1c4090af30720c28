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
 * Circuit IR over the gate set {H, S, T, CNOT, SWAP}.
 *
 * Gates are packed into layers as they are appended: each gate goes into the
 * earliest layer after every layer that already touches one of its qubits.
 * Qubits are 0-based.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "borncraft/bits.hpp"
#include "borncraft/errors.hpp"
#include "borncraft/rng.hpp"

namespace borncraft {

enum class GateKind : std::uint8_t { H, S, T, CNOT, SWAP };

constexpr bool is_two_qubit(GateKind k) noexcept {
    return k == GateKind::CNOT || k == GateKind::SWAP;
}

constexpr std::string_view gate_name(GateKind k) noexcept {
    switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

/// For CNOT, q0 is the control and q1 the target. Single-qubit gates ignore q1.
struct Gate {
    GateKind kind;
    std::size_t q0;
    std::size_t q1 = 0;

    static Gate h(std::size_t q) { return {GateKind::H, q}; }
    static Gate s(std::size_t q) { return {GateKind::S, q}; }
    static Gate t(std::size_t q) { return {GateKind::T, q}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, control, target};
    }
    static Gate swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, a, b}; }

    bool two_qubit() const noexcept { return is_two_qubit(kind); }

    friend bool operator==(const Gate &a, const Gate &b) noexcept {
        return a.kind == b.kind && a.q0 == b.q0 && (!a.two_qubit() || a.q1 == b.q1);
    }
};

class Circuit {
  public:
    explicit Circuit(std::size_t num_qubits = 0) : n_(num_qubits), frontier_(num_qubits, 0) {}

    std::size_t num_qubits() const noexcept { return n_; }
    std::size_t depth() const noexcept { return layers_.size(); }
    const std::vector<std::vector<Gate>> &layers() const noexcept { return layers_; }

    Circuit &append(const Gate &g) {
        if (g.q0 >= n_ || (g.two_qubit() && g.q1 >= n_)) {
            throw std::out_of_range("gate " + std::string(gate_name(g.kind)) +
                                    " addresses a qubit outside the circuit");
        }
        if (g.two_qubit() && g.q0 == g.q1) {
            throw std::invalid_argument("two-qubit gate acts on a single qubit");
        }
        std::size_t layer = frontier_[g.q0];
        if (g.two_qubit()) {
            layer = std::max(layer, frontier_[g.q1]);
        }
        if (layer == layers_.size()) {
            layers_.emplace_back();
        }
        layers_[layer].push_back(g);
        frontier_[g.q0] = layer + 1;
        if (g.two_qubit()) {
            frontier_[g.q1] = layer + 1;
        }
        return *this;
    }

    Circuit &h(std::size_t q) { return append(Gate::h(q)); }
    Circuit &s(std::size_t q) { return append(Gate::s(q)); }
    Circuit &t(std::size_t q) { return append(Gate::t(q)); }
    Circuit &cnot(std::size_t c, std::size_t tgt) { return append(Gate::cnot(c, tgt)); }
    Circuit &swap(std::size_t a, std::size_t b) { return append(Gate::swap(a, b)); }

    /// Gates in layer order; a valid execution order for the circuit.
    std::vector<Gate> gates() const {
        std::vector<Gate> out;
        for (const auto &layer : layers_) {
            out.insert(out.end(), layer.begin(), layer.end());
        }
        return out;
    }

    std::size_t gate_count() const noexcept {
        std::size_t c = 0;
        for (const auto &layer : layers_) {
            c += layer.size();
        }
        return c;
    }

    std::size_t count(GateKind kind) const noexcept {
        std::size_t c = 0;
        for (const auto &layer : layers_) {
            for (const auto &g : layer) {
                c += g.kind == kind ? 1 : 0;
            }
        }
        return c;
    }

    bool is_clifford() const noexcept { return count(GateKind::T) == 0; }

    /// Every two-qubit gate acts on neighbouring indices.
    bool is_nearest_neighbor() const noexcept {
        for (const auto &layer : layers_) {
            for (const auto &g : layer) {
                if (g.two_qubit() && (g.q0 > g.q1 ? g.q0 - g.q1 : g.q1 - g.q0) != 1) {
                    return false;
                }
            }
        }
        return true;
    }

    friend bool operator==(const Circuit &a, const Circuit &b) {
        return a.n_ == b.n_ && a.layers_ == b.layers_;
    }

  private:
    std::size_t n_;
    std::vector<std::vector<Gate>> layers_;
    std::vector<std::size_t> frontier_;
};

inline std::size_t depth(const Circuit &c) noexcept { return c.depth(); }

/// Circuit whose Born distribution is the (noisy) parity distribution for `s`,
/// tensored with |0> on `pad` extra qubits.
///
/// Layout on k + 1 + pad qubits: H on the k input qubits, CNOT(i, k) for every
/// s_i = 1, and when `noisy` the gadget H T H on qubit k. The gadget flips the
/// parity bit with probability sin^2(pi/8).
inline Circuit parity_circuit(const BitVec &s, bool noisy, std::size_t pad = 0) {
    const std::size_t k = s.size();
    if (k == 0) {
        throw std::invalid_argument("parity_circuit: secret must have at least one bit");
    }
    Circuit c(k + 1 + pad);
    for (std::size_t i = 0; i < k; ++i) {
        c.h(i);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (s.get(i)) {
            c.cnot(i, k);
        }
    }
    if (noisy) {
        c.h(k).t(k).h(k);
    }
    return c;
}

/// Same gates on the first c.num_qubits() wires of an n-qubit register; the
/// remaining wires stay idle. Depth is unchanged.
inline Circuit embed_circuit(const Circuit &c, std::size_t n) {
    if (n < c.num_qubits()) {
        throw std::invalid_argument("embed_circuit: target register is narrower than the circuit");
    }
    Circuit out(n);
    for (const auto &g : c.gates()) {
        out.append(g);
    }
    return out;
}

/// Rewrites every non-adjacent two-qubit gate as a SWAP ladder that brings the
/// first operand next to the second, the gate itself, and the inverse ladder.
/// A gate at distance d costs 2(d - 1) SWAPs.
inline Circuit route_nearest_neighbor(const Circuit &c) {
    Circuit out(c.num_qubits());
    for (const auto &g : c.gates()) {
        if (!g.two_qubit()) {
            out.append(g);
            continue;
        }
        const std::size_t a = g.q0;
        const std::size_t b = g.q1;
        const std::size_t dist = a > b ? a - b : b - a;
        if (dist == 1) {
            out.append(g);
            continue;
        }
        // Walk qubit a toward b; its state ends up at `near`.
        std::vector<Gate> ladder;
        std::size_t pos = a;
        const std::size_t near = a < b ? b - 1 : b + 1;
        while (pos != near) {
            const std::size_t next = a < b ? pos + 1 : pos - 1;
            ladder.push_back(Gate::swap(pos, next));
            pos = next;
        }
        for (const auto &sw : ladder) {
            out.append(sw);
        }
        out.append(Gate{g.kind, near, b});
        for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
            out.append(*it);
        }
    }
    return out;
}

/// Parses the line-oriented circuit format:
///
///     qubits 3
///     H 0
///     CNOT 0 2   # comment
///
/// Gate names are case-insensitive. Layers are recomputed by packing.
inline Circuit parse_circuit(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    Circuit c;
    auto fail = [&](const std::string &msg) {
        throw ParseError("circuit line " + std::to_string(line_no) + ": " + msg);
    };
    auto read_index = [&](std::istringstream &ss) {
        long long v = -1;
        if (!(ss >> v) || v < 0) {
            fail("expected a non-negative qubit index");
        }
        return static_cast<std::size_t>(v);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        std::string op;
        if (!(ss >> op)) {
            continue;
        }
        std::transform(op.begin(), op.end(), op.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        if (!have_header) {
            if (op != "QUBITS") {
                fail("expected header 'qubits N'");
            }
            c = Circuit(read_index(ss));
            have_header = true;
        } else {
            Gate g{GateKind::H, 0};
            if (op == "H") {
                g = Gate::h(read_index(ss));
            } else if (op == "S") {
                g = Gate::s(read_index(ss));
            } else if (op == "T") {
                g = Gate::t(read_index(ss));
            } else if (op == "CNOT" || op == "CX") {
                const auto q0 = read_index(ss);
                g = Gate::cnot(q0, read_index(ss));
            } else if (op == "SWAP") {
                const auto q0 = read_index(ss);
                g = Gate::swap(q0, read_index(ss));
            } else {
                fail("unknown gate '" + op + "'");
            }
            std::string extra;
            if (ss >> extra) {
                fail("trailing tokens");
            }
            try {
                c.append(g);
            } catch (const std::exception &e) {
                fail(e.what());
            }
        }
    }
    if (!have_header) {
        throw ParseError("circuit text has no 'qubits N' header");
    }
    return c;
}

inline Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_circuit(in);
}

inline std::string format_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "qubits " << c.num_qubits() << '\n';
    for (const auto &g : c.gates()) {
        out << gate_name(g.kind) << ' ' << g.q0;
        if (g.two_qubit()) {
            out << ' ' << g.q1;
        }
        out << '\n';
    }
    return out.str();
}

struct RandomCircuitOptions {
    bool nearest_neighbor = true;
    bool allow_t = false;
    bool allow_swap = true;
};

/// Random circuit of exactly `target_depth` layers (n >= 1).
inline Circuit random_circuit(std::size_t n, std::size_t target_depth, Rng &rng,
                              const RandomCircuitOptions &opts = {}) {
    Circuit c(n);
    if (n == 0) {
        return c;
    }
    while (c.depth() < target_depth) {
        const std::uint64_t choice = rng.below(opts.allow_t ? 5 : 4);
        if (n == 1 || choice == 0) {
            c.h(rng.below(n));
        } else if (choice == 1) {
            c.s(rng.below(n));
        } else if (choice == 4) {
            c.t(rng.below(n));
        } else {
            std::size_t a = 0;
            std::size_t b = 0;
            if (opts.nearest_neighbor) {
                a = rng.below(n - 1);
                b = a + 1;
                if (rng.below(2) != 0) {
                    std::swap(a, b);
                }
            } else {
                a = rng.below(n);
                b = rng.below(n - 1);
                b += b >= a ? 1 : 0;
            }
            if (choice == 3 && opts.allow_swap && rng.below(3) == 0) {
                c.swap(a, b);
            } else {
                c.cnot(a, b);
            }
        }
    }
    return c;
}

} // namespace borncraft
