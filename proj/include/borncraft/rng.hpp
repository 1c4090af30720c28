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
 * Pinned pseudorandom generator: xoshiro256** seeded through SplitMix64.
 *
 * std::uniform_*_distribution results differ between standard libraries, so
 * every draw used by the library goes through the helpers here. Independent
 * streams are derived from (master seed, stream ids) by hashing, which makes a
 * trial's randomness a function of its index alone.
 */

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

#include "borncraft/bits.hpp"

namespace borncraft {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    /// Stream keyed by a master seed and any number of ids (experiment point,
    /// trial index, ...).
    static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> ids) noexcept {
        std::uint64_t h = mix64(master);
        for (const auto id : ids) {
            h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
        }
        return Rng(h);
    }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto &w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform element of {0,1}^len.
    BitVec bits(std::size_t len) {
        BitVec v(len);
        auto words = v.words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            words[w] = (*this)();
        }
        const std::size_t tail = len % BitVec::word_bits;
        if (tail != 0) {
            words.back() &= (BitVec::word_type{1} << tail) - 1;
        }
        return v;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace borncraft
