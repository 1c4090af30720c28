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
 * Bit-packed vectors and matrices over F2.
 *
 * Bit i of a BitVec is the i-th coordinate of x in {0,1}^n. When a BitVec is
 * converted to or from an integer index, bit i maps to (index >> i) & 1, which
 * matches the qubit ordering of the statevector simulator.
 */

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "borncraft/errors.hpp"

namespace borncraft {

class BitVec {
  public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BitVec() = default;
    explicit BitVec(std::size_t len) : len_(len), words_(word_count(len), 0) {}

    /// Parses a string of '0'/'1' characters; character i is bit i.
    static BitVec from_string(std::string_view bits) {
        BitVec v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw ParseError("bit string contains a character other than 0/1");
            }
        }
        return v;
    }

    static BitVec from_index(std::uint64_t index, std::size_t len) {
        if (len > word_bits) {
            throw DimensionMismatch("from_index supports at most 64 bits");
        }
        BitVec v(len);
        if (len > 0) {
            v.words_[0] = len == word_bits ? index : (index & ((word_type{1} << len) - 1));
        }
        return v;
    }

    /// Hex form: the bit string is right-padded with zeros to a multiple of 4
    /// and each nibble is read with its first bit as the most significant.
    static BitVec from_hex(std::string_view hex, std::size_t len) {
        if (hex.size() != (len + 3) / 4) {
            throw ParseError("hex string length does not match bit length");
        }
        BitVec v(len);
        for (std::size_t j = 0; j < hex.size(); ++j) {
            const int nibble = hex_value(hex[j]);
            for (std::size_t b = 0; b < 4; ++b) {
                const std::size_t i = 4 * j + b;
                const bool bit = (nibble >> (3 - b)) & 1;
                if (i < len) {
                    v.set(i, bit);
                } else if (bit) {
                    throw ParseError("hex string sets bits past its declared length");
                }
            }
        }
        return v;
    }

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }

    bool get(std::size_t i) const noexcept {
        return (words_[i / word_bits] >> (i % word_bits)) & 1;
    }
    bool operator[](std::size_t i) const noexcept { return get(i); }

    void set(std::size_t i, bool value) noexcept {
        const word_type mask = word_type{1} << (i % word_bits);
        if (value) {
            words_[i / word_bits] |= mask;
        } else {
            words_[i / word_bits] &= ~mask;
        }
    }
    void flip(std::size_t i) noexcept { words_[i / word_bits] ^= word_type{1} << (i % word_bits); }

    BitVec &operator^=(const BitVec &other) {
        require_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }
    BitVec &operator&=(const BitVec &other) {
        require_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] &= other.words_[w];
        }
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec &b) { return a &= b; }

    /// Inner product over F2.
    bool dot(const BitVec &other) const {
        require_same_size(other);
        word_type acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            acc ^= words_[w] & other.words_[w];
        }
        return std::popcount(acc) & 1;
    }

    std::size_t popcount() const noexcept {
        std::size_t c = 0;
        for (const auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool is_zero() const noexcept {
        for (const auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    /// Index of the lowest set bit, or size() when the vector is zero.
    std::size_t lowest_set() const noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) {
                return w * word_bits + static_cast<std::size_t>(std::countr_zero(words_[w]));
            }
        }
        return len_;
    }

    std::uint64_t to_index() const {
        if (len_ > word_bits) {
            throw DimensionMismatch("to_index supports at most 64 bits");
        }
        return words_.empty() ? 0 : words_[0];
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (std::size_t i = 0; i < len_; ++i) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    std::string to_hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s((len_ + 3) / 4, '0');
        for (std::size_t j = 0; j < s.size(); ++j) {
            int nibble = 0;
            for (std::size_t b = 0; b < 4; ++b) {
                const std::size_t i = 4 * j + b;
                nibble = (nibble << 1) | (i < len_ && get(i) ? 1 : 0);
            }
            s[j] = digits[nibble];
        }
        return s;
    }

    /// Bits [begin, begin + count).
    BitVec slice(std::size_t begin, std::size_t count) const {
        if (begin + count > len_) {
            throw DimensionMismatch("slice out of range");
        }
        BitVec out(count);
        for (std::size_t i = 0; i < count; ++i) {
            out.set(i, get(begin + i));
        }
        return out;
    }

    /// This vector followed by `tail`.
    BitVec concat(const BitVec &tail) const {
        BitVec out(len_ + tail.len_);
        out.words_.assign(words_.begin(), words_.end());
        out.words_.resize(word_count(out.len_), 0);
        for (std::size_t i = 0; i < tail.len_; ++i) {
            if (tail.get(i)) {
                out.set(len_ + i, true);
            }
        }
        return out;
    }

    std::span<const word_type> words() const noexcept { return words_; }
    std::span<word_type> words() noexcept { return words_; }

    friend bool operator==(const BitVec &, const BitVec &) = default;

    /// Lexicographic order of the bit strings (bit 0 first, 0 < 1).
    friend bool lex_less(const BitVec &a, const BitVec &b) {
        const std::size_t n = a.len_ < b.len_ ? a.len_ : b.len_;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.get(i) != b.get(i)) {
                return !a.get(i);
            }
        }
        return a.len_ < b.len_;
    }

  private:
    static std::size_t word_count(std::size_t len) { return (len + word_bits - 1) / word_bits; }

    static int hex_value(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ParseError(std::string("invalid hex digit '") + c + "'");
    }

    void require_same_size(const BitVec &other) const {
        if (other.len_ != len_) {
            throw DimensionMismatch("BitVec length mismatch: " + std::to_string(len_) + " vs " +
                                    std::to_string(other.len_));
        }
    }

    std::size_t len_ = 0;
    std::vector<word_type> words_;
};

/// Row-major bit matrix. Columns are materialized on demand.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    static BitMatrix from_rows(std::vector<BitVec> rows, std::size_t cols) {
        for (const auto &r : rows) {
            if (r.size() != cols) {
                throw DimensionMismatch("matrix row has wrong length");
            }
        }
        BitMatrix m;
        m.cols_ = cols;
        m.rows_ = std::move(rows);
        return m;
    }

    /// Builds the matrix whose j-th column is columns[j]; every column has `rows` bits.
    static BitMatrix from_columns(std::span<const BitVec> columns, std::size_t rows) {
        BitMatrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) {
                throw DimensionMismatch("matrix column has wrong length");
            }
            for (std::size_t i = 0; i < rows; ++i) {
                if (columns[j].get(i)) {
                    m.rows_[i].set(j, true);
                }
            }
        }
        return m;
    }

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m.rows_[i].set(i, true);
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v) noexcept { rows_[r].set(c, v); }

    const BitVec &row(std::size_t r) const noexcept { return rows_[r]; }
    std::span<const BitVec> row_list() const noexcept { return rows_; }

    BitVec column(std::size_t c) const {
        BitVec v(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            v.set(r, rows_[r].get(c));
        }
        return v;
    }

    std::vector<BitVec> columns() const {
        std::vector<BitVec> out;
        out.reserve(cols_);
        for (std::size_t c = 0; c < cols_; ++c) {
            out.push_back(column(c));
        }
        return out;
    }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                if (rows_[r].get(c)) {
                    t.rows_[c].set(r, true);
                }
            }
        }
        return t;
    }

    /// Matrix-vector product M b.
    BitVec multiply(const BitVec &b) const {
        if (b.size() != cols_) {
            throw DimensionMismatch("matrix-vector product: vector length != cols");
        }
        BitVec out(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            out.set(r, rows_[r].dot(b));
        }
        return out;
    }

    friend bool operator==(const BitMatrix &, const BitMatrix &) = default;

  private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

} // namespace borncraft
