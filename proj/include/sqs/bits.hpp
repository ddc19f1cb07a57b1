// Copyright 2026 The sqsig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "sqs/error.hpp"
#include "sqs/rng.hpp"

namespace sqs {

/// An ordered string of bits, one byte per bit (values 0 or 1).
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t n) : bits_(n, 0) {}
    BitString(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) push_back(static_cast<std::uint8_t>(b));
    }

    /// Parses "0101"; any other character is rejected.
    static BitString parse(std::string_view text) {
        BitString out;
        out.bits_.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') {
                fail(ErrorCode::BadEncoding, "bit string contains '" + std::string(1, c) + "'");
            }
            out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return out;
    }

    static BitString random(std::size_t n, Rng &rng) {
        BitString out(n);
        for (auto &b : out.bits_) b = rng.bit();
        return out;
    }

    /// Big-endian unsigned encoding of `value` in `width` bits.
    static BitString from_uint(std::uint64_t value, std::size_t width) {
        BitString out(width);
        for (std::size_t i = 0; i < width; ++i) {
            out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
        }
        return out;
    }

    std::uint64_t to_uint(std::size_t offset, std::size_t width) const {
        if (offset + width > size()) fail(ErrorCode::BadEncoding, "field runs past end of bit string");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i) v = (v << 1) | bits_[offset + i];
        return v;
    }

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::uint8_t &operator[](std::size_t i) { return bits_[i]; }

    void push_back(std::uint8_t b) {
        if (b > 1) fail(ErrorCode::InvalidArgument, "bit value must be 0 or 1");
        bits_.push_back(b);
    }
    /// Big-endian `width`-bit encoding of `value`, appended in place.
    void append_uint(std::uint64_t value, std::size_t width) {
        for (std::size_t i = width; i-- > 0;) bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
    }
    void reserve(std::size_t n) { bits_.reserve(n); }
    void append(const BitString &other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

    BitString slice(std::size_t offset, std::size_t len) const {
        if (offset + len > size()) fail(ErrorCode::LengthMismatch, "slice out of range");
        BitString out;
        out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                         bits_.begin() + static_cast<std::ptrdiff_t>(offset + len));
        return out;
    }

    void flip(std::size_t i) { bits_[i] ^= 1U; }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    std::string str() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

    /// Packs into bytes, most significant bit first; used as hash input.
    std::vector<std::uint8_t> pack() const {
        std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            out[i / 8] |= static_cast<std::uint8_t>(bits_[i] << (7 - i % 8));
        }
        return out;
    }

    const std::vector<std::uint8_t> &raw() const { return bits_; }

    friend bool operator==(const BitString &, const BitString &) = default;

    friend BitString operator^(const BitString &a, const BitString &b) {
        if (a.size() != b.size()) {
            fail(ErrorCode::LengthMismatch,
                 "xor of " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " bits");
        }
        BitString out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out.bits_[i] = a.bits_[i] ^ b.bits_[i];
        return out;
    }

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace sqs
