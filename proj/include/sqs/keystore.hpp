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

#include <string>
#include <vector>

#include "sqs/bits.hpp"

namespace sqs {

/// Half-open range [begin, end) of the shared key, tagged with its use.
struct KeySegment {
    std::string purpose;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    friend bool operator==(const KeySegment &, const KeySegment &) = default;
};

/// One party's copy of the shared key K_AT. Every key bit is handed out at
/// most once; the cursor only moves forward.
class KeyStore {
public:
    explicit KeyStore(BitString key) : key_(std::move(key)) {}

    const BitString &bits() const { return key_; }
    std::size_t size() const { return key_.size(); }
    std::size_t cursor() const { return cursor_; }
    std::size_t remaining() const { return key_.size() - cursor_; }
    const std::vector<KeySegment> &segments() const { return segments_; }

    /// Next `len` unconsumed bits.
    KeySegment allocate(const std::string &purpose, std::size_t len) { return allocate_range(purpose, cursor_, len); }

    /// Explicit range; used by the peer that mirrors an allocation made on
    /// the other copy of the key.
    KeySegment allocate_range(const std::string &purpose, std::size_t begin, std::size_t len) {
        if (begin < cursor_) {
            fail(ErrorCode::ReuseAttempt, "key range [" + std::to_string(begin) + ", " + std::to_string(begin + len) +
                                              ") overlaps consumed bits (cursor " + std::to_string(cursor_) + ")");
        }
        if (begin + len > key_.size()) {
            fail(ErrorCode::KeyExhausted, "need key bits up to " + std::to_string(begin + len) + ", have " +
                                              std::to_string(key_.size()));
        }
        KeySegment seg{purpose, begin, begin + len};
        segments_.push_back(seg);
        cursor_ = seg.end;
        return seg;
    }

    BitString segment_bits(const KeySegment &seg) const { return key_.slice(seg.begin, seg.size()); }

    bool segments_disjoint() const {
        for (std::size_t i = 0; i < segments_.size(); ++i)
            for (std::size_t j = i + 1; j < segments_.size(); ++j) {
                const auto &a = segments_[i];
                const auto &b = segments_[j];
                if (a.begin < b.end && b.begin < a.end) return false;
            }
        return true;
    }

private:
    BitString key_;
    std::size_t cursor_ = 0;
    std::vector<KeySegment> segments_;
};

/// Trusted stand-in for the semi-quantum key distribution step.
inline KeyStore keygen_init(std::size_t n_total, Rng &rng) { return KeyStore(BitString::random(n_total, rng)); }

struct OtpCiphertext {
    KeySegment segment;
    BitString bits;
};

inline OtpCiphertext otp_encrypt(KeyStore &store, const std::string &purpose, const BitString &plaintext) {
    auto seg = store.allocate(purpose, plaintext.size());
    return {seg, plaintext ^ store.segment_bits(seg)};
}

/// Encrypts with an explicitly chosen range; reusing consumed bits throws ReuseAttempt.
inline OtpCiphertext otp_encrypt_at(KeyStore &store, const std::string &purpose, std::size_t begin,
                                    const BitString &plaintext) {
    auto seg = store.allocate_range(purpose, begin, plaintext.size());
    return {seg, plaintext ^ store.segment_bits(seg)};
}

/// Decrypts on the receiving party's copy of the key, consuming the same range there.
inline BitString otp_decrypt(KeyStore &store, const OtpCiphertext &ct) {
    if (ct.bits.size() != ct.segment.size()) fail(ErrorCode::LengthMismatch, "ciphertext does not match its key segment");
    auto seg = store.allocate_range(ct.segment.purpose, ct.segment.begin, ct.segment.size());
    return ct.bits ^ store.segment_bits(seg);
}

}  // namespace sqs
