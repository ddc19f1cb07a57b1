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

#include <openssl/evp.h>

#include <array>
#include <functional>
#include <string>

#include "sqs/bits.hpp"

namespace sqs {

/// Public hash h: {0,1}* -> {0,1}^l.
struct HashFunction {
    std::string name;
    std::size_t digest_bits = 0;
    std::function<BitString(const BitString &)> fn;

    BitString operator()(const BitString &m) const { return fn(m); }
};

/// SHA-256 over (64-bit big-endian bit length || packed bits). The length
/// prefix keeps "0" and "00" apart even though they pack to the same byte.
inline BitString sha256_digest(const BitString &m) {
    std::vector<std::uint8_t> input = BitString::from_uint(m.size(), 64).pack();
    const auto packed = m.pack();
    input.insert(input.end(), packed.begin(), packed.end());

    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(input.data(), input.size(), md.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32) {
        fail(ErrorCode::InvariantFailure, "SHA-256 evaluation failed");
    }
    BitString out;
    for (unsigned int i = 0; i < len; ++i) out.append(BitString::from_uint(md[i], 8));
    return out;
}

inline HashFunction default_hash() { return {"sha256", 256, sha256_digest}; }

/// 8-bit toy hash for tests that need collisions: sum of set-bit indices
/// plus length, mod 256.
inline HashFunction toy_hash8() {
    return {"toy8", 8, [](const BitString &m) {
                std::uint64_t acc = m.size();
                for (std::size_t i = 0; i < m.size(); ++i)
                    if (m[i]) acc += i + 1;
                return BitString::from_uint(acc & 0xFFU, 8);
            }};
}

}  // namespace sqs
