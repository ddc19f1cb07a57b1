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

#include <optional>
#include <vector>

#include "sqs/bits.hpp"
#include "sqs/hash.hpp"
#include "sqs/keystore.hpp"
#include "sqs/party.hpp"

namespace sqs {

inline constexpr const char *kSigningKeyPurpose = "signing";

/// (m, |B>) as handed to Bob.
struct SignatureBundle {
    BitString message;
    std::vector<QubitHandle> b_sequence;
};

/// (m, T, B) kept by Trent after a successful verification.
struct Evidence {
    BitString message;
    BitString t_bits;
    BitString b_bits;
};

enum class Verdict { Yes, No };

struct VerificationOutcome {
    Verdict verdict = Verdict::No;
    std::optional<BitString> digest;
    std::vector<std::size_t> failing_positions;
};

enum class Decision { Accept, Reject };

inline BitString compute_g(const BitString &m, const BitString &key) {
    if (m.size() != key.size()) {
        fail(ErrorCode::LengthMismatch,
             "message has " + std::to_string(m.size()) + " bits, key segment " + std::to_string(key.size()));
    }
    return m ^ key;
}

/// g = m xor K_AT over the first |m| key bits, which are reserved for signing.
inline BitString compute_g(const BitString &m, KeyStore &store) {
    if (m.size() > store.size()) {
        fail(ErrorCode::LengthMismatch,
             "message of " + std::to_string(m.size()) + " bits exceeds key of " + std::to_string(store.size()));
    }
    const auto seg = store.allocate_range(kSigningKeyPurpose, 0, m.size());
    return compute_g(m, store.segment_bits(seg));
}

/// Bob's Z-basis measurement of every BobHalf in the bundle.
inline BitString bob_measure(const SignatureBundle &bundle, RegisterBank &bank, Party &bob, Rng &rng) {
    BitString b;
    for (auto h : bundle.b_sequence) b.push_back(bob.measure(bank, h, Basis::Z, rng));
    return b;
}

/// Position i passes iff b_i = t_i xor g_i.
inline VerificationOutcome trent_verify(const BitString &g, const BitString &t, const BitString &b,
                                        const BitString &m, const HashFunction &hash) {
    if (g.size() != t.size() || t.size() != b.size()) {
        fail(ErrorCode::LengthMismatch, "verification inputs have lengths " + std::to_string(g.size()) + ", " +
                                            std::to_string(t.size()) + ", " + std::to_string(b.size()));
    }
    VerificationOutcome out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (b[i] != (t[i] ^ g[i])) out.failing_positions.push_back(i);
    if (out.failing_positions.empty()) {
        out.verdict = Verdict::Yes;
        out.digest = hash(m);
    }
    return out;
}

inline Decision bob_accept(const BitString &m_received, const VerificationOutcome &outcome, const HashFunction &hash) {
    if (outcome.verdict != Verdict::Yes || !outcome.digest) return Decision::Reject;
    return hash(m_received) == *outcome.digest ? Decision::Accept : Decision::Reject;
}

}  // namespace sqs
