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

// End-to-end signing session: quantum Alice signs m for classical Bob with
// classical Trent as arbitrator.
//
//   Alice -> Trent : carrier halves |T> + decoys (m embedded), detection round
//   Alice -> Bob   : (m, |B>)
//   Bob   -> Trent : B
//   Trent -> Bob   : (Yes, h(m)) or (No)

#pragma once

#include <optional>
#include <vector>

#include "sqs/detection.hpp"
#include "sqs/signing.hpp"

namespace sqs {

inline constexpr const char *kAlice = "alice";
inline constexpr const char *kBob = "bob";
inline constexpr const char *kTrent = "trent";

struct ProtocolConfig {
    std::size_t n = 8;
    std::optional<BitString> message;      // random when absent
    std::optional<BitString> signing_key;  // first n key bits; random when absent
    DetectionParams detection{8, 8, 0.0, DetectionMode::Improved};
    AttackStrategy attack;
    double noise_p = 0.0;
    HashFunction hash = default_hash();
};

/// Total K_AT bits one run consumes.
inline std::size_t key_budget(const ProtocolConfig &cfg) { return cfg.n + detection_key_budget(cfg.detection); }

struct ProtocolRun {
    DetectionReport detection;
    bool aborted = false;

    BitString message;      // Alice's m
    BitString g;            // Alice's g
    BitString t_bits;       // Trent's T
    BitString recovered_m;  // Trent's copy of m
    BitString g_trent;
    BitString b_bits;       // B as Bob measured it
    BitString b_at_trent;   // B as Trent received it
    BitString m_at_bob;

    std::optional<VerificationOutcome> verification;
    Decision bob_decision = Decision::Reject;
    std::optional<Evidence> evidence;

    std::vector<PrimitiveOp> alice_ops;
    std::vector<PrimitiveOp> bob_ops;
    std::vector<PrimitiveOp> trent_ops;
    bool capability_respected = true;
    bool key_segments_disjoint = true;

    bool trent_yes() const { return verification && verification->verdict == Verdict::Yes; }
    bool bob_accepted() const { return bob_decision == Decision::Accept; }
};

/// Carrier halves and the signature bundle produced by Alice.
struct AliceSignOutput {
    BitString g;
    std::vector<QubitHandle> t_sequence;
    SignatureBundle bundle;
};

/// g = m xor K_AT, then one Bell pair per position: |Phi+> for 0, |Psi+> for 1.
inline AliceSignOutput alice_sign(const BitString &m, KeyStore &store, RegisterBank &bank, Party &alice) {
    AliceSignOutput out;
    out.g = compute_g(m, store);
    out.bundle.message = m;
    out.t_sequence.reserve(m.size());
    out.bundle.b_sequence.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto [t, b] = alice.prepare_bell_pair(bank, out.g[i]);
        out.t_sequence.push_back(t);
        out.bundle.b_sequence.push_back(b);
    }
    return out;
}

struct TrentReceipt {
    BitString t_bits;
    BitString recovered_m;
    BitString g;
};

/// Z-measures every carrier, takes m from the first n Z-decoy results and
/// recomputes g from the signing key segment.
inline TrentReceipt trent_receive(RegisterBank &bank, Party &trent, std::span<const QubitHandle> carriers,
                                  const BitString &z_decoy_bits, const BitString &signing_key, Rng &rng) {
    const std::size_t n = signing_key.size();
    if (carriers.size() != n) fail(ErrorCode::LengthMismatch, "carrier count differs from n");
    if (z_decoy_bits.size() < n) fail(ErrorCode::InvalidArgument, "fewer Z-decoy results than message bits");
    TrentReceipt out;
    for (auto h : carriers) out.t_bits.push_back(trent.measure(bank, h, Basis::Z, rng));
    out.recovered_m = z_decoy_bits.slice(0, n);
    trent.note(PrimitiveOp::ClassicalCompute);
    out.g = compute_g(out.recovered_m, signing_key);
    return out;
}

inline KeyStore make_shared_key(const ProtocolConfig &cfg, Rng &key_rng) {
    KeyStore random = keygen_init(key_budget(cfg), key_rng);
    if (!cfg.signing_key) return random;
    if (cfg.signing_key->size() != cfg.n) fail(ErrorCode::LengthMismatch, "signing key must have n bits");
    BitString bits = *cfg.signing_key;
    bits.append(random.bits().slice(cfg.n, random.size() - cfg.n));
    return KeyStore(std::move(bits));
}

/// One complete run. `rng` is the trial's own stream; `transcript` is optional.
inline ProtocolRun run_protocol(const ProtocolConfig &cfg, const Rng &rng, RunTranscript *transcript = nullptr) {
    const auto mode = cfg.detection.mode;
    const bool embeds = mode != DetectionMode::DirectReflection;
    if (embeds && cfg.detection.d_z < cfg.n) {
        fail(ErrorCode::ConfigError, "d_z=" + std::to_string(cfg.detection.d_z) + " cannot carry n=" +
                                         std::to_string(cfg.n) + " message bits");
    }

    Rng key_rng = rng.split(Stream::Key);
    Rng msg_rng = rng.split(Stream::Message);
    Rng alice_rng = rng.split(Stream::Alice);
    Rng bob_rng = rng.split(Stream::Bob);
    Rng trent_rng = rng.split(Stream::Trent);

    RegisterBank bank;
    bank.reserve(cfg.n + cfg.detection.d_z + cfg.detection.d_x);
    Party alice(kAlice, PartyKind::Quantum);
    Party bob(kBob, PartyKind::Classical);
    Party trent(kTrent, PartyKind::Classical);
    Adversary eve(cfg.attack);
    Channel channel(eve, rng.split(Stream::Adversary), cfg.noise_p, rng.split(Stream::Noise), transcript);

    KeyStore alice_key = make_shared_key(cfg, key_rng);
    KeyStore trent_key = alice_key;
    // Trent's signing segment is reserved up front so the detection round
    // can consume the bits after it.
    const auto trent_signing = trent_key.allocate_range(kSigningKeyPurpose, 0, cfg.n);

    ProtocolRun run;
    run.message = cfg.message ? *cfg.message : BitString::random(cfg.n, msg_rng);
    if (run.message.size() != cfg.n) fail(ErrorCode::LengthMismatch, "message length differs from n");

    auto finish = [&] {
        run.alice_ops = alice.op_log();
        run.bob_ops = bob.op_log();
        run.trent_ops = trent.op_log();
        run.capability_respected =
            alice.log_respects_capability() && bob.log_respects_capability() && trent.log_respects_capability();
        run.key_segments_disjoint = alice_key.segments_disjoint() && trent_key.segments_disjoint();
    };

    // Signing.
    auto signed_out = alice_sign(run.message, alice_key, bank, alice);
    run.g = signed_out.g;
    const auto tx = prepare_transmission(bank, alice, signed_out.t_sequence, cfg.detection,
                                         embeds ? std::optional<BitString>(run.message) : std::nullopt, alice_rng);
    DetectionContext ctx{bank, alice, trent, channel, cfg.detection, alice_rng, trent_rng, &alice_key, &trent_key};
    auto detection = run_detection_exchange(ctx, tx);
    run.detection = detection.report;
    if (detection.report.verdict == RoundVerdict::Abort) {
        run.aborted = true;
        finish();
        return run;
    }

    BitString z_source = detection.receiver_z_bits;
    if (!embeds) {
        // No receiver-side decoy measurement in this mode; m goes in the clear.
        channel.publish(kAlice, kTrent, "message_to_trent", run.message);
        z_source = run.message;
    }
    const auto receipt = trent_receive(bank, trent, detection.receiver_carriers, z_source,
                                       trent_key.segment_bits(trent_signing), trent_rng);
    run.t_bits = receipt.t_bits;
    run.recovered_m = receipt.recovered_m;
    run.g_trent = receipt.g;

    // Delivery to Bob.
    channel.send_quantum(TapPoint::AliceToBobQuantum, bank, signed_out.bundle.b_sequence, kAlice, kBob, "signature_b");
    run.m_at_bob = channel.send_classical(TapPoint::AliceToBobClassical, run.message, kAlice, kBob, "message_m");
    SignatureBundle at_bob{run.m_at_bob, signed_out.bundle.b_sequence};

    // Verification.
    run.b_bits = bob_measure(at_bob, bank, bob, bob_rng);
    run.b_at_trent = channel.send_classical(TapPoint::BobToTrentClassical, run.b_bits, kBob, kTrent, "b_string");
    trent.note(PrimitiveOp::ClassicalCompute);
    run.verification = trent_verify(run.g_trent, run.t_bits, run.b_at_trent, run.recovered_m, cfg.hash);
    if (run.verification->verdict == Verdict::Yes) {
        run.evidence = Evidence{run.recovered_m, run.t_bits, run.b_at_trent};
        channel.publish(kTrent, kBob, "verdict_yes", *run.verification->digest);
    } else {
        channel.publish(kTrent, kBob, "verdict_no", BitString{});
    }
    bob.note(PrimitiveOp::ClassicalCompute);
    run.bob_decision = bob_accept(run.m_at_bob, *run.verification, cfg.hash);
    finish();
    return run;
}

}  // namespace sqs
