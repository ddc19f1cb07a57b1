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

// Two-sided decoy eavesdropping detection for a semi-quantum link.
//
// The quantum sender mixes Z-basis and X-basis decoys into a sequence and
// sends it to a classical receiver. In the improved round the receiver
// measures the Z-decoys, compares them with the announced contents, then
// extracts every decoy, shuffles them and reflects them back; the sender
// undoes the shuffle and checks both bases. Two weaker baselines are kept
// for comparison: direct reflection (no receiver check, no shuffle) and
// measure-then-return (receiver measures Z-decoys but never compares).

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqs/channel.hpp"
#include "sqs/keystore.hpp"
#include "sqs/party.hpp"

namespace sqs {

enum class DetectionMode { Improved, ImprovedInlineOtp, DirectReflection, MeasureThenReturn };

inline const char *to_string(DetectionMode m) {
    switch (m) {
        case DetectionMode::Improved: return "improved";
        case DetectionMode::ImprovedInlineOtp: return "improved_inline_otp";
        case DetectionMode::DirectReflection: return "direct_reflection";
        case DetectionMode::MeasureThenReturn: return "measure_then_return";
    }
    return "?";
}

/// Width of one decoy entry in the LOC announcement: position, basis, value.
inline constexpr std::size_t kPositionBits = 16;
inline constexpr std::size_t kLocEntryBits = kPositionBits + 2;
inline constexpr std::size_t kPermutationEntryBits = 16;

inline constexpr const char *kLocKeyPurpose = "loc";
inline constexpr const char *kPermutationKeyPurpose = "permutation";

struct DecoyRecord {
    std::size_t position = 0;
    Basis basis = Basis::Z;
    std::uint8_t bit = 0;
    // Only Z-decoys carry message bits.
    std::optional<std::size_t> embeds_message_bit;
};

struct LocTable {
    std::vector<DecoyRecord> entries;

    bool positions_strictly_increasing() const {
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].position <= entries[i - 1].position) return false;
        return true;
    }
};

/// mapping[r] = original decoy index of the r-th returned decoy.
struct PermutationRecord {
    std::vector<std::size_t> mapping;

    bool is_bijection() const {
        std::vector<bool> seen(mapping.size(), false);
        for (auto v : mapping) {
            if (v >= mapping.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    PermutationRecord inverse() const {
        PermutationRecord inv{std::vector<std::size_t>(mapping.size())};
        for (std::size_t r = 0; r < mapping.size(); ++r) inv.mapping[mapping[r]] = r;
        return inv;
    }

    static PermutationRecord identity(std::size_t d) {
        PermutationRecord p{std::vector<std::size_t>(d)};
        std::iota(p.mapping.begin(), p.mapping.end(), std::size_t{0});
        return p;
    }
};

struct ErrorTally {
    std::size_t errors = 0;
    std::size_t checked = 0;

    double rate() const { return checked == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checked); }
};

enum class RoundVerdict { Continue, Abort };

struct DetectionReport {
    ErrorTally receiver_z;
    ErrorTally sender_z;
    ErrorTally sender_x;
    double threshold = 0.0;
    RoundVerdict verdict = RoundVerdict::Continue;
    DetectionMode mode = DetectionMode::Improved;

    /// Abort iff some performed check exceeds the threshold.
    void settle() {
        auto over = [&](const ErrorTally &t) { return t.checked > 0 && t.rate() > threshold; };
        verdict = (over(receiver_z) || over(sender_z) || over(sender_x)) ? RoundVerdict::Abort : RoundVerdict::Continue;
    }
};

struct DetectionParams {
    std::size_t d_z = 0;
    std::size_t d_x = 0;
    double threshold = 0.0;
    DetectionMode mode = DetectionMode::Improved;
};

/// Key bits one round consumes: only the inline variant encrypts.
inline std::size_t detection_key_budget(const DetectionParams &p) {
    if (p.mode != DetectionMode::ImprovedInlineOtp) return 0;
    const std::size_t d = p.d_z + p.d_x;
    return d * kLocEntryBits + d * kPermutationEntryBits;
}

// ---------------------------------------------------------------------------
// Sender preparation

/// Decoys in decoy-sequence order; `position` is the index within D until
/// interleave() assigns transmitted positions.
struct DecoySequence {
    std::vector<QubitHandle> qubits;
    std::vector<DecoyRecord> records;
};

inline DecoySequence build_decoys(RegisterBank &bank, Party &sender, std::size_t d_z, std::size_t d_x,
                                  const std::optional<BitString> &embedded_m, Rng &rng) {
    if (embedded_m && embedded_m->size() > d_z) {
        fail(ErrorCode::InvalidArgument, "cannot embed " + std::to_string(embedded_m->size()) + " message bits in " +
                                             std::to_string(d_z) + " Z-decoys");
    }
    std::vector<Basis> bases(d_z, Basis::Z);
    bases.resize(d_z + d_x, Basis::X);
    rng.shuffle(std::span<Basis>(bases));

    DecoySequence out;
    out.qubits.reserve(bases.size());
    out.records.reserve(bases.size());
    std::size_t z_seen = 0;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        DecoyRecord rec;
        rec.position = i;
        rec.basis = bases[i];
        if (bases[i] == Basis::Z && embedded_m && z_seen < embedded_m->size()) {
            rec.bit = (*embedded_m)[z_seen];
            rec.embeds_message_bit = z_seen;
        } else {
            rec.bit = rng.bit();
        }
        if (bases[i] == Basis::Z) ++z_seen;
        out.qubits.push_back(sender.prepare(bank, rec.basis, rec.bit));
        out.records.push_back(rec);
    }
    return out;
}

struct SlotRef {
    bool is_decoy = false;
    std::size_t index = 0;  // into carriers or into decoys
};

struct Transmission {
    std::vector<QubitHandle> sequence;
    std::vector<SlotRef> slots;
    std::vector<DecoyRecord> decoys;  // decoy order, transmitted positions
    LocTable loc_z;
    LocTable loc_x;
    std::size_t carrier_count = 0;
};

/// Places the decoys uniformly among the C(c+d, d) arrangements, keeping
/// the relative order of both the carriers and the decoys.
inline Transmission interleave(std::span<const QubitHandle> carriers, DecoySequence decoys, Rng &rng) {
    const std::size_t c = carriers.size();
    const std::size_t d = decoys.qubits.size();
    std::vector<std::size_t> slots(c + d);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(slots));
    std::vector<bool> is_decoy(c + d, false);
    for (std::size_t i = 0; i < d; ++i) is_decoy[slots[i]] = true;

    Transmission t;
    t.carrier_count = c;
    t.sequence.reserve(c + d);
    t.slots.reserve(c + d);
    std::size_t next_carrier = 0;
    std::size_t next_decoy = 0;
    for (std::size_t pos = 0; pos < c + d; ++pos) {
        if (is_decoy[pos]) {
            decoys.records[next_decoy].position = pos;
            t.sequence.push_back(decoys.qubits[next_decoy]);
            t.slots.push_back({true, next_decoy++});
        } else {
            t.sequence.push_back(carriers[next_carrier]);
            t.slots.push_back({false, next_carrier++});
        }
    }
    t.decoys = std::move(decoys.records);
    for (const auto &r : t.decoys) (r.basis == Basis::Z ? t.loc_z : t.loc_x).entries.push_back(r);
    return t;
}

// ---------------------------------------------------------------------------
// Wire encodings

/// One entry per decoy in position order: 16-bit big-endian position, basis
/// bit (0 = Z), value bit. X-decoy values are withheld and sent as 0.
inline BitString encode_loc_announcement(std::span<const DecoyRecord> decoys) {
    BitString out;
    out.reserve(decoys.size() * kLocEntryBits);
    std::size_t last = 0;
    for (std::size_t i = 0; i < decoys.size(); ++i) {
        const auto &r = decoys[i];
        if (r.position >= (std::size_t{1} << kPositionBits)) {
            fail(ErrorCode::BadEncoding, "position " + std::to_string(r.position) + " does not fit in 16 bits");
        }
        if (i > 0 && r.position <= last) fail(ErrorCode::BadEncoding, "announcement positions must increase");
        last = r.position;
        out.append_uint(r.position, kPositionBits);
        out.push_back(r.basis == Basis::Z ? 0 : 1);
        out.push_back(r.basis == Basis::Z ? r.bit : 0);
    }
    return out;
}

inline std::vector<DecoyRecord> decode_loc_announcement(const BitString &bits) {
    if (bits.size() % kLocEntryBits != 0) {
        fail(ErrorCode::BadEncoding, "announcement of " + std::to_string(bits.size()) + " bits is not a whole number of entries");
    }
    std::vector<DecoyRecord> out;
    out.reserve(bits.size() / kLocEntryBits);
    for (std::size_t off = 0; off < bits.size(); off += kLocEntryBits) {
        DecoyRecord r;
        r.position = bits.to_uint(off, kPositionBits);
        r.basis = bits[off + kPositionBits] ? Basis::X : Basis::Z;
        r.bit = bits[off + kPositionBits + 1];
        if (!out.empty() && r.position <= out.back().position) {
            fail(ErrorCode::BadEncoding, "announced positions are not strictly increasing");
        }
        out.push_back(r);
    }
    return out;
}

/// d entries of 16-bit big-endian original indices, in returned order.
inline BitString encode_permutation(const PermutationRecord &perm) {
    BitString out;
    out.reserve(perm.mapping.size() * kPermutationEntryBits);
    for (auto v : perm.mapping) {
        if (v >= (std::size_t{1} << kPermutationEntryBits)) fail(ErrorCode::BadEncoding, "permutation index too large");
        out.append_uint(v, kPermutationEntryBits);
    }
    return out;
}

inline PermutationRecord decode_permutation(const BitString &bits, std::size_t expected_count) {
    if (bits.size() != expected_count * kPermutationEntryBits) {
        fail(ErrorCode::BadEncoding, "permutation announcement has " + std::to_string(bits.size()) + " bits, expected " +
                                         std::to_string(expected_count * kPermutationEntryBits));
    }
    PermutationRecord p;
    p.mapping.reserve(expected_count);
    for (std::size_t off = 0; off < bits.size(); off += kPermutationEntryBits)
        p.mapping.push_back(bits.to_uint(off, kPermutationEntryBits));
    if (!p.is_bijection()) fail(ErrorCode::PermutationMismatch, "announced mapping is not a bijection");
    return p;
}

// ---------------------------------------------------------------------------
// Receiver steps

struct ZCheckResult {
    ErrorTally tally;
    BitString measured;  // in loc_z order
};

/// Receiver measures the announced Z-decoys in Z; with `compare` it also
/// counts mismatches against the announced values. The decoys stay in their
/// post-measurement states.
inline ZCheckResult bob_z_check(RegisterBank &bank, Party &receiver, std::span<const QubitHandle> received,
                                const LocTable &loc_z, bool compare, Rng &rng) {
    ZCheckResult out;
    for (const auto &e : loc_z.entries) {
        if (e.position >= received.size()) fail(ErrorCode::InvalidArgument, "Z-decoy position beyond received sequence");
        const auto bit = receiver.measure(bank, received[e.position], Basis::Z, rng);
        out.measured.push_back(bit);
        if (compare) {
            ++out.tally.checked;
            if (bit != e.bit) ++out.tally.errors;
        }
    }
    if (compare) receiver.note(PrimitiveOp::ClassicalCompute);
    return out;
}

struct ExtractResult {
    std::vector<QubitHandle> returned;
    PermutationRecord perm;
    std::vector<QubitHandle> kept;  // non-decoy qubits, in received order
};

/// Pulls every decoy out of the received sequence, shuffles them (when
/// `shuffle`), and reflects them. `decoy_positions` must be increasing.
inline ExtractResult extract_shuffle_return(Party &receiver, std::span<const QubitHandle> received,
                                            std::span<const std::size_t> decoy_positions, bool shuffle, Rng &rng) {
    ExtractResult out;
    std::vector<QubitHandle> decoys;
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < received.size(); ++pos) {
        if (next < decoy_positions.size() && decoy_positions[next] == pos) {
            decoys.push_back(received[pos]);
            ++next;
        } else {
            out.kept.push_back(received[pos]);
        }
    }
    if (next != decoy_positions.size()) fail(ErrorCode::InvalidArgument, "decoy positions not increasing or out of range");

    out.perm = PermutationRecord::identity(decoys.size());
    if (shuffle) {
        receiver.note(PrimitiveOp::Reorder);
        rng.shuffle(std::span<std::size_t>(out.perm.mapping));
    }
    out.returned.reserve(decoys.size());
    for (auto orig : out.perm.mapping) {
        receiver.note(PrimitiveOp::Reflect);
        out.returned.push_back(decoys[orig]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sender check

struct SenderCheckResult {
    ErrorTally z;
    ErrorTally x;
};

/// Restores the decoy order and measures each decoy in its prepared basis.
inline SenderCheckResult alice_final_check(RegisterBank &bank, Party &sender, std::span<const QubitHandle> returned,
                                           const PermutationRecord &perm, const LocTable &loc_z, const LocTable &loc_x,
                                           Rng &rng) {
    std::vector<DecoyRecord> decoys;
    decoys.reserve(loc_z.entries.size() + loc_x.entries.size());
    decoys.insert(decoys.end(), loc_z.entries.begin(), loc_z.entries.end());
    decoys.insert(decoys.end(), loc_x.entries.begin(), loc_x.entries.end());
    std::sort(decoys.begin(), decoys.end(), [](const auto &a, const auto &b) { return a.position < b.position; });

    if (perm.mapping.size() != decoys.size() || returned.size() != decoys.size()) {
        fail(ErrorCode::PermutationMismatch, "permutation covers " + std::to_string(perm.mapping.size()) + " decoys, " +
                                                 std::to_string(returned.size()) + " returned, " +
                                                 std::to_string(decoys.size()) + " sent");
    }
    if (!perm.is_bijection()) fail(ErrorCode::PermutationMismatch, "permutation is not a bijection");

    std::vector<QubitHandle> restored(decoys.size());
    for (std::size_t r = 0; r < returned.size(); ++r) restored[perm.mapping[r]] = returned[r];

    SenderCheckResult out;
    for (std::size_t j = 0; j < decoys.size(); ++j) {
        const auto bit = sender.measure(bank, restored[j], decoys[j].basis, rng);
        auto &tally = decoys[j].basis == Basis::Z ? out.z : out.x;
        ++tally.checked;
        if (bit != decoys[j].bit) ++tally.errors;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Round orchestration

struct DetectionContext {
    RegisterBank &bank;
    Party &sender;
    Party &receiver;
    Channel &channel;
    DetectionParams params;
    Rng &sender_rng;
    Rng &receiver_rng;
    // Required for ImprovedInlineOtp only.
    KeyStore *sender_key = nullptr;
    KeyStore *receiver_key = nullptr;
};

struct DetectionOutcome {
    DetectionReport report;
    std::vector<QubitHandle> receiver_carriers;
    // Receiver's Z-decoy results in announcement order; empty if it never measured.
    BitString receiver_z_bits;
};

/// Sender side of steps 1-2: decoys plus interleaving with the carriers.
inline Transmission prepare_transmission(RegisterBank &bank, Party &sender, std::span<const QubitHandle> carriers,
                                         const DetectionParams &params, const std::optional<BitString> &embedded_m,
                                         Rng &rng) {
    auto decoys = build_decoys(bank, sender, params.d_z, params.d_x, embedded_m, rng);
    return interleave(carriers, std::move(decoys), rng);
}

/// Runs the exchange for an already prepared transmission, tapping both legs.
inline DetectionOutcome run_detection_exchange(DetectionContext &ctx, const Transmission &tx) {
    const auto mode = ctx.params.mode;
    const bool inline_otp = mode == DetectionMode::ImprovedInlineOtp;
    if (inline_otp && (!ctx.sender_key || !ctx.receiver_key)) {
        fail(ErrorCode::InvalidArgument, "inline OTP detection needs both key stores");
    }
    const auto &A = ctx.sender.name();
    const auto &B = ctx.receiver.name();

    DetectionOutcome out;
    out.report.mode = mode;
    out.report.threshold = ctx.params.threshold;

    std::vector<DecoyRecord> by_position = tx.decoys;
    std::sort(by_position.begin(), by_position.end(), [](const auto &a, const auto &b) { return a.position < b.position; });
    const BitString loc_plain = encode_loc_announcement(by_position);

    // Forward leg.
    ctx.channel.send_quantum(TapPoint::ForwardAliceToTrent, ctx.bank, tx.sequence, A, B, labels::kForwardSequence);
    BitString loc_received;
    if (inline_otp) {
        const auto ct = otp_encrypt(*ctx.sender_key, kLocKeyPurpose, loc_plain);
        ctx.channel.publish(A, B, labels::kLocAnnouncement, ct.bits, "otp");
        loc_received = otp_decrypt(*ctx.receiver_key, ct);
    } else {
        ctx.receiver.note(PrimitiveOp::ClassicalCompute);
        ctx.channel.publish(B, A, labels::kReceiptConfirmation, BitString{1});
        ctx.channel.publish(A, B, labels::kLocAnnouncement, loc_plain, "plaintext");
        loc_received = loc_plain;
    }

    // Receiver side.
    ctx.receiver.note(PrimitiveOp::ClassicalCompute);
    const auto announced = decode_loc_announcement(loc_received);
    LocTable rx_loc_z;
    std::vector<std::size_t> decoy_positions;
    for (const auto &r : announced) {
        decoy_positions.push_back(r.position);
        if (r.basis == Basis::Z) rx_loc_z.entries.push_back(r);
    }
    ctx.receiver.note(PrimitiveOp::Delay);

    if (mode != DetectionMode::DirectReflection) {
        const bool compare = mode != DetectionMode::MeasureThenReturn;
        auto z = bob_z_check(ctx.bank, ctx.receiver, tx.sequence, rx_loc_z, compare, ctx.receiver_rng);
        out.report.receiver_z = z.tally;
        out.receiver_z_bits = std::move(z.measured);
        if (ctx.channel.recording())
            ctx.channel.record({EventKind::Measurement, B, B, "receiver_z_check",
                            std::to_string(out.report.receiver_z.errors) + "/" +
                                std::to_string(out.report.receiver_z.checked),
                            compare ? "compared" : "not compared"});
        out.report.settle();
        if (out.report.verdict == RoundVerdict::Abort) {
            if (ctx.channel.recording())
                ctx.channel.record({EventKind::Verdict, B, A, "detection_verdict", "abort", "receiver Z-check"});
            return out;
        }
    }

    const bool shuffle = mode != DetectionMode::DirectReflection;
    auto extracted = extract_shuffle_return(ctx.receiver, tx.sequence, decoy_positions, shuffle, ctx.receiver_rng);
    out.receiver_carriers = std::move(extracted.kept);

    // Return leg.
    ctx.channel.send_quantum(TapPoint::ReturnTrentToAlice, ctx.bank, extracted.returned, B, A, labels::kReturnedDecoys);
    PermutationRecord perm_at_sender;
    if (mode == DetectionMode::DirectReflection) {
        perm_at_sender = PermutationRecord::identity(extracted.returned.size());
    } else if (inline_otp) {
        ctx.receiver.note(PrimitiveOp::ClassicalCompute);
        const auto ct = otp_encrypt(*ctx.receiver_key, kPermutationKeyPurpose, encode_permutation(extracted.perm));
        ctx.channel.publish(B, A, labels::kPermutationAnnouncement, ct.bits, "otp");
        perm_at_sender = decode_permutation(otp_decrypt(*ctx.sender_key, ct), extracted.returned.size());
    } else {
        ctx.channel.publish(A, B, labels::kReturnConfirmation, BitString{1});
        ctx.receiver.note(PrimitiveOp::ClassicalCompute);
        const auto bits = encode_permutation(extracted.perm);
        ctx.channel.publish(B, A, labels::kPermutationAnnouncement, bits, "plaintext");
        perm_at_sender = decode_permutation(bits, extracted.returned.size());
    }

    const auto check = alice_final_check(ctx.bank, ctx.sender, extracted.returned, perm_at_sender, tx.loc_z, tx.loc_x,
                                         ctx.sender_rng);
    out.report.sender_z = check.z;
    out.report.sender_x = check.x;
    out.report.settle();
    if (!ctx.channel.recording()) return out;
    ctx.channel.record({EventKind::Measurement, A, A, "sender_check",
                        "z " + std::to_string(check.z.errors) + "/" + std::to_string(check.z.checked) + " x " +
                            std::to_string(check.x.errors) + "/" + std::to_string(check.x.checked),
                        ""});
    ctx.channel.record({EventKind::Verdict, A, B, "detection_verdict",
                        out.report.verdict == RoundVerdict::Abort ? "abort" : "continue", "sender check"});
    return out;
}

/// A stand-alone round: the sender ships `n_carriers` carrier halves of
/// Bell pairs with the decoys to a classical receiver.
inline DetectionReport run_detection_round(const DetectionParams &params, const AttackStrategy &attack,
                                           std::size_t n_carriers, double noise_p, Rng &rng,
                                           RunTranscript *transcript = nullptr) {
    RegisterBank bank;
    Party alice("alice", PartyKind::Quantum);
    Party bob("bob", PartyKind::Classical);
    Adversary eve(attack);
    Channel channel(eve, rng.split(Stream::Adversary), noise_p, rng.split(Stream::Noise), transcript);
    Rng alice_rng = rng.split(Stream::Alice);
    Rng bob_rng = rng.split(Stream::Bob);

    std::vector<QubitHandle> carriers;
    for (std::size_t i = 0; i < n_carriers; ++i)
        carriers.push_back(alice.prepare_bell_pair(bank, alice_rng.bit()).first);

    Rng key_rng = rng.split(Stream::Key);
    KeyStore alice_key = keygen_init(detection_key_budget(params), key_rng);
    KeyStore bob_key = alice_key;

    const auto tx = prepare_transmission(bank, alice, carriers, params, std::nullopt, alice_rng);
    DetectionContext ctx{bank, alice, bob, channel, params, alice_rng, bob_rng, &alice_key, &bob_key};
    return run_detection_exchange(ctx, tx).report;
}

}  // namespace sqs
