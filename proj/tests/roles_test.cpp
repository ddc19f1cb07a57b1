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

#include <array>
#include <set>

#include "gtest/gtest.h"
#include "sqs/protocol.hpp"
#include "test_util.hpp"

using namespace sqs;

namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no sqs::Error thrown";
    return ErrorCode::InvariantFailure;
}

ProtocolConfig honest(std::size_t n) {
    ProtocolConfig cfg;
    cfg.n = n;
    cfg.detection = {n, n, 0.0, DetectionMode::Improved};
    return cfg;
}

}  // namespace

// --- key store and one-time pad ---------------------------------------------

TEST(KeyStore, allocations_advance_and_stay_disjoint) {
    KeyStore k(BitString::parse("1011001110"));
    const auto a = k.allocate("a", 3);
    const auto b = k.allocate("b", 4);
    EXPECT_EQ(a.begin, 0u);
    EXPECT_EQ(a.end, 3u);
    EXPECT_EQ(b.begin, 3u);
    EXPECT_EQ(k.cursor(), 7u);
    EXPECT_EQ(k.remaining(), 3u);
    EXPECT_EQ(k.segment_bits(b).str(), "1001");
    EXPECT_TRUE(k.segments_disjoint());
}

TEST(KeyStore, rejects_reuse_and_exhaustion) {
    KeyStore k(BitString(8));
    k.allocate("a", 4);
    EXPECT_EQ(code_of([&] { k.allocate_range("b", 2, 2); }), ErrorCode::ReuseAttempt);
    EXPECT_EQ(code_of([&] { k.allocate("c", 5); }), ErrorCode::KeyExhausted);
    EXPECT_EQ(k.cursor(), 4u);
    EXPECT_TRUE(k.segments_disjoint());
}

TEST(KeyStore, otp_round_trip) {
    Rng rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        KeyStore alice = keygen_init(64, rng);
        KeyStore bob = alice;
        const auto pt = BitString::random(1 + rep % 40, rng);
        const auto ct = otp_encrypt(alice, "loc", pt);
        EXPECT_EQ(ct.bits.size(), pt.size());
        EXPECT_EQ(otp_decrypt(bob, ct), pt);
        EXPECT_EQ(alice.cursor(), bob.cursor());
    }
}

TEST(KeyStore, otp_refuses_second_use_of_a_range) {
    KeyStore k(BitString(16));
    const auto ct = otp_encrypt_at(k, "loc", 0, BitString::parse("1111"));
    EXPECT_EQ(ct.bits.str(), "1111");
    EXPECT_EQ(code_of([&] { otp_encrypt_at(k, "loc", 0, BitString::parse("0000")); }), ErrorCode::ReuseAttempt);
    KeyStore peer(BitString(16));
    OtpCiphertext bad{ct.segment, BitString::parse("111")};
    EXPECT_EQ(code_of([&] { otp_decrypt(peer, bad); }), ErrorCode::LengthMismatch);
}

TEST(KeyStore, keygen_is_uniform) {
    Rng rng(22);
    const auto k = keygen_init(100000, rng);
    EXPECT_TRUE(test::within_3_sigma(k.bits().popcount(), k.size(), 0.5));
}

// --- capability -------------------------------------------------------------

TEST(Party, classical_party_cannot_leave_the_z_basis) {
    RegisterBank bank;
    Party bob(kBob, PartyKind::Classical);
    Rng rng(1);
    const auto h = bob.prepare(bank, Basis::Z, 1);
    EXPECT_EQ(bob.measure(bank, h, Basis::Z, rng), 1);
    EXPECT_EQ(code_of([&] { bob.prepare(bank, Basis::X, 0); }), ErrorCode::CapabilityViolation);
    EXPECT_EQ(code_of([&] { bob.measure(bank, h, Basis::X, rng); }), ErrorCode::CapabilityViolation);
    EXPECT_EQ(code_of([&] { bob.apply(bank, h, gates::H()); }), ErrorCode::CapabilityViolation);
    EXPECT_EQ(code_of([&] { bob.prepare_bell_pair(bank, 0); }), ErrorCode::CapabilityViolation);
    const std::vector<PrimitiveOp> want{PrimitiveOp::PrepareZ, PrimitiveOp::MeasureZ};
    EXPECT_EQ(bob.op_log(), want);
    EXPECT_TRUE(bob.log_respects_capability());
}

TEST(Party, classical_permitted_set) {
    const std::set<PrimitiveOp> allowed{PrimitiveOp::PrepareZ, PrimitiveOp::MeasureZ, PrimitiveOp::Reflect,
                                        PrimitiveOp::Reorder,  PrimitiveOp::Delay,    PrimitiveOp::ClassicalCompute};
    for (int i = 0; i <= static_cast<int>(PrimitiveOp::ClassicalCompute); ++i) {
        const auto op = static_cast<PrimitiveOp>(i);
        EXPECT_EQ(classical_permits(op), allowed.count(op) == 1) << to_string(op);
    }
}

TEST(Party, quantum_party_may_do_anything) {
    RegisterBank bank;
    Party alice(kAlice, PartyKind::Quantum);
    Rng rng(2);
    const auto h = alice.prepare(bank, Basis::X, 1);
    alice.apply(bank, h, gates::H());
    EXPECT_EQ(alice.measure(bank, h, Basis::Z, rng), 1);
    EXPECT_TRUE(alice.log_respects_capability());
}

// --- signing ----------------------------------------------------------------

TEST(Signing, compute_g_examples) {
    EXPECT_EQ(compute_g(BitString::parse("0"), BitString::parse("0")).str(), "0");
    EXPECT_EQ(compute_g(BitString::parse("1"), BitString::parse("0")).str(), "1");
    EXPECT_EQ(compute_g(BitString::parse("1010"), BitString::parse("0110")).str(), "1100");
    EXPECT_EQ(code_of([] { compute_g(BitString::parse("10"), BitString::parse("1")); }), ErrorCode::LengthMismatch);
}

TEST(Signing, alice_sign_prepares_bell_pair_per_g) {
    for (int m = 0; m < 2; ++m) {
        KeyStore store(BitString::parse("0"));
        RegisterBank bank;
        Party alice(kAlice, PartyKind::Quantum);
        const auto out = alice_sign(BitString::from_uint(m, 1), store, bank, alice);
        EXPECT_EQ(out.g[0], m);
        ASSERT_EQ(out.t_sequence.size(), 1u);
        ASSERT_EQ(out.bundle.b_sequence.size(), 1u);
        EXPECT_EQ(out.t_sequence[0].reg, out.bundle.b_sequence[0].reg);
        EXPECT_EQ(bank.role(out.t_sequence[0]), QubitRole::TrentHalf);
        EXPECT_EQ(bank.role(out.bundle.b_sequence[0]), QubitRole::BobHalf);
        EXPECT_TRUE(equal_up_to_phase(bank.state(out.t_sequence[0]), prepare_bell(static_cast<std::uint8_t>(m))));
        EXPECT_EQ(store.segments().front().purpose, kSigningKeyPurpose);
    }
}

TEST(Signing, alice_sign_needs_key) {
    KeyStore store(BitString::parse("01"));
    RegisterBank bank;
    Party alice(kAlice, PartyKind::Quantum);
    EXPECT_EQ(code_of([&] { alice_sign(BitString::parse("011"), store, bank, alice); }), ErrorCode::LengthMismatch);
}

TEST(Signing, bob_measure_follows_partner) {
    Rng rng(3);
    for (std::uint8_t g : {0, 1}) {
        for (int i = 0; i < 500; ++i) {
            RegisterBank bank;
            Party trent(kTrent, PartyKind::Classical);
            Party bob(kBob, PartyKind::Classical);
            const auto h = bank.add(prepare_bell(g));
            const auto t = trent.measure(bank, h[0], Basis::Z, rng);
            const auto b = bob_measure({BitString(1), {h[1]}}, bank, bob, rng);
            ASSERT_EQ(b[0], t ^ g);
            ASSERT_EQ(bob.op_log(), std::vector<PrimitiveOp>{PrimitiveOp::MeasureZ});
        }
    }
}

TEST(Signing, unmeasured_halves_are_uniform) {
    Rng rng(4);
    const std::size_t n = 100000;
    std::size_t t_ones = 0, b_ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
        RegisterBank bank;
        const auto h = bank.add(prepare_bell(static_cast<std::uint8_t>(i & 1)));
        RegisterBank other = bank;
        t_ones += bank.measure(h[0], Basis::Z, rng);
        b_ones += other.measure(h[1], Basis::Z, rng);
    }
    EXPECT_TRUE(test::within_3_sigma(t_ones, n, 0.5)) << t_ones;
    EXPECT_TRUE(test::within_3_sigma(b_ones, n, 0.5)) << b_ones;
}

TEST(Signing, trent_receive_recovers_message_and_g) {
    Rng rng(5);
    RegisterBank bank;
    Party trent(kTrent, PartyKind::Classical);
    std::vector<QubitHandle> carriers;
    for (int i = 0; i < 3; ++i) carriers.push_back(bank.add(prepare_bell(0))[0]);
    const auto r = trent_receive(bank, trent, carriers, BitString::parse("10111"), BitString::parse("110"), rng);
    EXPECT_EQ(r.recovered_m.str(), "101");
    EXPECT_EQ(r.g.str(), "011");
    EXPECT_EQ(r.t_bits.size(), 3u);
    EXPECT_TRUE(trent.log_respects_capability());
    EXPECT_EQ(code_of([&] {
                  trent_receive(bank, trent, carriers, BitString::parse("10"), BitString::parse("110"), rng);
              }),
              ErrorCode::InvalidArgument);
}

TEST(Verification, table_of_all_eight_combinations) {
    const auto hash = default_hash();
    int passes = 0;
    for (int g = 0; g < 2; ++g)
        for (int t = 0; t < 2; ++t)
            for (int b = 0; b < 2; ++b) {
                const auto out = trent_verify(BitString::from_uint(g, 1), BitString::from_uint(t, 1),
                                              BitString::from_uint(b, 1), BitString::parse("1"), hash);
                // g = 0: T and B agree; g = 1: they differ.
                const bool want = g == 0 ? t == b : t != b;
                EXPECT_EQ(out.verdict == Verdict::Yes, want) << g << t << b;
                EXPECT_EQ(out.failing_positions.empty(), want);
                EXPECT_EQ(out.digest.has_value(), want);
                passes += want;
            }
    EXPECT_EQ(passes, 4);
}

TEST(Verification, reports_every_failing_position) {
    const auto out = trent_verify(BitString::parse("0101"), BitString::parse("0011"), BitString::parse("1111"),
                                  BitString::parse("0000"), default_hash());
    EXPECT_EQ(out.verdict, Verdict::No);
    EXPECT_EQ(out.failing_positions, (std::vector<std::size_t>{0, 3}));
    EXPECT_EQ(code_of([] {
                  trent_verify(BitString::parse("01"), BitString::parse("0"), BitString::parse("01"), {}, default_hash());
              }),
              ErrorCode::LengthMismatch);
}

TEST(Verification, bob_accept_cases) {
    const auto hash = default_hash();
    const auto m = BitString::parse("1100");
    const auto yes = trent_verify(BitString::parse("0000"), BitString::parse("1010"), BitString::parse("1010"), m, hash);
    ASSERT_EQ(yes.verdict, Verdict::Yes);
    EXPECT_EQ(*yes.digest, hash(m));
    EXPECT_EQ(bob_accept(m, yes, hash), Decision::Accept);
    EXPECT_EQ(bob_accept(BitString::parse("1101"), yes, hash), Decision::Reject);
    VerificationOutcome no;
    EXPECT_EQ(bob_accept(m, no, hash), Decision::Reject);
}

TEST(Hash, default_is_deterministic_and_total) {
    const auto h = default_hash();
    EXPECT_EQ(h.digest_bits, 256u);
    const auto m = BitString::parse("10110");
    EXPECT_EQ(h(m), h(m));
    EXPECT_EQ(h(m).size(), 256u);
    EXPECT_EQ(h(BitString{}).size(), 256u);
    Rng rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        auto a = BitString::random(1 + rep % 64, rng);
        auto b = a;
        b.flip(rep % a.size());
        EXPECT_NE(h(a), h(b));
    }
}

TEST(Hash, toy_hash_has_collisions) {
    const auto h = toy_hash8();
    EXPECT_EQ(h.digest_bits, 8u);
    Rng rng(7);
    std::set<std::string> seen;
    bool collided = false;
    for (int i = 0; i < 300 && !collided; ++i) collided = !seen.insert(h(BitString::random(32, rng)).str()).second;
    EXPECT_TRUE(collided);
}

// --- end-to-end -------------------------------------------------------------

TEST(Protocol, honest_run_accepts) {
    for (std::size_t n : {1u, 4u, 16u}) {
        RunTranscript transcript;
        const auto run = run_protocol(honest(n), Rng(100 + n), &transcript);
        EXPECT_FALSE(run.aborted);
        EXPECT_TRUE(run.trent_yes());
        EXPECT_TRUE(run.bob_accepted());
        EXPECT_EQ(run.recovered_m, run.message);
        EXPECT_EQ(run.g_trent, run.g);
        ASSERT_TRUE(run.evidence.has_value());
        EXPECT_EQ(run.evidence->b_bits, run.evidence->t_bits ^ run.g_trent);
        EXPECT_EQ(run.evidence->message, run.message);
        EXPECT_TRUE(run.capability_respected);
        EXPECT_TRUE(run.key_segments_disjoint);
        EXPECT_TRUE(transcript.respects_four_message_causality());
        EXPECT_GE(transcript.index_of("verdict_yes"), 0);
    }
}

TEST(Protocol, exhaustive_message_and_key_sweep) {
    std::size_t runs = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::uint64_t m = 0; m < (1u << n); ++m) {
            for (std::uint64_t k = 0; k < (1u << n); ++k) {
                auto cfg = honest(n);
                cfg.message = BitString::from_uint(m, n);
                cfg.signing_key = BitString::from_uint(k, n);
                const auto run = run_protocol(cfg, Rng(m * 131 + k * 7 + n));
                ASSERT_TRUE(run.trent_yes() && run.bob_accepted()) << "n=" << n << " m=" << m << " k=" << k;
                ASSERT_EQ(run.g, BitString::from_uint(m ^ k, n));
                ++runs;
            }
        }
    }
    EXPECT_EQ(runs, 4u + 16u + 64u + 256u);
}

TEST(Protocol, classical_parties_stay_classical) {
    const auto run = run_protocol(honest(8), Rng(9));
    for (auto op : run.bob_ops) EXPECT_TRUE(classical_permits(op)) << to_string(op);
    for (auto op : run.trent_ops) EXPECT_TRUE(classical_permits(op)) << to_string(op);
    EXPECT_FALSE(run.alice_ops.empty());
}

TEST(Protocol, key_budget_is_exact) {
    const auto cfg = honest(8);
    EXPECT_EQ(key_budget(cfg), 8 + detection_key_budget(cfg.detection));
    auto inline_cfg = cfg;
    inline_cfg.detection.mode = DetectionMode::ImprovedInlineOtp;
    EXPECT_GT(key_budget(inline_cfg), key_budget(cfg));
    const auto run = run_protocol(inline_cfg, Rng(10));
    EXPECT_TRUE(run.bob_accepted());
    EXPECT_TRUE(run.key_segments_disjoint);
}

TEST(Protocol, rejects_configs_that_cannot_carry_the_message) {
    auto cfg = honest(8);
    cfg.detection.d_z = 4;
    EXPECT_EQ(code_of([&] { run_protocol(cfg, Rng(1)); }), ErrorCode::ConfigError);
    cfg = honest(4);
    cfg.message = BitString::parse("101");
    EXPECT_EQ(code_of([&] { run_protocol(cfg, Rng(1)); }), ErrorCode::LengthMismatch);
    cfg = honest(4);
    cfg.signing_key = BitString::parse("10101");
    EXPECT_EQ(code_of([&] { run_protocol(cfg, Rng(1)); }), ErrorCode::LengthMismatch);
}

TEST(Protocol, same_seed_same_run) {
    const auto a = run_protocol(honest(8), Rng(77));
    const auto b = run_protocol(honest(8), Rng(77));
    EXPECT_EQ(a.message, b.message);
    EXPECT_EQ(a.t_bits, b.t_bits);
    EXPECT_EQ(a.b_bits, b.b_bits);
    const auto c = run_protocol(honest(8), Rng(78));
    EXPECT_FALSE(a.message == c.message && a.t_bits == c.t_bits);
}
