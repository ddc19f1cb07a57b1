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

#include "gtest/gtest.h"
#include "oracles.hpp"
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

ProtocolConfig attacked(std::size_t n, AttackStrategy a, DetectionMode mode = DetectionMode::Improved) {
    ProtocolConfig cfg;
    cfg.n = n;
    cfg.detection = {n, n, 0.0, mode};
    cfg.attack = std::move(a);
    return cfg;
}

std::size_t probe_aborts(std::size_t dz, std::size_t dx, std::size_t rounds, std::uint64_t seed) {
    const Rng root(seed);
    std::size_t aborts = 0;
    for (std::size_t i = 0; i < rounds; ++i) {
        Rng rng = root.split(i);
        aborts += run_detection_round({dz, dx, 0.0, DetectionMode::Improved}, AttackStrategy::entangle_probe(), 0, 0.0,
                                      rng)
                      .verdict == RoundVerdict::Abort;
    }
    return aborts;
}

}  // namespace

TEST(Strategy, constructors_validate_operations) {
    EXPECT_EQ(code_of([] { AttackStrategy::unitary_tamper("bad", Operator(2, {1.0, 1.0, 0.0, 1.0})); }),
              ErrorCode::NonUnitary);
    EXPECT_EQ(code_of([] { AttackStrategy::unitary_tamper("cnot", gates::CNOT()); }), ErrorCode::NonUnitary);
    EXPECT_EQ(code_of([] { AttackStrategy::entangle_probe(ProbeTiming::AfterReturn, gates::X()); }),
              ErrorCode::NonUnitary);
    EXPECT_EQ(AttackStrategy::pauli_x_tamper().tamper_op().dim(), 2u);
    EXPECT_FALSE(AttackStrategy::none().describe().empty());
}

TEST(Forge, guess_is_uniform) {
    Rng rng(1);
    std::size_t ones = 0;
    const std::size_t n = 64;
    const std::size_t reps = 2000;
    for (std::size_t i = 0; i < reps; ++i) ones += forge_signature(n, BitString(n), rng).popcount();
    EXPECT_TRUE(test::within_3_sigma(ones, n * reps, 0.5));
    EXPECT_EQ(code_of([&] { forge_signature(4, BitString(3), rng); }), ErrorCode::LengthMismatch);
}

TEST(Forge, acceptance_halves_per_bit) {
    for (std::size_t n : {1u, 2u, 3u}) {
        const auto cfg = attacked(n, AttackStrategy::forge_from_scratch());
        const Rng root(40 + n);
        std::size_t yes = 0;
        const std::size_t trials = 20000;
        for (std::size_t i = 0; i < trials; ++i) yes += run_protocol(cfg, root.split(i)).trent_yes();
        EXPECT_TRUE(test::within_3_sigma(yes, trials, std::pow(0.5, static_cast<double>(n)))) << n << ": " << yes;
    }
}

TEST(TamperB, flips_exactly_the_listed_positions) {
    RegisterBank bank;
    Party alice(kAlice, PartyKind::Quantum);
    KeyStore key(BitString(4));
    Rng rng(2);
    const auto out = alice_sign(BitString::parse("0000"), key, bank, alice);
    std::vector<std::size_t> pos{1, 3};
    tamper_b_sequence(bank, out.bundle, pos);
    for (std::size_t i = 0; i < 4; ++i) {
        const bool flipped = i == 1 || i == 3;
        EXPECT_TRUE(equal_up_to_phase(bank.state(out.bundle.b_sequence[i]), prepare_bell(flipped ? 1 : 0))) << i;
    }
    const std::vector<std::size_t> far{4};
    EXPECT_EQ(code_of([&] { tamper_b_sequence(bank, out.bundle, far); }), ErrorCode::InvalidArgument);
}

TEST(TamperB, trent_fails_exactly_the_tampered_positions) {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < 8; ++i)
            if (rng.bit()) pos.push_back(i);
        if (pos.empty()) pos.push_back(rng.below(8));
        const auto run = run_protocol(attacked(8, AttackStrategy::tamper_signature_b(pos)), Rng(500 + rep));
        ASSERT_FALSE(run.aborted);
        ASSERT_TRUE(run.verification.has_value());
        EXPECT_EQ(run.verification->verdict, Verdict::No);
        EXPECT_EQ(run.verification->failing_positions, pos);
        EXPECT_FALSE(run.bob_accepted());
        EXPECT_FALSE(run.evidence.has_value());
    }
}

TEST(TamperMessage, bob_rejects) {
    for (std::size_t flip = 0; flip < 8; ++flip) {
        const auto run = run_protocol(attacked(8, AttackStrategy::tamper_classical_message({flip})), Rng(600 + flip));
        EXPECT_TRUE(run.trent_yes());
        EXPECT_NE(run.m_at_bob, run.message);
        EXPECT_EQ(run.bob_decision, Decision::Reject);
    }
    EXPECT_EQ(code_of([] { run_protocol(attacked(4, AttackStrategy::tamper_classical_message({4})), Rng(1)); }),
              ErrorCode::InvalidArgument);
}

TEST(TamperMessage, toy_hash_collision_lets_it_through) {
    // With an 8-bit digest some edits collide; the check is only as strong
    // as the hash.
    auto hash = toy_hash8();
    const auto m = BitString::parse("1010000000000000");
    std::optional<std::size_t> colliding;
    for (std::size_t w = 0; w < 1u << 16 && !colliding; ++w) {
        auto other = BitString::from_uint(w, 16);
        if (other != m && hash(other) == hash(m)) colliding = w;
    }
    ASSERT_TRUE(colliding.has_value());
    const auto other = BitString::from_uint(*colliding, 16);
    std::vector<std::size_t> flips;
    for (std::size_t i = 0; i < 16; ++i)
        if (other[i] != m[i]) flips.push_back(i);
    auto cfg = attacked(16, AttackStrategy::tamper_classical_message(flips));
    cfg.message = m;
    cfg.hash = hash;
    EXPECT_TRUE(run_protocol(cfg, Rng(7)).bob_accepted());
}

TEST(Probe, cnot_copies_z_basis) {
    RegisterBank bank;
    Rng rng(4);
    for (std::uint8_t bit : {0, 1}) {
        const auto h = bank.add_single(prepare_single(Basis::Z, bit));
        const auto a = entangle_probe_attack(bank, h);
        EXPECT_EQ(bank.role(a), QubitRole::EveAncilla);
        EXPECT_EQ(bank.measure(a, Basis::Z, rng), bit);
        EXPECT_EQ(bank.measure(h, Basis::Z, rng), bit);
    }
}

TEST(Probe, plus_state_becomes_bell_pair) {
    RegisterBank bank;
    const auto h = bank.add_single(prepare_single(Basis::X, 0));
    entangle_probe_attack(bank, h);
    const auto &s = bank.state(h);
    ASSERT_EQ(s.num_qubits(), 2u);
    EXPECT_NEAR(std::abs(s.amplitude(0)), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(3)), 1 / std::sqrt(2.0), 1e-12);
    const auto rho = bank.reduced(h);
    EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-12);
}

TEST(Probe, oracle_closed_form_small_cases) {
    // Only X-decoys can reveal the probe: a |+>/|-> decoy entangled with a
    // measured ancilla reads the wrong X value half the time.
    EXPECT_NEAR(oracle::probe_detection_probability(1, 0), 0.0, 1e-12);
    EXPECT_NEAR(oracle::probe_detection_probability(0, 1), 0.5, 1e-12);
    EXPECT_NEAR(oracle::probe_detection_probability(1, 1), 0.5, 1e-12);
    EXPECT_NEAR(oracle::probe_detection_probability(0, 2), 0.75, 1e-12);
    EXPECT_NEAR(oracle::probe_detection_probability(1, 2), 0.75, 1e-12);
}

TEST(Probe, monte_carlo_matches_oracle) {
    const std::size_t rounds = 20000;
    for (auto [dz, dx] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 1}, {2, 1}, {1, 2}}) {
        const double p = oracle::probe_detection_probability(dz, dx);
        const auto hits = probe_aborts(dz, dx, rounds, 70 + dz * 10 + dx);
        EXPECT_TRUE(test::within_3_sigma(hits, rounds, p)) << dz << "," << dx << ": " << hits << " vs " << p;
        EXPECT_GT(hits, 0u);
    }
}

TEST(Probe, reading_before_return_changes_nothing_for_the_sender) {
    const Rng root(80);
    std::size_t aborts = 0;
    const std::size_t rounds = 20000;
    for (std::size_t i = 0; i < rounds; ++i) {
        Rng rng = root.split(i);
        aborts += run_detection_round({0, 1, 0.0, DetectionMode::Improved},
                                      AttackStrategy::entangle_probe(ProbeTiming::AfterForward), 0, 0.0, rng)
                      .verdict == RoundVerdict::Abort;
    }
    EXPECT_TRUE(test::within_3_sigma(aborts, rounds, 0.5)) << aborts;
}

TEST(Intercept, leaves_z_decoys_intact) {
    const auto run = run_protocol(attacked(4, AttackStrategy::intercept_measure_resend_z()), Rng(9));
    EXPECT_EQ(run.detection.receiver_z.errors, 0u);
    EXPECT_EQ(run.detection.sender_z.errors, 0u);
}

TEST(Capability, attacks_never_make_classical_parties_quantum) {
    for (const auto &a : {AttackStrategy::intercept_measure_resend_z(), AttackStrategy::pauli_x_tamper(),
                          AttackStrategy::entangle_probe(), AttackStrategy::forge_from_scratch(),
                          AttackStrategy::tamper_signature_b({0}), AttackStrategy::tamper_classical_message({0}),
                          AttackStrategy::unitary_tamper("H", gates::H())}) {
        for (auto mode : {DetectionMode::Improved, DetectionMode::ImprovedInlineOtp, DetectionMode::DirectReflection,
                          DetectionMode::MeasureThenReturn}) {
            for (int seed = 0; seed < 10; ++seed) {
                const auto run = run_protocol(attacked(4, a, mode), Rng(seed));
                EXPECT_TRUE(run.capability_respected) << a.describe() << "/" << to_string(mode);
                EXPECT_TRUE(run.key_segments_disjoint) << a.describe() << "/" << to_string(mode);
            }
        }
    }
}

TEST(Observation, adversary_sees_only_ciphertext_in_inline_mode) {
    const BitString m = BitString::parse("1011");
    for (auto mode : {DetectionMode::Improved, DetectionMode::ImprovedInlineOtp}) {
        RunTranscript tr;
        auto cfg = attacked(4, AttackStrategy::none(), mode);
        cfg.message = m;
        run_protocol(cfg, Rng(11), &tr);
        const auto idx = tr.index_of(labels::kLocAnnouncement);
        ASSERT_GE(idx, 0);
        const auto &ev = tr.events()[static_cast<std::size_t>(idx)];
        EXPECT_EQ(ev.note, mode == DetectionMode::Improved ? "plaintext" : "otp");
    }
}
