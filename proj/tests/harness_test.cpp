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

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "gtest/gtest.h"
#include "sqs/sqs.hpp"
#include "test_util.hpp"

using namespace sqs;
using namespace sqs::harness;

namespace {

std::string config_error_of(std::string_view text) {
    try {
        parse_scenario(text, "t.scn");
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ConfigError);
        return e.what();
    }
    ADD_FAILURE() << "scenario parsed: " << text;
    return {};
}

ScenarioConfig quick(std::string_view extra, std::size_t trials = 20) {
    return parse_scenario("n = 4\ntrials = " + std::to_string(trials) + "\nseed = 3\n" + std::string(extra));
}

}  // namespace

// --- scenario files ---------------------------------------------------------

TEST(Scenario, defaults_and_comments) {
    const auto c = parse_scenario("# comment\n  n = 8   # trailing\n\nname = x\n");
    EXPECT_EQ(c.name, "x");
    EXPECT_EQ(c.n, 8u);
    EXPECT_EQ(c.d_z, 8u);
    EXPECT_EQ(c.d_x, 8u);
    EXPECT_EQ(c.mode, DetectionMode::Improved);
    EXPECT_EQ(c.attack.kind, AttackKind::NoAttack);
    EXPECT_EQ(c.hash_name, "sha256");
    EXPECT_FALSE(c.message.has_value());
}

TEST(Scenario, every_field) {
    const auto c = parse_scenario(
        "name = full\nn = 3\nmessage = 101\nd_z = 5\nd_x = 2\nmode = improved_inline_otp\n"
        "attack = tamper_signature_b\npositions = 0, 2\ntrials = 9\nseed = 44\nthreshold = 0.25\n"
        "noise_p = 0.01\nhash = toy8\noutput = out.json\n");
    EXPECT_EQ(c.message->str(), "101");
    EXPECT_EQ(c.d_z, 5u);
    EXPECT_EQ(c.d_x, 2u);
    EXPECT_EQ(c.mode, DetectionMode::ImprovedInlineOtp);
    EXPECT_EQ(c.attack.kind, AttackKind::TamperSignatureB);
    EXPECT_EQ(c.attack.positions, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(c.trials, 9u);
    EXPECT_EQ(c.seed, 44u);
    EXPECT_DOUBLE_EQ(c.threshold, 0.25);
    EXPECT_DOUBLE_EQ(c.noise_p, 0.01);
    EXPECT_EQ(c.hash().digest_bits, 8u);
    EXPECT_EQ(c.output, "out.json");
    const auto p = c.protocol();
    EXPECT_EQ(p.n, 3u);
    EXPECT_EQ(p.detection.d_z, 5u);
}

TEST(Scenario, attack_options) {
    EXPECT_EQ(quick("attack = unitary_tamper_then_undo\nunitary = H\n").attack.unitary_name, "H");
    EXPECT_EQ(quick("attack = entangle_probe\nprobe_timing = after_forward\n").attack.probe_timing,
              ProbeTiming::AfterForward);
    EXPECT_EQ(quick("attack = tamper_classical_message\nflips = 3\n").attack.flips, std::vector<std::size_t>{3});
    EXPECT_EQ(quick("attack = forge\n").attack.kind, AttackKind::ForgeFromScratch);
}

TEST(Scenario, diagnostics_name_the_line) {
    EXPECT_NE(config_error_of("n = 4\nbogus = 1\n").find("t.scn:2"), std::string::npos);
    EXPECT_NE(config_error_of("n = 4\nn = 5\n").find("duplicate"), std::string::npos);
    EXPECT_NE(config_error_of("n 4\n").find("t.scn:1"), std::string::npos);
    EXPECT_NE(config_error_of("n =\n").find("empty"), std::string::npos);
    EXPECT_NE(config_error_of("trials = 3\n").find("'n'"), std::string::npos);
}

TEST(Scenario, rejects_bad_values) {
    const auto modes = config_error_of("n = 4\nmode = fast\n");
    EXPECT_NE(modes.find("improved"), std::string::npos);
    EXPECT_NE(config_error_of("n = 4\nattack = laser\n").find("intercept_measure_resend_z"), std::string::npos);
    config_error_of("n = -1\n");
    config_error_of("n = 4x\n");
    config_error_of("n = 4\ntrials = 0\n");
    config_error_of("n = 0\n");
    config_error_of("n = 4\nthreshold = 1.5\n");
    config_error_of("n = 4\nthreshold = nan\n");
    config_error_of("n = 4\nnoise_p = 1\n");
    config_error_of("n = 4\nmessage = 101\n");
    config_error_of("n = 4\nmessage = 10a1\n");
    config_error_of("n = 4\nd_z = 3\n");
    config_error_of("n = 4\nhash = md5\n");
    config_error_of("n = 4\nattack = unitary_tamper_then_undo\nunitary = T\n");
    config_error_of("n = 4\nattack = tamper_signature_b\n");
    config_error_of("n = 4\nattack = tamper_signature_b\npositions = 4\n");
    config_error_of("n = 4\nattack = tamper_classical_message\nflips = 1,,2\n");
    config_error_of("n = 40000\nd_z = 40000\n");
    EXPECT_NO_THROW(parse_scenario("n = 4\nd_z = 0\nmode = direct_reflection\n"));
    EXPECT_NO_THROW(parse_scenario("n = 0\nattack = forge\n"));
}

TEST(Scenario, load_from_file) {
    const auto path = std::filesystem::temp_directory_path() / "sqsig_harness_test.scn";
    std::ofstream(path) << "n = 2\nname = file\n";
    EXPECT_EQ(load_scenario(path.string()).name, "file");
    std::filesystem::remove(path);
    EXPECT_THROW(load_scenario(path.string()), Error);
}

// --- efficiency -------------------------------------------------------------

TEST(Efficiency, one_third_without_digest) {
    for (std::uint64_t n : {1u, 8u, 256u, 1000u}) {
        const auto e = compute_efficiency(n);
        EXPECT_EQ(e.c, n);
        EXPECT_EQ(e.q, 2 * n);
        EXPECT_EQ(e.b, n);
        EXPECT_EQ(e.eta, (Ratio{1, 3}));
    }
    EXPECT_EQ(compute_efficiency(256).eta_with_digest, (Ratio{1, 4}));
    EXPECT_EQ(compute_efficiency(10, 8).eta_with_digest, make_ratio(10, 38));
    EXPECT_THROW(compute_efficiency(0), Error);
    EXPECT_THROW(make_ratio(1, 0), Error);
}

// --- density ----------------------------------------------------------------

TEST(Density, halves_are_maximally_mixed_for_any_message) {
    const auto r = density_check(BitString::parse("0110"), BitString::parse("1001"), 16, Rng(5));
    EXPECT_EQ(r.positions.size(), 4u);
    EXPECT_LE(r.max_deviation, 1e-12);
    EXPECT_LE(r.max_trace_distance, 1e-12);
    EXPECT_LE(r.decoy_mixture_deviation, 1e-12);
    EXPECT_LE(r.decoy_mixture_distance, 1e-12);
    for (const auto &p : r.positions) {
        EXPECT_NEAR(std::abs(p.rho_b_m(0, 0) - 0.5), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(p.rho_b_m_prime(0, 1)), 0.0, 1e-12);
    }
    EXPECT_THROW(density_check(BitString::parse("01"), BitString::parse("1"), 1, Rng(1)), Error);
    EXPECT_THROW(density_check(BitString::parse("01"), BitString::parse("10"), 0, Rng(1)), Error);
}

TEST(Density, deviation_detects_a_biased_state) {
    EXPECT_NEAR(max_deviation_from_maximally_mixed(DensityMatrix::pure(prepare_single(Basis::Z, 0))), 0.5, 1e-12);
}

// --- statistics -------------------------------------------------------------

TEST(Stats, proportion_and_sigma_test) {
    Proportion p{250, 1000};
    EXPECT_DOUBLE_EQ(p.rate(), 0.25);
    EXPECT_NEAR(p.sigma(), std::sqrt(0.25 * 0.75 / 1000), 1e-15);
    EXPECT_LT(p.ci_low(), 0.25);
    EXPECT_GT(p.ci_high(), 0.25);
    EXPECT_TRUE(within_sigmas(p, 0.25));
    EXPECT_TRUE(within_sigmas(Proportion{260, 1000}, 0.25));
    EXPECT_FALSE(within_sigmas(Proportion{300, 1000}, 0.25));
    EXPECT_TRUE(within_sigmas(Proportion{0, 1000}, 0.0));
    EXPECT_FALSE(within_sigmas(Proportion{1, 1000}, 0.0));
    EXPECT_TRUE(within_sigmas(Proportion{1000, 1000}, 1.0));
}

TEST(Stats, rate_moments) {
    RateMoments m;
    for (double x : {0.0, 0.5, 1.0}) m.add(x);
    EXPECT_DOUBLE_EQ(m.mean, 0.5);
    EXPECT_DOUBLE_EQ(m.variance(), 0.25);
}

// --- runner -----------------------------------------------------------------

TEST(Runner, honest_scenario) {
    const auto s = run_trials(quick(""));
    EXPECT_EQ(s.trials_run, 20u);
    EXPECT_EQ(s.completed, 20u);
    EXPECT_EQ(s.trent_yes, 20u);
    EXPECT_EQ(s.bob_accepts, 20u);
    EXPECT_EQ(s.invariant_failures, 0u);
    EXPECT_EQ(s.records.size(), 20u);
    EXPECT_FALSE(s.first_transcript.empty());
    EXPECT_FALSE(s.forgery_acceptance.has_value());
    EXPECT_EQ(s.sender_x.pooled.total, 80u);
}

TEST(Runner, options_drop_records_and_transcript) {
    const auto s = run_trials(quick(""), {false, false});
    EXPECT_TRUE(s.records.empty());
    EXPECT_TRUE(s.first_transcript.empty());
}

TEST(Runner, pauli_x_aborts_every_trial) {
    const auto s = run_trials(quick("attack = pauli_x_tamper\n"));
    EXPECT_EQ(s.detection_aborts, 20u);
    EXPECT_EQ(s.trent_yes, 0u);
    EXPECT_EQ(s.invariant_failures, 0u);
}

TEST(Runner, forgery_is_tallied) {
    const auto s = run_trials(quick("attack = forge\n", 400));
    ASSERT_TRUE(s.forgery_acceptance.has_value());
    EXPECT_EQ(s.forgery_acceptance->total, 400u);
    EXPECT_TRUE(within_sigmas(*s.forgery_acceptance, 1.0 / 16));
}

TEST(Runner, trials_are_independent_of_batch_size) {
    const auto a = run_trials(quick("attack = entangle_probe\n", 10));
    const auto b = run_trials(quick("attack = entangle_probe\n", 30));
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(a.records[i].aborted, b.records[i].aborted);
        EXPECT_EQ(a.records[i].sender_x.errors, b.records[i].sender_x.errors);
    }
}

TEST(Runner, invariants_flag_inconsistent_runs) {
    ProtocolRun run;
    run.capability_respected = false;
    run.key_segments_disjoint = false;
    run.verification = VerificationOutcome{Verdict::Yes, std::nullopt, {1}};
    run.g_trent = BitString::parse("1");
    run.evidence = Evidence{BitString::parse("1"), BitString::parse("0"), BitString::parse("0")};
    run.detection.sender_x = {3, 2};
    EXPECT_EQ(check_invariants(run).size(), 6u);
    EXPECT_TRUE(check_invariants(ProtocolRun{}).empty());
}

// --- reports ----------------------------------------------------------------

TEST(Report, byte_identical_for_fixed_seed) {
    const auto cfg = quick("attack = intercept_measure_resend_z\nd_x = 2\n", 30);
    for (auto f : {ReportFormat::Text, ReportFormat::Table, ReportFormat::Records}) {
        EXPECT_EQ(emit_report(run_trials(cfg), f, false), emit_report(run_trials(cfg), f, false));
    }
    auto other = cfg;
    other.seed = 4;
    EXPECT_NE(emit_report(run_trials(cfg), ReportFormat::Records, false),
              emit_report(run_trials(other), ReportFormat::Records, false));
}

TEST(Report, records_are_json_lines) {
    const auto s = run_trials(quick("", 3));
    const auto text = emit_report(s, ReportFormat::Records);
    std::istringstream in(text);
    std::string line;
    std::size_t lines = 0;
    nlohmann::json last;
    while (std::getline(in, line)) {
        last = nlohmann::json::parse(line);
        ++lines;
    }
    EXPECT_EQ(lines, 3 + s.first_transcript.events().size() + 1);
    EXPECT_TRUE(last.contains("wall_time_seconds") || last.dump().find("wall_time") != std::string::npos);
    EXPECT_EQ(emit_report(s, ReportFormat::Records, false).find("wall_time"), std::string::npos);
}

TEST(Report, format_names) {
    EXPECT_EQ(parse_format("text"), ReportFormat::Text);
    EXPECT_EQ(parse_format("table"), ReportFormat::Table);
    EXPECT_EQ(parse_format("records"), ReportFormat::Records);
    EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Report, write_to_bad_path_fails) {
    EXPECT_THROW(write_report("/nonexistent-dir/x/y.txt", "z"), Error);
}

// --- matrix -----------------------------------------------------------------

TEST(Matrix, small_grid_is_consistent) {
    const auto cells = run_matrix(2, 40, 9);
    EXPECT_EQ(cells.size(), matrix_attacks(2).size() * all_modes().size());
    for (const auto &c : cells) {
        EXPECT_EQ(c.capability_violations, 0u) << c.attack;
        EXPECT_EQ(c.key_reuse_violations, 0u) << c.attack;
        EXPECT_EQ(c.invariant_failures, 0u) << c.attack;
        if (c.attack == "none") {
            EXPECT_EQ(c.outcome(), "clean");
        }
        if (c.attack == "pauli_x_tamper") {
            const bool improved = c.mode == DetectionMode::Improved || c.mode == DetectionMode::ImprovedInlineOtp;
            EXPECT_EQ(c.aborts.hits, improved ? 40u : 0u) << to_string(c.mode);
        }
    }
    EXPECT_FALSE(emit_matrix(cells, ReportFormat::Text).empty());
}
