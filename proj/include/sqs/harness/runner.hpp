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

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sqs/harness/efficiency.hpp"
#include "sqs/harness/scenario.hpp"
#include "sqs/tolerance.hpp"

namespace sqs::harness {

/// Binomial proportion with a normal-approximation interval.
struct Proportion {
    std::size_t hits = 0;
    std::size_t total = 0;

    double rate() const { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }
    double variance() const { return rate() * (1.0 - rate()); }
    double sigma() const { return total == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(total)); }
    double ci_low(double k = Tolerance::sigmas) const { return std::max(0.0, rate() - k * sigma()); }
    double ci_high(double k = Tolerance::sigmas) const { return std::min(1.0, rate() + k * sigma()); }

    void add(std::size_t h, std::size_t t) {
        hits += h;
        total += t;
    }
};

/// True if `observed` lies within k sigma of the analytic `p` for N draws.
/// For p in {0, 1} the binomial has no spread, so the match must be exact.
inline bool within_sigmas(const Proportion &observed, double p, double k = Tolerance::sigmas) {
    const double n = static_cast<double>(observed.total);
    const double tol = k * std::sqrt(p * (1.0 - p) / n);
    return std::abs(observed.rate() - p) <= tol;
}

/// Mean and variance of per-trial error rates.
struct RateMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    double variance() const { return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1); }
};

struct CheckStats {
    Proportion pooled;  // errors / checked decoys over all trials
    RateMoments per_trial;

    void add(const ErrorTally &t) {
        if (t.checked == 0) return;
        pooled.add(t.errors, t.checked);
        per_trial.add(t.rate());
    }
};

struct TrialRecord {
    std::size_t trial = 0;
    bool aborted = false;
    bool trent_yes = false;
    bool bob_accept = false;
    ErrorTally receiver_z;
    ErrorTally sender_z;
    ErrorTally sender_x;
    std::size_t failing_positions = 0;
    std::vector<std::string> invariant_failures;
    std::string error;  // non-empty if the trial threw
};

struct AggregateStats {
    ScenarioConfig config;
    std::size_t trials_run = 0;
    std::size_t detection_aborts = 0;
    std::size_t completed = 0;
    std::size_t trent_yes = 0;
    std::size_t bob_accepts = 0;
    std::size_t trial_errors = 0;
    std::size_t invariant_failures = 0;
    std::size_t capability_violations = 0;
    std::size_t key_reuse_violations = 0;
    CheckStats receiver_z;
    CheckStats sender_z;
    CheckStats sender_x;
    std::optional<Proportion> forgery_acceptance;
    EfficiencyCounts efficiency;
    double wall_time_seconds = 0.0;
    RunTranscript first_transcript;
    std::vector<TrialRecord> records;

    Proportion abort_rate() const { return {detection_aborts, trials_run}; }
    Proportion continue_rate() const { return {trials_run - detection_aborts, trials_run}; }
    Proportion trent_yes_rate() const { return {trent_yes, trials_run}; }
    Proportion bob_accept_rate() const { return {bob_accepts, trials_run}; }
};

struct RunOptions {
    bool keep_records = true;
    bool keep_transcript = true;
};

/// Protocol-side invariants of one finished run.
inline std::vector<std::string> check_invariants(const ProtocolRun &run) {
    std::vector<std::string> out;
    if (!run.capability_respected) out.emplace_back("classical party performed a non-permitted operation");
    if (!run.key_segments_disjoint) out.emplace_back("key segments overlap");
    if (run.verification) {
        const auto &v = *run.verification;
        if ((v.verdict == Verdict::Yes) != v.failing_positions.empty()) out.emplace_back("verdict/failures mismatch");
        if ((v.verdict == Verdict::Yes) != v.digest.has_value()) out.emplace_back("verdict/digest mismatch");
    }
    if (run.evidence) {
        const auto &e = *run.evidence;
        if (e.b_bits != (e.t_bits ^ run.g_trent)) out.emplace_back("evidence violates B = T xor g");
    }
    if (run.detection.receiver_z.errors > run.detection.receiver_z.checked ||
        run.detection.sender_z.errors > run.detection.sender_z.checked ||
        run.detection.sender_x.errors > run.detection.sender_x.checked) {
        out.emplace_back("error count exceeds checked count");
    }
    return out;
}

/// Runs `config.trials` independent trials; trial i uses Rng(seed).split(i).
inline AggregateStats run_trials(const ScenarioConfig &config, const RunOptions &options = {}) {
    const auto start = std::chrono::steady_clock::now();
    AggregateStats stats;
    stats.config = config;
    stats.efficiency = compute_efficiency(std::max<std::size_t>(config.n, 1), config.hash().digest_bits);
    if (config.attack.kind == AttackKind::ForgeFromScratch) stats.forgery_acceptance = Proportion{};

    const auto protocol = config.protocol();
    const Rng root(config.seed);
    if (options.keep_records) stats.records.reserve(config.trials);
    for (std::size_t i = 0; i < config.trials; ++i) {
        TrialRecord rec;
        rec.trial = i;
        ++stats.trials_run;
        try {
            RunTranscript *transcript = (options.keep_transcript && i == 0) ? &stats.first_transcript : nullptr;
            const auto run = run_protocol(protocol, root.split(i), transcript);
            rec.aborted = run.aborted;
            rec.trent_yes = run.trent_yes();
            rec.bob_accept = run.bob_accepted();
            rec.receiver_z = run.detection.receiver_z;
            rec.sender_z = run.detection.sender_z;
            rec.sender_x = run.detection.sender_x;
            if (run.verification) rec.failing_positions = run.verification->failing_positions.size();
            rec.invariant_failures = check_invariants(run);

            if (run.aborted) ++stats.detection_aborts;
            else ++stats.completed;
            stats.trent_yes += rec.trent_yes;
            stats.bob_accepts += rec.bob_accept;
            if (!run.capability_respected) ++stats.capability_violations;
            if (!run.key_segments_disjoint) ++stats.key_reuse_violations;
            if (!rec.invariant_failures.empty()) ++stats.invariant_failures;
            stats.receiver_z.add(rec.receiver_z);
            stats.sender_z.add(rec.sender_z);
            stats.sender_x.add(rec.sender_x);
            if (stats.forgery_acceptance) stats.forgery_acceptance->add(rec.trent_yes ? 1 : 0, 1);
        } catch (const Error &e) {
            ++stats.trial_errors;
            ++stats.invariant_failures;
            rec.error = e.what();
        }
        if (options.keep_records) stats.records.push_back(std::move(rec));
    }
    stats.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

// ---------------------------------------------------------------------------
// Attack x mode grid

struct MatrixCell {
    std::string attack;
    DetectionMode mode = DetectionMode::Improved;
    std::size_t trials = 0;
    Proportion aborts;
    Proportion rejected;  // completed runs ending in Trent No or Bob Reject
    std::size_t capability_violations = 0;
    std::size_t key_reuse_violations = 0;
    std::size_t invariant_failures = 0;

    /// Caught = aborted by detection or rejected at verification.
    Proportion caught() const { return {aborts.hits + rejected.hits, trials}; }
    std::string outcome() const {
        const auto c = caught();
        if (attack == "none") return c.hits == 0 ? "clean" : "false_alarm";
        if (c.hits == c.total) return "detect";
        if (c.hits == 0) return "miss";
        return "partial";
    }
};

inline std::vector<AttackStrategy> matrix_attacks(std::size_t n) {
    return {
        AttackStrategy::none(),
        AttackStrategy::intercept_measure_resend_z(),
        AttackStrategy::unitary_tamper("X", gates::X()),
        AttackStrategy::unitary_tamper("Z", gates::Z()),
        AttackStrategy::unitary_tamper("H", gates::H()),
        AttackStrategy::pauli_x_tamper(),
        AttackStrategy::entangle_probe(),
        AttackStrategy::forge_from_scratch(),
        AttackStrategy::tamper_signature_b({0}),
        AttackStrategy::tamper_classical_message({n - 1}),
    };
}

inline const std::vector<DetectionMode> &all_modes() {
    static const std::vector<DetectionMode> m{DetectionMode::Improved, DetectionMode::ImprovedInlineOtp,
                                              DetectionMode::DirectReflection, DetectionMode::MeasureThenReturn};
    return m;
}

inline std::vector<MatrixCell> run_matrix(std::size_t n, std::size_t trials, std::uint64_t seed) {
    std::vector<MatrixCell> out;
    for (const auto &attack : matrix_attacks(n)) {
        for (auto mode : all_modes()) {
            ScenarioConfig cfg;
            cfg.name = attack.describe() + "/" + to_string(mode);
            cfg.n = n;
            cfg.d_z = cfg.d_x = n;
            cfg.mode = mode;
            cfg.attack = attack;
            cfg.trials = trials;
            cfg.seed = seed;
            const auto stats = run_trials(cfg, {false, false});
            MatrixCell cell;
            cell.attack = attack.describe();
            cell.mode = mode;
            cell.trials = stats.trials_run;
            cell.aborts = stats.abort_rate();
            cell.rejected = {stats.completed - std::min(stats.completed, stats.bob_accepts), stats.trials_run};
            cell.capability_violations = stats.capability_violations;
            cell.key_reuse_violations = stats.key_reuse_violations;
            cell.invariant_failures = stats.invariant_failures;
            out.push_back(std::move(cell));
        }
    }
    return out;
}

}  // namespace sqs::harness
