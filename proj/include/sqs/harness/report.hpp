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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sqs/harness/density.hpp"
#include "sqs/harness/runner.hpp"

namespace sqs::harness {

enum class ReportFormat { Text, Table, Records };

inline ReportFormat parse_format(const std::string &s) {
    if (s == "text") return ReportFormat::Text;
    if (s == "table" || s == "tsv") return ReportFormat::Table;
    if (s == "records" || s == "jsonl") return ReportFormat::Records;
    fail(ErrorCode::ConfigError, "unknown format '" + s + "'; valid: text, table, records");
}

namespace detail {

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline nlohmann::ordered_json config_json(const ScenarioConfig &c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["n"] = c.n;
    j["message"] = c.message ? c.message->str() : "random";
    j["d_z"] = c.d_z;
    j["d_x"] = c.d_x;
    j["mode"] = to_string(c.mode);
    j["attack"] = c.attack.describe();
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["threshold"] = c.threshold;
    j["noise_p"] = c.noise_p;
    j["hash"] = c.hash_name;
    return j;
}

inline nlohmann::ordered_json proportion_json(const Proportion &p) {
    return {{"hits", p.hits}, {"total", p.total}, {"rate", p.rate()}, {"ci_low", p.ci_low()}, {"ci_high", p.ci_high()}};
}

inline nlohmann::ordered_json check_json(const CheckStats &c) {
    auto j = proportion_json(c.pooled);
    j["trials_checked"] = c.per_trial.count;
    j["per_trial_mean"] = c.per_trial.mean;
    j["per_trial_variance"] = c.per_trial.variance();
    return j;
}

inline nlohmann::ordered_json tally_json(const ErrorTally &t) { return {{"errors", t.errors}, {"checked", t.checked}}; }

}  // namespace detail

inline nlohmann::ordered_json summary_json(const AggregateStats &s, bool include_timing) {
    nlohmann::ordered_json j;
    j["record"] = "summary";
    j["config"] = detail::config_json(s.config);
    j["trials_run"] = s.trials_run;
    j["detection_aborts"] = s.detection_aborts;
    j["completed"] = s.completed;
    j["trent_yes"] = s.trent_yes;
    j["bob_accepts"] = s.bob_accepts;
    j["trial_errors"] = s.trial_errors;
    j["invariant_failures"] = s.invariant_failures;
    j["capability_violations"] = s.capability_violations;
    j["key_reuse_violations"] = s.key_reuse_violations;
    j["abort_rate"] = detail::proportion_json(s.abort_rate());
    j["trent_yes_rate"] = detail::proportion_json(s.trent_yes_rate());
    j["bob_accept_rate"] = detail::proportion_json(s.bob_accept_rate());
    j["receiver_z"] = detail::check_json(s.receiver_z);
    j["sender_z"] = detail::check_json(s.sender_z);
    j["sender_x"] = detail::check_json(s.sender_x);
    if (s.forgery_acceptance) j["forgery_acceptance"] = detail::proportion_json(*s.forgery_acceptance);
    const auto &e = s.efficiency;
    j["efficiency"] = {{"c", e.c},
                       {"q", e.q},
                       {"b", e.b},
                       {"digest_bits", e.digest_bits},
                       {"eta", std::to_string(e.eta.num) + "/" + std::to_string(e.eta.den)},
                       {"eta_with_digest",
                        std::to_string(e.eta_with_digest.num) + "/" + std::to_string(e.eta_with_digest.den)}};
    if (include_timing) j["wall_time_seconds"] = s.wall_time_seconds;
    return j;
}

inline nlohmann::ordered_json trial_json(const TrialRecord &r) {
    nlohmann::ordered_json j;
    j["record"] = "trial";
    j["trial"] = r.trial;
    j["aborted"] = r.aborted;
    j["trent_yes"] = r.trent_yes;
    j["bob_accept"] = r.bob_accept;
    j["receiver_z"] = detail::tally_json(r.receiver_z);
    j["sender_z"] = detail::tally_json(r.sender_z);
    j["sender_x"] = detail::tally_json(r.sender_x);
    j["failing_positions"] = r.failing_positions;
    j["invariant_failures"] = r.invariant_failures;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline nlohmann::ordered_json event_json(const TranscriptEvent &e) {
    return {{"record", "event"}, {"kind", to_string(e.kind)}, {"from", e.from}, {"to", e.to},
            {"label", e.label},   {"payload", e.payload},     {"note", e.note}};
}

/// Deterministic for a fixed config and seed once timing is left out.
inline std::string emit_report(const AggregateStats &s, ReportFormat format, bool include_timing = true) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Records: {
            for (const auto &r : s.records) out << trial_json(r).dump() << '\n';
            for (const auto &e : s.first_transcript.events()) out << event_json(e).dump() << '\n';
            out << summary_json(s, include_timing).dump() << '\n';
            break;
        }
        case ReportFormat::Table: {
            out << "trial\taborted\ttrent_yes\tbob_accept\treceiver_z_errors\treceiver_z_checked\tsender_z_errors\t"
                   "sender_z_checked\tsender_x_errors\tsender_x_checked\tfailing_positions\terror\n";
            for (const auto &r : s.records) {
                out << r.trial << '\t' << r.aborted << '\t' << r.trent_yes << '\t' << r.bob_accept << '\t'
                    << r.receiver_z.errors << '\t' << r.receiver_z.checked << '\t' << r.sender_z.errors << '\t'
                    << r.sender_z.checked << '\t' << r.sender_x.errors << '\t' << r.sender_x.checked << '\t'
                    << r.failing_positions << '\t' << r.error << '\n';
            }
            out << "\nmetric\tvalue\tci_low\tci_high\n";
            auto row = [&](const char *name, const Proportion &p) {
                out << name << '\t' << detail::fixed(p.rate()) << '\t' << detail::fixed(p.ci_low()) << '\t'
                    << detail::fixed(p.ci_high()) << '\n';
            };
            row("abort_rate", s.abort_rate());
            row("trent_yes_rate", s.trent_yes_rate());
            row("bob_accept_rate", s.bob_accept_rate());
            row("receiver_z_error_rate", s.receiver_z.pooled);
            row("sender_z_error_rate", s.sender_z.pooled);
            row("sender_x_error_rate", s.sender_x.pooled);
            if (s.forgery_acceptance) row("forgery_acceptance_rate", *s.forgery_acceptance);
            out << "eta\t" << s.efficiency.eta.num << '/' << s.efficiency.eta.den << "\t\t\n";
            out << "eta_with_digest\t" << s.efficiency.eta_with_digest.num << '/' << s.efficiency.eta_with_digest.den
                << "\t\t\n";
            out << "invariant_failures\t" << s.invariant_failures << "\t\t\n";
            if (include_timing) out << "wall_time_seconds\t" << detail::fixed(s.wall_time_seconds, 3) << "\t\t\n";
            break;
        }
        case ReportFormat::Text: {
            const auto &c = s.config;
            out << "scenario   " << c.name << '\n'
                << "config     n=" << c.n << " d_z=" << c.d_z << " d_x=" << c.d_x << " mode=" << to_string(c.mode)
                << " attack=" << c.attack.describe() << " threshold=" << c.threshold << " noise_p=" << c.noise_p
                << " hash=" << c.hash_name << '\n'
                << "seed       " << c.seed << '\n'
                << "trials     " << s.trials_run << " (completed " << s.completed << ", aborted " << s.detection_aborts
                << ", errors " << s.trial_errors << ")\n"
                << "verdicts   trent_yes=" << s.trent_yes << " bob_accept=" << s.bob_accepts << '\n';
            auto line = [&](const char *name, const Proportion &p) {
                out << name << detail::fixed(p.rate()) << "  [" << detail::fixed(p.ci_low()) << ", "
                    << detail::fixed(p.ci_high()) << "]  (" << p.hits << "/" << p.total << ")\n";
            };
            line("abort      ", s.abort_rate());
            line("recv Z err ", s.receiver_z.pooled);
            line("send Z err ", s.sender_z.pooled);
            line("send X err ", s.sender_x.pooled);
            if (s.forgery_acceptance) line("forgery    ", *s.forgery_acceptance);
            out << "efficiency c=" << s.efficiency.c << " q=" << s.efficiency.q << " b=" << s.efficiency.b
                << " eta=" << s.efficiency.eta.num << "/" << s.efficiency.eta.den
                << " eta(+digest)=" << s.efficiency.eta_with_digest.num << "/" << s.efficiency.eta_with_digest.den
                << '\n'
                << "invariants " << (s.invariant_failures == 0 ? "ok" : std::to_string(s.invariant_failures) + " failing")
                << '\n';
            if (include_timing) out << "wall time  " << detail::fixed(s.wall_time_seconds, 3) << " s\n";
            if (!s.first_transcript.empty()) {
                out << "\ntranscript (trial 0)\n";
                for (const auto &e : s.first_transcript.events()) {
                    out << "  " << to_string(e.kind) << ' ' << e.from << " -> " << e.to << ' ' << e.label;
                    if (!e.payload.empty()) out << " [" << e.payload << ']';
                    if (!e.note.empty()) out << " (" << e.note << ')';
                    out << '\n';
                }
            }
            break;
        }
    }
    return out.str();
}

inline std::string emit_matrix(const std::vector<MatrixCell> &cells, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Records) {
        for (const auto &c : cells) {
            nlohmann::ordered_json j{{"record", "matrix_cell"},
                                     {"attack", c.attack},
                                     {"mode", to_string(c.mode)},
                                     {"trials", c.trials},
                                     {"abort_rate", c.aborts.rate()},
                                     {"reject_rate", c.rejected.rate()},
                                     {"outcome", c.outcome()},
                                     {"capability_violations", c.capability_violations},
                                     {"key_reuse_violations", c.key_reuse_violations},
                                     {"invariant_failures", c.invariant_failures}};
            out << j.dump() << '\n';
        }
        return out.str();
    }
    const char sep = format == ReportFormat::Table ? '\t' : ' ';
    auto pad = [&](std::string s, std::size_t w) {
        if (format == ReportFormat::Table) return s;
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    out << pad("attack", 36) << sep << pad("mode", 22) << sep << pad("abort", 9) << sep << pad("reject", 9) << sep
        << "outcome\n";
    for (const auto &c : cells) {
        out << pad(c.attack, 36) << sep << pad(to_string(c.mode), 22) << sep << pad(detail::fixed(c.aborts.rate(), 4), 9)
            << sep << pad(detail::fixed(c.rejected.rate(), 4), 9) << sep << c.outcome() << '\n';
    }
    return out.str();
}

inline std::string emit_density(const DensityReport &r) {
    std::ostringstream out;
    out << "density check n=" << r.n << " samples=" << r.samples << '\n';
    out << "position  dev(B)        dev(T)        D_B(m,m')     D_T(m,m')\n";
    char buf[160];
    for (const auto &p : r.positions) {
        std::snprintf(buf, sizeof buf, "%-8zu  %.3e     %.3e     %.3e     %.3e\n", p.position, p.deviation_b,
                      p.deviation_t, p.distance_b, p.distance_t);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "max deviation from I/2      %.3e\nmax trace distance          %.3e\n",
                  r.max_deviation, r.max_trace_distance);
    out << buf;
    std::snprintf(buf, sizeof buf, "decoy mixture deviation     %.3e\ndecoy mixture D(., I/2)     %.3e\n",
                  r.decoy_mixture_deviation, r.decoy_mixture_distance);
    out << buf;
    return out.str();
}

/// Writes `content` to `path`; failure to open is a config error.
inline void write_report(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::ConfigError, "cannot write report to " + path);
    f << content;
    if (!f) fail(ErrorCode::ConfigError, "write to " + path + " failed");
}

}  // namespace sqs::harness
