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

// Scenario files are flat `key = value` text. `#` starts a comment.
//
//   n            message length (required)
//   message      bit string of length n, or `random` (default)
//   d_z, d_x     decoy counts (default n each)
//   mode         improved | improved_inline_otp | direct_reflection | measure_then_return
//   attack       none | intercept_measure_resend_z | unitary_tamper_then_undo | pauli_x_tamper |
//                entangle_probe | forge | tamper_signature_b | tamper_classical_message
//   unitary      X | Y | Z | H           (unitary_tamper_then_undo)
//   probe_timing after_forward | after_return  (entangle_probe)
//   positions    comma-separated indices (tamper_signature_b)
//   flips        comma-separated indices (tamper_classical_message)
//   trials       >= 1 (default 1)
//   seed         unsigned 64-bit (default 0)
//   threshold    in [0, 1] (default 0)
//   noise_p      in [0, 1) (default 0)
//   hash         sha256 | toy8 (default sha256)
//   output       report path (optional)

#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sqs/protocol.hpp"

namespace sqs::harness {

struct ScenarioConfig {
    std::string name = "scenario";
    std::size_t n = 8;
    std::optional<BitString> message;
    std::size_t d_z = 8;
    std::size_t d_x = 8;
    DetectionMode mode = DetectionMode::Improved;
    AttackStrategy attack;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    double threshold = 0.0;
    double noise_p = 0.0;
    std::string hash_name = "sha256";
    std::string output;

    HashFunction hash() const { return hash_name == "toy8" ? toy_hash8() : default_hash(); }

    ProtocolConfig protocol() const {
        ProtocolConfig p;
        p.n = n;
        p.message = message;
        p.detection = {d_z, d_x, threshold, mode};
        p.attack = attack;
        p.noise_p = noise_p;
        p.hash = hash();
        return p;
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void config_error(const std::string &where, const std::string &what) {
    fail(ErrorCode::ConfigError, where + ": " + what);
}

template <typename T>
T parse_unsigned(const std::string &where, const std::string &key, const std::string &v) {
    T out{};
    const auto *end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) config_error(where, key + " must be a non-negative integer, got '" + v + "'");
    return out;
}

inline double parse_real(const std::string &where, const std::string &key, const std::string &v) {
    std::istringstream in(v);
    double out = 0;
    in >> out;
    if (!in || !in.eof()) config_error(where, key + " must be a real number, got '" + v + "'");
    return out;
}

inline std::vector<std::size_t> parse_index_list(const std::string &where, const std::string &key,
                                                 const std::string &v) {
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) config_error(where, key + " has an empty entry in '" + v + "'");
        out.push_back(parse_unsigned<std::size_t>(where, key, item));
    }
    if (!v.empty() && v.back() == ',') config_error(where, key + " has an empty entry in '" + v + "'");
    return out;
}

template <typename E>
E parse_choice(const std::string &where, const std::string &key, const std::string &v,
               const std::vector<std::pair<std::string, E>> &choices) {
    for (const auto &[name, value] : choices)
        if (name == v) return value;
    std::string valid;
    for (const auto &c : choices) valid += (valid.empty() ? "" : ", ") + c.first;
    config_error(where, "unknown " + key + " '" + v + "'; valid: " + valid);
}

inline const std::vector<std::pair<std::string, DetectionMode>> &mode_choices() {
    static const std::vector<std::pair<std::string, DetectionMode>> c{
        {"improved", DetectionMode::Improved},
        {"improved_inline_otp", DetectionMode::ImprovedInlineOtp},
        {"direct_reflection", DetectionMode::DirectReflection},
        {"measure_then_return", DetectionMode::MeasureThenReturn},
    };
    return c;
}

inline const std::vector<std::pair<std::string, AttackKind>> &attack_choices() {
    static const std::vector<std::pair<std::string, AttackKind>> c{
        {"none", AttackKind::NoAttack},
        {"intercept_measure_resend_z", AttackKind::InterceptMeasureResendZ},
        {"unitary_tamper_then_undo", AttackKind::UnitaryTamperThenUndo},
        {"pauli_x_tamper", AttackKind::PauliXTamper},
        {"entangle_probe", AttackKind::EntangleProbe},
        {"forge", AttackKind::ForgeFromScratch},
        {"tamper_signature_b", AttackKind::TamperSignatureB},
        {"tamper_classical_message", AttackKind::TamperClassicalMessage},
    };
    return c;
}

inline const Operator &named_unitary(const std::string &name) {
    if (name == "X") return gates::X();
    if (name == "Y") return gates::Y();
    if (name == "Z") return gates::Z();
    return gates::H();
}

}  // namespace detail

inline DetectionMode parse_mode(const std::string &v, const std::string &where = "mode") {
    return detail::parse_choice(where, "mode", v, detail::mode_choices());
}

/// Parses scenario text; `source` prefixes diagnostics ("file:line: ...").
inline ScenarioConfig parse_scenario(std::string_view text, const std::string &source = "<scenario>") {
    struct Entry {
        std::string value;
        std::string where;
    };
    std::map<std::string, Entry> kv;
    static const std::vector<std::string> known{"name",   "n",     "message",   "d_z",          "d_x",
                                                "mode",   "attack", "unitary",   "probe_timing", "positions",
                                                "flips",  "trials", "seed",      "threshold",    "noise_p",
                                                "hash",   "output"};

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) detail::config_error(where, "expected key = value, got '" + body + "'");
        auto key = detail::trim(std::string_view(body).substr(0, eq));
        auto value = detail::trim(std::string_view(body).substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            detail::config_error(where, "unknown key '" + key + "'");
        }
        if (value.empty()) detail::config_error(where, "empty value for '" + key + "'");
        if (kv.count(key)) detail::config_error(where, "duplicate key '" + key + "'");
        kv[key] = {value, where};
    }

    auto get = [&](const std::string &key) -> const Entry * {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    ScenarioConfig cfg;
    if (const auto *e = get("name")) cfg.name = e->value;
    const auto *n = get("n");
    if (!n) detail::config_error(source, "missing required key 'n'");
    cfg.n = detail::parse_unsigned<std::size_t>(n->where, "n", n->value);
    cfg.d_z = cfg.d_x = cfg.n;
    if (const auto *e = get("d_z")) cfg.d_z = detail::parse_unsigned<std::size_t>(e->where, "d_z", e->value);
    if (const auto *e = get("d_x")) cfg.d_x = detail::parse_unsigned<std::size_t>(e->where, "d_x", e->value);
    if (const auto *e = get("mode")) cfg.mode = parse_mode(e->value, e->where);
    if (const auto *e = get("trials")) cfg.trials = detail::parse_unsigned<std::size_t>(e->where, "trials", e->value);
    if (const auto *e = get("seed")) cfg.seed = detail::parse_unsigned<std::uint64_t>(e->where, "seed", e->value);
    if (const auto *e = get("threshold")) cfg.threshold = detail::parse_real(e->where, "threshold", e->value);
    if (const auto *e = get("noise_p")) cfg.noise_p = detail::parse_real(e->where, "noise_p", e->value);
    if (const auto *e = get("output")) cfg.output = e->value;
    if (const auto *e = get("hash")) {
        if (e->value != "sha256" && e->value != "toy8") {
            detail::config_error(e->where, "unknown hash '" + e->value + "'; valid: sha256, toy8");
        }
        cfg.hash_name = e->value;
    }
    if (const auto *e = get("message"); e && e->value != "random") {
        try {
            cfg.message = BitString::parse(e->value);
        } catch (const Error &err) {
            detail::config_error(e->where, std::string("message: ") + err.what());
        }
    }

    AttackKind kind = AttackKind::NoAttack;
    if (const auto *e = get("attack")) kind = detail::parse_choice(e->where, "attack", e->value, detail::attack_choices());
    switch (kind) {
        case AttackKind::NoAttack: cfg.attack = AttackStrategy::none(); break;
        case AttackKind::InterceptMeasureResendZ: cfg.attack = AttackStrategy::intercept_measure_resend_z(); break;
        case AttackKind::UnitaryTamperThenUndo: {
            std::string u = "X";
            if (const auto *e = get("unitary")) {
                if (e->value != "X" && e->value != "Y" && e->value != "Z" && e->value != "H") {
                    detail::config_error(e->where, "unknown unitary '" + e->value + "'; valid: X, Y, Z, H");
                }
                u = e->value;
            }
            cfg.attack = AttackStrategy::unitary_tamper(u, detail::named_unitary(u));
            break;
        }
        case AttackKind::PauliXTamper: cfg.attack = AttackStrategy::pauli_x_tamper(); break;
        case AttackKind::EntangleProbe: {
            auto timing = ProbeTiming::AfterReturn;
            if (const auto *e = get("probe_timing")) {
                timing = detail::parse_choice<ProbeTiming>(
                    e->where, "probe_timing", e->value,
                    {{"after_forward", ProbeTiming::AfterForward}, {"after_return", ProbeTiming::AfterReturn}});
            }
            cfg.attack = AttackStrategy::entangle_probe(timing);
            break;
        }
        case AttackKind::ForgeFromScratch: cfg.attack = AttackStrategy::forge_from_scratch(); break;
        case AttackKind::TamperSignatureB: {
            const auto *e = get("positions");
            if (!e) detail::config_error(source, "attack tamper_signature_b needs 'positions'");
            cfg.attack = AttackStrategy::tamper_signature_b(detail::parse_index_list(e->where, "positions", e->value));
            for (auto p : cfg.attack.positions)
                if (p >= cfg.n) detail::config_error(e->where, "positions: index " + std::to_string(p) + " >= n");
            break;
        }
        case AttackKind::TamperClassicalMessage: {
            const auto *e = get("flips");
            if (!e) detail::config_error(source, "attack tamper_classical_message needs 'flips'");
            cfg.attack = AttackStrategy::tamper_classical_message(detail::parse_index_list(e->where, "flips", e->value));
            for (auto p : cfg.attack.flips)
                if (p >= cfg.n) detail::config_error(e->where, "flips: index " + std::to_string(p) + " >= n");
            break;
        }
    }

    // Field invariants.
    if (cfg.trials < 1) detail::config_error(source, "trials must be >= 1");
    if (cfg.n < 1 && kind != AttackKind::ForgeFromScratch) detail::config_error(source, "n must be >= 1");
    if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0)) detail::config_error(source, "threshold must lie in [0, 1]");
    if (!(cfg.noise_p >= 0.0 && cfg.noise_p < 1.0)) detail::config_error(source, "noise_p must lie in [0, 1)");
    if (cfg.message && cfg.message->size() != cfg.n) {
        detail::config_error(source, "message has " + std::to_string(cfg.message->size()) + " bits but n = " +
                                         std::to_string(cfg.n));
    }
    if (cfg.mode != DetectionMode::DirectReflection && cfg.d_z < cfg.n) {
        detail::config_error(source, "d_z must be >= n to carry the message");
    }
    if (cfg.n + cfg.d_z + cfg.d_x > (std::size_t{1} << kPositionBits)) {
        detail::config_error(source, "n + d_z + d_x exceeds the 16-bit position range");
    }
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, path + ": cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

}  // namespace sqs::harness
