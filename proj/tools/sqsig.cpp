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

// sqsig: command-line front end for the simulator.
//
//   sqsig run <scenario> [--seed S] [--trials N] [--out PATH] [--format text|table|records]
//   sqsig matrix [--n N] [--trials N] [--seed S] [--format ...]
//   sqsig density --n N [--samples K] [--seed S]
//   sqsig efficiency --n N [--digest-bits L]
//
// Exit status: 0 on completion, 1 on configuration errors, 2 when an
// internal invariant failed.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sqs/sqs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

void emit(const std::string &text, const std::string &path) {
    if (path.empty()) std::cout << text;
    else sqs::harness::write_report(path, text);
}

}  // namespace

int main(int argc, char **argv) {
    using namespace sqs;
    using namespace sqs::harness;

    CLI::App app{"Semi-quantum signature simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format = "text";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> trials_override;
    auto *run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--seed", seed_override, "Override the scenario seed");
    run->add_option("--trials", trials_override, "Override the trial count");
    run->add_option("--out", out_path, "Report path (default: stdout, or the scenario's output key)");
    run->add_option("--format", format, "text | table | records");

    std::size_t matrix_n = 8, matrix_trials = 200;
    std::uint64_t matrix_seed = 1;
    std::string matrix_format = "text";
    auto *matrix = app.add_subcommand("matrix", "Run every attack against every detection mode");
    matrix->add_option("--n", matrix_n, "Message length");
    matrix->add_option("--trials", matrix_trials, "Trials per cell");
    matrix->add_option("--seed", matrix_seed, "Seed");
    matrix->add_option("--format", matrix_format, "text | table | records");

    std::size_t density_n = 8, density_samples = 16;
    std::uint64_t density_seed = 1;
    auto *density = app.add_subcommand("density", "Reduced-state check of the signature payload");
    density->add_option("--n", density_n, "Message length")->required();
    density->add_option("--samples", density_samples, "Key samples");
    density->add_option("--seed", density_seed, "Seed");

    std::size_t eff_n = 0, eff_digest = 256;
    auto *efficiency = app.add_subcommand("efficiency", "Qubit efficiency counts");
    efficiency->add_option("--n", eff_n, "Message length")->required();
    efficiency->add_option("--digest-bits", eff_digest, "Digest length l");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            auto cfg = load_scenario(scenario_path);
            if (seed_override) cfg.seed = *seed_override;
            if (trials_override) {
                if (*trials_override < 1) fail(ErrorCode::ConfigError, "--trials must be >= 1");
                cfg.trials = *trials_override;
            }
            const auto fmt = parse_format(format);
            const auto stats = run_trials(cfg);
            emit(emit_report(stats, fmt), out_path.empty() ? cfg.output : out_path);
            if (stats.invariant_failures > 0) {
                std::cerr << "sqsig: " << stats.invariant_failures << " trial(s) failed an invariant\n";
                return kExitInvariant;
            }
        } else if (*matrix) {
            if (matrix_n < 1 || matrix_trials < 1) fail(ErrorCode::ConfigError, "--n and --trials must be >= 1");
            const auto cells = run_matrix(matrix_n, matrix_trials, matrix_seed);
            std::cout << emit_matrix(cells, parse_format(matrix_format));
            for (const auto &c : cells)
                if (c.invariant_failures > 0) return kExitInvariant;
        } else if (*density) {
            if (density_n < 1) fail(ErrorCode::ConfigError, "--n must be >= 1");
            Rng rng(density_seed);
            Rng msg = rng.split(Stream::Message);
            const auto m = BitString::random(density_n, msg);
            auto m_prime = m;
            for (std::size_t i = 0; i < m_prime.size(); ++i) m_prime.flip(i);
            const auto report = density_check(m, m_prime, density_samples, rng);
            std::cout << "m  = " << m.str() << "\nm' = " << m_prime.str() << '\n' << emit_density(report);
            if (report.max_deviation > Tolerance::density_entry || report.max_trace_distance > Tolerance::density_entry)
                return kExitInvariant;
        } else if (*efficiency) {
            const auto e = compute_efficiency(eff_n, eff_digest);
            std::cout << "c=" << e.c << " q=" << e.q << " b=" << e.b << " l=" << e.digest_bits << '\n'
                      << "eta (digest excluded) = " << e.eta.num << "/" << e.eta.den << " = " << e.eta.value() << '\n'
                      << "eta (digest included) = " << e.eta_with_digest.num << "/" << e.eta_with_digest.den << " = "
                      << e.eta_with_digest.value() << '\n';
        }
    } catch (const Error &e) {
        std::cerr << "sqsig: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidArgument ? kExitConfig
                                                                                           : kExitInvariant;
    }
    return kExitOk;
}
