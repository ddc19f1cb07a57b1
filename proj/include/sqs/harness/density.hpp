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

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sqs/protocol.hpp"

namespace sqs::harness {

/// Largest |rho_ij - (I/dim)_ij|.
inline double max_deviation_from_maximally_mixed(const DensityMatrix &rho) {
    const auto mixed = DensityMatrix::maximally_mixed(rho.dim());
    return max_abs_diff(rho.matrix(), mixed.matrix());
}

struct PositionDensity {
    std::size_t position = 0;
    DensityMatrix rho_b_m = DensityMatrix::maximally_mixed(2);
    DensityMatrix rho_b_m_prime = DensityMatrix::maximally_mixed(2);
    double deviation_b = 0.0;  // max over both messages
    double deviation_t = 0.0;
    double distance_b = 0.0;   // D(rho_B(m), rho_B(m'))
    double distance_t = 0.0;
};

struct DensityReport {
    std::size_t n = 0;
    std::size_t samples = 0;
    std::vector<PositionDensity> positions;  // from the first key sample
    double max_deviation = 0.0;              // over B and T halves, all samples
    double max_trace_distance = 0.0;
    double decoy_mixture_deviation = 0.0;
    double decoy_mixture_distance = 0.0;     // D(mixture, I/2)
};

/// Signs m and m' under `samples` fresh keys (the same key for both) and
/// compares the per-position reduced states of the carrier halves.
inline DensityReport density_check(const BitString &m, const BitString &m_prime, std::size_t samples, Rng rng) {
    if (m.size() != m_prime.size()) fail(ErrorCode::LengthMismatch, "density_check needs equal-length messages");
    if (samples < 1) fail(ErrorCode::InvalidArgument, "density_check needs at least one sample");
    DensityReport report;
    report.n = m.size();
    report.samples = samples;

    const std::array<std::size_t, 1> keep_t{0};
    const std::array<std::size_t, 1> keep_b{1};
    for (std::size_t s = 0; s < samples; ++s) {
        Rng key_rng = rng.split(s);
        KeyStore key = keygen_init(m.size(), key_rng);
        KeyStore key_copy = key;
        RegisterBank bank;
        Party alice(kAlice, PartyKind::Quantum);
        const auto out_m = alice_sign(m, key, bank, alice);
        const auto out_mp = alice_sign(m_prime, key_copy, bank, alice);

        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto &pair_m = bank.state(out_m.bundle.b_sequence[i]);
            const auto &pair_mp = bank.state(out_mp.bundle.b_sequence[i]);
            PositionDensity pd;
            pd.position = i;
            pd.rho_b_m = partial_trace(pair_m, keep_b);
            pd.rho_b_m_prime = partial_trace(pair_mp, keep_b);
            const auto rho_t_m = partial_trace(pair_m, keep_t);
            const auto rho_t_mp = partial_trace(pair_mp, keep_t);
            pd.deviation_b = std::max(max_deviation_from_maximally_mixed(pd.rho_b_m),
                                      max_deviation_from_maximally_mixed(pd.rho_b_m_prime));
            pd.deviation_t =
                std::max(max_deviation_from_maximally_mixed(rho_t_m), max_deviation_from_maximally_mixed(rho_t_mp));
            pd.distance_b = trace_distance(pd.rho_b_m, pd.rho_b_m_prime);
            pd.distance_t = trace_distance(rho_t_m, rho_t_mp);
            report.max_deviation = std::max({report.max_deviation, pd.deviation_b, pd.deviation_t});
            report.max_trace_distance = std::max({report.max_trace_distance, pd.distance_b, pd.distance_t});
            if (s == 0) report.positions.push_back(std::move(pd));
        }
    }

    const std::array<StateVector, 4> decoys{prepare_single(Basis::Z, 0), prepare_single(Basis::Z, 1),
                                            prepare_single(Basis::X, 0), prepare_single(Basis::X, 1)};
    const auto mixture = DensityMatrix::uniform_mixture(decoys);
    report.decoy_mixture_deviation = max_deviation_from_maximally_mixed(mixture);
    report.decoy_mixture_distance = trace_distance(mixture, DensityMatrix::maximally_mixed(2));
    return report;
}

}  // namespace sqs::harness
