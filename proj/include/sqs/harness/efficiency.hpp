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

#include <cstdint>
#include <numeric>

#include "sqs/error.hpp"

namespace sqs::harness {

/// Exact ratio num/den in lowest terms.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Ratio &, const Ratio &) = default;
};

inline Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) fail(ErrorCode::InvalidArgument, "ratio with zero denominator");
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
}

/// eta = c / (q + b). Decoys and detection-only classical bits never count.
struct EfficiencyCounts {
    std::uint64_t c = 0;            // signed message bits
    std::uint64_t q = 0;            // carrier qubits, |T> and |B>
    std::uint64_t b = 0;            // auxiliary classical bits, the B string
    std::uint64_t digest_bits = 0;  // l
    Ratio eta;                      // digest excluded
    Ratio eta_with_digest;
};

inline EfficiencyCounts compute_efficiency(std::uint64_t n, std::uint64_t digest_bits = 256) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "efficiency needs n >= 1");
    EfficiencyCounts e;
    e.c = n;
    e.q = 2 * n;
    e.b = n;
    e.digest_bits = digest_bits;
    e.eta = make_ratio(e.c, e.q + e.b);
    e.eta_with_digest = make_ratio(e.c, e.q + e.b + digest_bits);
    return e;
}

}  // namespace sqs::harness
