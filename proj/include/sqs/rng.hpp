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
#include <cstdint>
#include <random>
#include <span>

namespace sqs {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// SplitMix64 as a UniformRandomBitGenerator: a Weyl counter through the
/// mixer above. Seeding is O(1), which matters when every trial opens
/// several streams.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const auto out = detail::splitmix64(state_);
        state_ += 0x9E3779B97F4A7C15ULL;
        return out;
    }

private:
    std::uint64_t state_;
};

/// Named sub-streams, so that each party in a trial owns its own generator.
enum class Stream : std::uint64_t {
    Alice = 1,
    Trent = 2,
    Bob = 3,
    Adversary = 4,
    Noise = 5,
    Key = 6,
    Message = 7,
};

/// Seedable deterministic generator. Children derived with split() are
/// independent of the parent's consumption state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng split(std::uint64_t stream_id) const {
        return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(stream_id + 0x632BE59BD9B4E019ULL)));
    }
    Rng split(Stream stream) const { return split(static_cast<std::uint64_t>(stream)); }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine()() >> 63); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine()() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound).
    std::size_t below(std::size_t bound) {
        std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
        return dist(engine());
    }

    template <typename T>
    void shuffle(std::span<T> items) {
        std::shuffle(items.begin(), items.end(), engine());
    }

    SplitMix64 &engine() { return engine_; }

private:
    std::uint64_t seed_;
    SplitMix64 engine_;
};

}  // namespace sqs
