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

#include <array>
#include <cstdint>
#include <vector>

#include "sqs/quantum.hpp"

namespace sqs {

/// Names one qubit of one register held in a RegisterBank.
struct QubitHandle {
    std::uint32_t reg = 0;
    std::uint8_t qubit = 0;

    friend bool operator==(const QubitHandle &, const QubitHandle &) = default;
};

/// Owns every register alive in one protocol run. Positions never become
/// entangled with each other, so each Bell pair or decoy is its own register
/// and sequences are just lists of handles.
class RegisterBank {
public:
    std::vector<QubitHandle> add(StateVector state) {
        const auto reg = static_cast<std::uint32_t>(registers_.size());
        std::vector<QubitHandle> handles;
        handles.reserve(state.num_qubits());
        for (std::size_t q = 0; q < state.num_qubits(); ++q) handles.push_back({reg, static_cast<std::uint8_t>(q)});
        registers_.push_back(std::move(state));
        return handles;
    }

    QubitHandle add_single(StateVector state) {
        if (state.num_qubits() != 1) fail(ErrorCode::InvalidArgument, "add_single expects one qubit");
        return add(std::move(state)).front();
    }

    void reserve(std::size_t registers) { registers_.reserve(registers); }

    const StateVector &state(std::uint32_t reg) const { return registers_.at(reg); }
    const StateVector &state(QubitHandle h) const { return registers_.at(h.reg); }
    QubitRole role(QubitHandle h) const { return state(h).label(h.qubit); }
    std::size_t size() const { return registers_.size(); }

    void apply(QubitHandle h, const Operator &u) {
        auto &s = registers_.at(h.reg);
        const std::array<std::size_t, 1> t{h.qubit};
        s = apply_unitary(s, u, t);
    }

    /// Two-qubit gate; both qubits must already share a register.
    void apply(QubitHandle first, QubitHandle second, const Operator &u) {
        if (first.reg != second.reg) fail(ErrorCode::InvalidArgument, "two-qubit gate across registers");
        auto &s = registers_.at(first.reg);
        const std::array<std::size_t, 2> t{first.qubit, second.qubit};
        s = apply_unitary(s, u, t);
    }

    std::uint8_t measure(QubitHandle h, Basis basis, Rng &rng) {
        auto &s = registers_.at(h.reg);
        auto outcome = sqs::measure(s, h.qubit, basis, rng);
        s = outcome.post_state;
        return outcome.bit;
    }

    /// Tensors `ancilla` onto the register of `h`; returns the new qubit.
    QubitHandle attach(QubitHandle h, const StateVector &ancilla) {
        auto &s = registers_.at(h.reg);
        const std::array<StateVector, 2> parts{s, ancilla};
        s = tensor(parts);
        return {h.reg, static_cast<std::uint8_t>(s.num_qubits() - ancilla.num_qubits())};
    }

    DensityMatrix reduced(QubitHandle h) const {
        const std::array<std::size_t, 1> keep{h.qubit};
        return partial_trace(state(h), keep);
    }

private:
    std::vector<StateVector> registers_;
};

}  // namespace sqs
