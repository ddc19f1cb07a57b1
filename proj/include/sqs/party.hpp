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

#include <string>
#include <vector>

#include "sqs/register_bank.hpp"

namespace sqs {

enum class PartyKind { Quantum, Classical };

enum class PrimitiveOp : std::uint8_t {
    PrepareZ,
    PrepareX,
    PrepareBell,
    MeasureZ,
    MeasureX,
    ApplyUnitary,
    Reflect,
    Reorder,
    Delay,
    ClassicalCompute,
};

inline const char *to_string(PrimitiveOp op) {
    switch (op) {
        case PrimitiveOp::PrepareZ: return "PrepareZ";
        case PrimitiveOp::PrepareX: return "PrepareX";
        case PrimitiveOp::PrepareBell: return "PrepareBell";
        case PrimitiveOp::MeasureZ: return "MeasureZ";
        case PrimitiveOp::MeasureX: return "MeasureX";
        case PrimitiveOp::ApplyUnitary: return "ApplyUnitary";
        case PrimitiveOp::Reflect: return "Reflect";
        case PrimitiveOp::Reorder: return "Reorder";
        case PrimitiveOp::Delay: return "Delay";
        case PrimitiveOp::ClassicalCompute: return "ClassicalCompute";
    }
    return "?";
}

/// The operations a classical (semi-quantum) party may perform.
inline bool classical_permits(PrimitiveOp op) {
    switch (op) {
        case PrimitiveOp::PrepareZ:
        case PrimitiveOp::MeasureZ:
        case PrimitiveOp::Reflect:
        case PrimitiveOp::Reorder:
        case PrimitiveOp::Delay:
        case PrimitiveOp::ClassicalCompute:
            return true;
        default:
            return false;
    }
}

/// A protocol participant. Every quantum primitive goes through perform(),
/// which rejects anything outside the party's capability set before it
/// touches a qubit.
class Party {
public:
    Party(std::string name, PartyKind kind) : name_(std::move(name)), kind_(kind) {}

    const std::string &name() const { return name_; }
    PartyKind kind() const { return kind_; }
    const std::vector<PrimitiveOp> &op_log() const { return log_; }

    bool permits(PrimitiveOp op) const { return kind_ == PartyKind::Quantum || classical_permits(op); }

    void perform(PrimitiveOp op) {
        if (!permits(op)) {
            fail(ErrorCode::CapabilityViolation, name_ + " is classical and cannot perform " + to_string(op));
        }
        log_.push_back(op);
    }

    /// True if the log only holds operations the party's kind allows.
    bool log_respects_capability() const {
        for (auto op : log_)
            if (!permits(op)) return false;
        return true;
    }

    std::uint8_t measure(RegisterBank &bank, QubitHandle h, Basis basis, Rng &rng) {
        perform(basis == Basis::Z ? PrimitiveOp::MeasureZ : PrimitiveOp::MeasureX);
        return bank.measure(h, basis, rng);
    }

    QubitHandle prepare(RegisterBank &bank, Basis basis, std::uint8_t bit, QubitRole role = QubitRole::Decoy) {
        perform(basis == Basis::Z ? PrimitiveOp::PrepareZ : PrimitiveOp::PrepareX);
        return bank.add_single(prepare_single(basis, bit, role));
    }

    /// Returns {TrentHalf, BobHalf}.
    std::pair<QubitHandle, QubitHandle> prepare_bell_pair(RegisterBank &bank, std::uint8_t g_bit) {
        perform(PrimitiveOp::PrepareBell);
        const auto h = bank.add(prepare_bell(g_bit));
        return {h[0], h[1]};
    }

    void apply(RegisterBank &bank, QubitHandle h, const Operator &u) {
        perform(PrimitiveOp::ApplyUnitary);
        bank.apply(h, u);
    }

    void note(PrimitiveOp op) { perform(op); }

private:
    std::string name_;
    PartyKind kind_;
    std::vector<PrimitiveOp> log_;
};

}  // namespace sqs
