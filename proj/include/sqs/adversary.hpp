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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqs/bits.hpp"
#include "sqs/register_bank.hpp"
#include "sqs/signing.hpp"

namespace sqs {

enum class TapPoint {
    ForwardAliceToTrent,
    ReturnTrentToAlice,
    AliceToBobQuantum,
    AliceToBobClassical,
    BobToTrentClassical,
};

inline const char *to_string(TapPoint p) {
    switch (p) {
        case TapPoint::ForwardAliceToTrent: return "forward_alice_to_trent";
        case TapPoint::ReturnTrentToAlice: return "return_trent_to_alice";
        case TapPoint::AliceToBobQuantum: return "alice_to_bob_quantum";
        case TapPoint::AliceToBobClassical: return "alice_to_bob_classical";
        case TapPoint::BobToTrentClassical: return "bob_to_trent_classical";
    }
    return "?";
}

enum class AttackKind {
    NoAttack,
    InterceptMeasureResendZ,
    UnitaryTamperThenUndo,
    PauliXTamper,
    EntangleProbe,
    ForgeFromScratch,
    TamperSignatureB,
    TamperClassicalMessage,
};

/// When the probe ancillas are read out.
enum class ProbeTiming { AfterForward, AfterReturn };

struct AttackStrategy {
    AttackKind kind = AttackKind::NoAttack;
    // UnitaryTamperThenUndo
    Operator unitary = gates::X();
    std::string unitary_name = "X";
    // EntangleProbe: (transmitted, ancilla) joint gate
    Operator probe_gate = gates::CNOT();
    ProbeTiming probe_timing = ProbeTiming::AfterReturn;
    // TamperSignatureB
    std::vector<std::size_t> positions;
    // TamperClassicalMessage
    std::vector<std::size_t> flips;

    static AttackStrategy none() { return {}; }
    static AttackStrategy intercept_measure_resend_z() {
        AttackStrategy s;
        s.kind = AttackKind::InterceptMeasureResendZ;
        return s;
    }
    static AttackStrategy unitary_tamper(std::string name, Operator u) {
        if (u.dim() != 2 || !u.is_unitary()) fail(ErrorCode::NonUnitary, "tamper operation must be a 2x2 unitary");
        AttackStrategy s;
        s.kind = AttackKind::UnitaryTamperThenUndo;
        s.unitary = std::move(u);
        s.unitary_name = std::move(name);
        return s;
    }
    static AttackStrategy pauli_x_tamper() {
        AttackStrategy s;
        s.kind = AttackKind::PauliXTamper;
        return s;
    }
    static AttackStrategy entangle_probe(ProbeTiming timing = ProbeTiming::AfterReturn, Operator gate = gates::CNOT()) {
        if (gate.dim() != 4 || !gate.is_unitary()) fail(ErrorCode::NonUnitary, "probe gate must be a 4x4 unitary");
        AttackStrategy s;
        s.kind = AttackKind::EntangleProbe;
        s.probe_timing = timing;
        s.probe_gate = std::move(gate);
        return s;
    }
    static AttackStrategy forge_from_scratch() {
        AttackStrategy s;
        s.kind = AttackKind::ForgeFromScratch;
        return s;
    }
    static AttackStrategy tamper_signature_b(std::vector<std::size_t> positions) {
        AttackStrategy s;
        s.kind = AttackKind::TamperSignatureB;
        s.positions = std::move(positions);
        return s;
    }
    static AttackStrategy tamper_classical_message(std::vector<std::size_t> flips) {
        AttackStrategy s;
        s.kind = AttackKind::TamperClassicalMessage;
        s.flips = std::move(flips);
        return s;
    }

    /// The operation applied on the forward leg and undone on the return leg.
    const Operator &tamper_op() const { return kind == AttackKind::PauliXTamper ? gates::X() : unitary; }

    std::string describe() const {
        auto list = [](const std::vector<std::size_t> &v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        switch (kind) {
            case AttackKind::NoAttack: return "none";
            case AttackKind::InterceptMeasureResendZ: return "intercept_measure_resend_z";
            case AttackKind::UnitaryTamperThenUndo: return "unitary_tamper_then_undo(" + unitary_name + ")";
            case AttackKind::PauliXTamper: return "pauli_x_tamper";
            case AttackKind::EntangleProbe:
                return std::string("entangle_probe(") +
                       (probe_timing == ProbeTiming::AfterForward ? "after_forward" : "after_return") + ")";
            case AttackKind::ForgeFromScratch: return "forge";
            case AttackKind::TamperSignatureB: return "tamper_signature_b(" + list(positions) + ")";
            case AttackKind::TamperClassicalMessage: return "tamper_classical_message(" + list(flips) + ")";
        }
        return "?";
    }
};

/// Everything the adversary holds: probes, measurement records, and the
/// public classical traffic it has seen.
struct AdversaryMemory {
    std::vector<QubitHandle> ancillas;
    std::vector<std::uint8_t> ancilla_outcomes;
    std::vector<std::uint8_t> intercepted_bits;
    std::vector<std::pair<std::string, BitString>> observed;
    BitString last_message_seen;
};

/// Uniform guess of every bit of B'; without K_AT, T, or g nothing better exists.
inline BitString forge_signature(std::size_t n, const BitString &m_prime, Rng &rng) {
    if (!m_prime.empty() && m_prime.size() != n) fail(ErrorCode::LengthMismatch, "forged message length differs from n");
    return BitString::random(n, rng);
}

/// Pauli-X on the BobHalf at each listed position.
inline SignatureBundle tamper_b_sequence(RegisterBank &bank, const SignatureBundle &bundle,
                                         std::span<const std::size_t> positions) {
    for (auto p : positions) {
        if (p >= bundle.b_sequence.size()) {
            fail(ErrorCode::InvalidArgument, "tamper position " + std::to_string(p) + " outside signature of length " +
                                                 std::to_string(bundle.b_sequence.size()));
        }
    }
    for (auto p : positions) bank.apply(bundle.b_sequence[p], gates::X());
    return bundle;
}

/// Couples a fresh |0> ancilla to `target` with `gate` (target is the first
/// gate qubit). Returns the ancilla.
inline QubitHandle entangle_probe_attack(RegisterBank &bank, QubitHandle target, const Operator &gate = gates::CNOT()) {
    const auto ancilla = bank.attach(target, prepare_single(Basis::Z, 0, QubitRole::EveAncilla));
    bank.apply(target, ancilla, gate);
    return ancilla;
}

class Adversary {
public:
    explicit Adversary(AttackStrategy strategy) : strategy_(std::move(strategy)) {}

    const AttackStrategy &strategy() const { return strategy_; }
    const AdversaryMemory &memory() const { return memory_; }

    /// Quantum tap: acts on the in-flight qubits in place.
    void tap(TapPoint point, RegisterBank &bank, std::span<const QubitHandle> payload, Rng &rng) {
        switch (strategy_.kind) {
            case AttackKind::InterceptMeasureResendZ:
                if (point == TapPoint::ForwardAliceToTrent) {
                    for (auto h : payload) memory_.intercepted_bits.push_back(bank.measure(h, Basis::Z, rng));
                }
                break;
            case AttackKind::UnitaryTamperThenUndo:
            case AttackKind::PauliXTamper:
                if (point == TapPoint::ForwardAliceToTrent) {
                    for (auto h : payload) bank.apply(h, strategy_.tamper_op());
                } else if (point == TapPoint::ReturnTrentToAlice) {
                    const Operator undo = strategy_.tamper_op().dagger();
                    for (auto h : payload) bank.apply(h, undo);
                }
                break;
            case AttackKind::EntangleProbe:
                if (point == TapPoint::ForwardAliceToTrent) {
                    for (auto h : payload) memory_.ancillas.push_back(entangle_probe_attack(bank, h, strategy_.probe_gate));
                    if (strategy_.probe_timing == ProbeTiming::AfterForward) read_probes(bank, rng);
                } else if (point == TapPoint::ReturnTrentToAlice &&
                           strategy_.probe_timing == ProbeTiming::AfterReturn) {
                    read_probes(bank, rng);
                }
                break;
            case AttackKind::TamperSignatureB:
                if (point == TapPoint::AliceToBobQuantum) {
                    SignatureBundle view{{}, {payload.begin(), payload.end()}};
                    tamper_b_sequence(bank, view, strategy_.positions);
                }
                break;
            default:
                break;
        }
    }

    /// Classical tap: may rewrite the payload.
    void tap(TapPoint point, BitString &payload, Rng &rng) {
        memory_.observed.emplace_back(to_string(point), payload);
        switch (strategy_.kind) {
            case AttackKind::TamperClassicalMessage:
                if (point == TapPoint::AliceToBobClassical) {
                    for (auto i : strategy_.flips) {
                        if (i >= payload.size()) {
                            fail(ErrorCode::InvalidArgument, "message flip index " + std::to_string(i) + " out of range");
                        }
                        payload.flip(i);
                    }
                }
                break;
            case AttackKind::ForgeFromScratch:
                if (point == TapPoint::AliceToBobClassical) memory_.last_message_seen = payload;
                if (point == TapPoint::BobToTrentClassical) {
                    payload = forge_signature(payload.size(), memory_.last_message_seen, rng);
                }
                break;
            default:
                break;
        }
    }

    /// Public announcements are readable (ciphertext verbatim when encrypted) but not writable.
    void observe(const std::string &label, const BitString &bits) { memory_.observed.emplace_back(label, bits); }

private:
    void read_probes(RegisterBank &bank, Rng &rng) {
        for (std::size_t i = memory_.ancilla_outcomes.size(); i < memory_.ancillas.size(); ++i)
            memory_.ancilla_outcomes.push_back(bank.measure(memory_.ancillas[i], Basis::Z, rng));
    }

    AttackStrategy strategy_;
    AdversaryMemory memory_;
};

}  // namespace sqs
