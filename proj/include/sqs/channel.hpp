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

#include "sqs/adversary.hpp"
#include "sqs/transcript.hpp"

namespace sqs {

/// Public channel between parties. Every transmission passes the adversary
/// tap exactly once, then (optionally) a depolarizing channel.
class Channel {
public:
    Channel(Adversary &adversary, Rng adversary_rng, double noise_p, Rng noise_rng, RunTranscript *transcript = nullptr)
        : adversary_(adversary),
          adversary_rng_(adversary_rng),
          noise_p_(noise_p),
          noise_rng_(noise_rng),
          transcript_(transcript) {
        if (noise_p < 0.0 || noise_p >= 1.0) fail(ErrorCode::InvalidArgument, "noise_p must lie in [0, 1)");
    }

    void send_quantum(TapPoint point, RegisterBank &bank, std::span<const QubitHandle> qubits, const std::string &from,
                      const std::string &to, const std::string &label) {
        adversary_.tap(point, bank, qubits, adversary_rng_);
        if (noise_p_ > 0.0) depolarize(bank, qubits);
        if (recording())
            record({EventKind::QuantumSend, from, to, label, std::to_string(qubits.size()) + " qubits",
                std::string("tap=") + to_string(point)});
    }

    BitString send_classical(TapPoint point, BitString payload, const std::string &from, const std::string &to,
                             const std::string &label) {
        adversary_.tap(point, payload, adversary_rng_);
        if (recording())
            record({EventKind::ClassicalMessage, from, to, label, payload.str(), std::string("tap=") + to_string(point)});
        return payload;
    }

    /// Authenticated public announcement: the adversary reads it but cannot alter it.
    void publish(const std::string &from, const std::string &to, const std::string &label, const BitString &bits,
                 const std::string &note = "") {
        adversary_.observe(label, bits);
        if (recording()) record({EventKind::ClassicalMessage, from, to, label, bits.str(), note});
    }

    void record(TranscriptEvent e) {
        if (transcript_) transcript_->add(std::move(e));
    }

    bool recording() const { return transcript_ != nullptr; }
    double noise_p() const { return noise_p_; }
    RunTranscript *transcript() const { return transcript_; }

private:
    // With probability p a uniformly chosen Pauli hits the qubit; X and Y flip
    // a Z eigenstate, so the flip probability is 2p/3.
    void depolarize(RegisterBank &bank, std::span<const QubitHandle> qubits) {
        for (auto h : qubits) {
            if (noise_rng_.uniform() >= noise_p_) continue;
            switch (noise_rng_.below(3)) {
                case 0: bank.apply(h, gates::X()); break;
                case 1: bank.apply(h, gates::Y()); break;
                default: bank.apply(h, gates::Z()); break;
            }
        }
    }

    Adversary &adversary_;
    Rng adversary_rng_;
    double noise_p_;
    Rng noise_rng_;
    RunTranscript *transcript_;
};

}  // namespace sqs
