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

namespace sqs {

enum class EventKind { QuantumSend, ClassicalMessage, Measurement, Verdict };

inline const char *to_string(EventKind k) {
    switch (k) {
        case EventKind::QuantumSend: return "quantum";
        case EventKind::ClassicalMessage: return "classical";
        case EventKind::Measurement: return "measurement";
        case EventKind::Verdict: return "verdict";
    }
    return "?";
}

// Labels shared by the protocol code and the causality check.
namespace labels {
inline constexpr const char *kForwardSequence = "decoy_embedded_sequence";
inline constexpr const char *kReceiptConfirmation = "receipt_confirmation";
inline constexpr const char *kLocAnnouncement = "loc_announcement";
inline constexpr const char *kReturnedDecoys = "returned_decoys";
inline constexpr const char *kReturnConfirmation = "return_confirmation";
inline constexpr const char *kPermutationAnnouncement = "permutation_announcement";
}  // namespace labels

struct TranscriptEvent {
    EventKind kind;
    std::string from;
    std::string to;
    std::string label;
    // Raw bits for classical messages, qubit count for quantum sends.
    std::string payload;
    std::string note;
};

/// Ordered record of everything that happened in one run.
class RunTranscript {
public:
    void add(TranscriptEvent e) { events_.push_back(std::move(e)); }

    const std::vector<TranscriptEvent> &events() const { return events_; }
    bool empty() const { return events_.empty(); }

    std::ptrdiff_t index_of(const std::string &label) const {
        for (std::size_t i = 0; i < events_.size(); ++i)
            if (events_[i].label == label) return static_cast<std::ptrdiff_t>(i);
        return -1;
    }

    /// In the four-message flow each announcement must follow the matching
    /// confirmation, which in turn must follow the quantum send it confirms.
    bool respects_four_message_causality() const {
        auto before = [&](const char *a, const char *b) {
            const auto ia = index_of(a);
            const auto ib = index_of(b);
            return ib < 0 || (ia >= 0 && ia < ib);
        };
        return before(labels::kForwardSequence, labels::kReceiptConfirmation) &&
               before(labels::kReceiptConfirmation, labels::kLocAnnouncement) &&
               before(labels::kReturnedDecoys, labels::kReturnConfirmation) &&
               before(labels::kReturnConfirmation, labels::kPermutationAnnouncement);
    }

private:
    std::vector<TranscriptEvent> events_;
};

}  // namespace sqs
