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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqs {

enum class ErrorCode {
    InvalidArgument,
    LengthMismatch,
    NonUnitary,
    RegisterCapExceeded,
    DimensionMismatch,
    KeyExhausted,
    ReuseAttempt,
    CapabilityViolation,
    BadEncoding,
    PermutationMismatch,
    DetectionAbort,
    ConfigError,
    InvariantFailure,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonUnitary: return "NonUnitary";
        case ErrorCode::RegisterCapExceeded: return "RegisterCapExceeded";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::KeyExhausted: return "KeyExhausted";
        case ErrorCode::ReuseAttempt: return "ReuseAttempt";
        case ErrorCode::CapabilityViolation: return "CapabilityViolation";
        case ErrorCode::BadEncoding: return "BadEncoding";
        case ErrorCode::PermutationMismatch: return "PermutationMismatch";
        case ErrorCode::DetectionAbort: return "DetectionAbort";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvariantFailure: return "InvariantFailure";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
    throw Error(code, what);
}

}  // namespace sqs
