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

namespace sqs {

/// All numeric tolerances used by the simulator and its checks.
struct Tolerance {
    static constexpr double norm = 1e-12;
    static constexpr double unitary = 1e-10;
    static constexpr double hermitian = 1e-12;
    static constexpr double trace = 1e-12;
    static constexpr double psd_eigenvalue = -1e-10;
    static constexpr double fidelity = 1e-10;
    static constexpr double density_entry = 1e-12;
    // Monte Carlo acceptance band, in binomial standard deviations.
    static constexpr double sigmas = 3.0;
};

}  // namespace sqs
