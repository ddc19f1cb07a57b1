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

#include "sqs/error.hpp"
#include "sqs/tolerance.hpp"
#include "sqs/rng.hpp"
#include "sqs/bits.hpp"
#include "sqs/quantum.hpp"
#include "sqs/register_bank.hpp"
#include "sqs/hash.hpp"
#include "sqs/keystore.hpp"
#include "sqs/party.hpp"
#include "sqs/signing.hpp"
#include "sqs/transcript.hpp"
#include "sqs/adversary.hpp"
#include "sqs/channel.hpp"
#include "sqs/detection.hpp"
#include "sqs/protocol.hpp"
#include "sqs/harness/scenario.hpp"
#include "sqs/harness/efficiency.hpp"
#include "sqs/harness/density.hpp"
#include "sqs/harness/runner.hpp"
#include "sqs/harness/report.hpp"
