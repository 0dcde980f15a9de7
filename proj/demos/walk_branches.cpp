// Copyright 2026 The walkport authors
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

// Walks every forced (q, p) branch of single-qubit teleportation and shows
// that each branch restores the input after the matching correction.

#include <cstdio>

#include "walkport/protocol.hpp"
#include "walkport/state_prep.hpp"

int main() {
    const walkport::StateVector phi =
        walkport::prepare_from_spec("u3:1.0471975511965976,1.5707963267948966,1.5707963267948966");

    walkport::ProtocolConfig config;
    config.n = 1;
    config.mode = walkport::RunMode::ExactBranches;

    std::printf("branch  probability  fidelity\n");
    for (std::uint64_t q = 0; q < 2; ++q) {
        for (std::uint64_t p = 0; p < 2; ++p) {
            const walkport::TeleportResult r = walkport::run_protocol_branch(phi, q, p, config);
            std::printf("(q=%llu,p=%llu)  %.6f     %.12f\n",
                        static_cast<unsigned long long>(q), static_cast<unsigned long long>(p),
                        r.record.branch_probability, r.fidelity_to_input);
        }
    }
    return 0;
}
