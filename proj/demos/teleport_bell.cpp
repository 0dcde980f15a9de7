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

// Teleports a Bell state through the two-step walk and prints the Z-basis
// histogram of Bob's coin.

#include <iostream>

#include "walkport/protocol.hpp"
#include "walkport/report.hpp"
#include "walkport/state_prep.hpp"

int main() {
    walkport::ProtocolConfig config;
    config.n = 2;
    config.shots = 8192;
    config.seed = 1;

    const walkport::StateVector bell = walkport::prepare_bell();
    const walkport::SampledRun run = walkport::run_protocol_sampled(bell, config);

    std::cout << "Bell state teleported, " << config.shots << " shots:\n";
    for (const auto& [outcome, count] : run.histogram.counts) {
        std::cout << "  |" << walkport::outcome_bits(outcome, config.n) << ">  " << count
                  << "  (" << static_cast<double>(count) / config.shots << ")\n";
    }

    double mean_fidelity = 0.0;
    for (const walkport::TeleportResult& r : run.samples) mean_fidelity += r.fidelity_to_input;
    std::cout << "mean per-shot fidelity: " << mean_fidelity / run.samples.size() << "\n";
    return 0;
}
