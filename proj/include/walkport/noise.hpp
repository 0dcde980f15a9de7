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

#ifndef WALKPORT_NOISE_HPP_
#define WALKPORT_NOISE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "walkport/gates.hpp"
#include "walkport/rng.hpp"
#include "walkport/statevector.hpp"

namespace walkport {

/// Stochastic (trajectory-unravelled) noise knobs. p1 is the depolarizing
/// probability after each single-qubit gate; p2 gives one depolarizing event
/// per two-qubit (coin-position shift) gate, landing on a uniformly chosen
/// touched qubit; readout_flip is the per-bit flip probability at
/// measurement.
struct NoiseParams {
    double p1 = 0.0;
    double p2 = 0.0;
    double readout_flip = 0.0;

    /// Illustrative hardware-like preset; not calibrated to any device.
    static NoiseParams paperlike() { return {0.004, 0.03, 0.02}; }

    bool is_zero() const { return p1 == 0.0 && p2 == 0.0 && readout_flip == 0.0; }

    void validate() const {
        if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
            throw std::invalid_argument("depolarizing probabilities must lie in [0, 1]");
        }
        if (readout_flip < 0.0 || readout_flip > 0.5) {
            throw std::invalid_argument("readout flip probability must lie in [0, 0.5]");
        }
    }
};

/// Draws the depolarizing event for one insertion point: nullopt with
/// probability 1-p, otherwise a uniformly chosen Pauli. Consumes no
/// randomness when p is zero, so zero-noise runs are bit-identical to runs
/// without noise code.
inline std::optional<PauliAxis> sample_depolarizing(double p, RngStream& rng) {
    if (p <= 0.0) return std::nullopt;
    if (rng.uniform() >= p) return std::nullopt;
    switch (rng.uniform_below(3)) {
        case 0: return PauliAxis::X;
        case 1: return PauliAxis::Y;
        default: return PauliAxis::Z;
    }
}

inline void apply_depolarizing(StateVector& state, int qubit, double p, RngStream& rng) {
    const std::optional<PauliAxis> pauli = sample_depolarizing(p, rng);
    if (!pauli) return;
    switch (*pauli) {
        case PauliAxis::X: state.apply_single_qubit(pauli_x_matrix(), qubit); break;
        case PauliAxis::Y: state.apply_single_qubit(pauli_y_matrix(), qubit); break;
        case PauliAxis::Z: state.apply_single_qubit(pauli_z_matrix(), qubit); break;
    }
}

/// Flips each of the n low bits of outcome_bits independently with the given
/// probability. Consumes exactly n draws when prob > 0 and none otherwise.
inline std::uint64_t flip_readout(std::uint64_t outcome_bits, int n, double prob,
                                  RngStream& rng) {
    if (prob < 0.0 || prob > 0.5) {
        throw std::invalid_argument("readout flip probability must lie in [0, 0.5]");
    }
    if (prob == 0.0) return outcome_bits;
    for (int b = 0; b < n; ++b) {
        if (rng.uniform() < prob) outcome_bits ^= (std::uint64_t{1} << b);
    }
    return outcome_bits;
}

}  // namespace walkport

#endif  // WALKPORT_NOISE_HPP_
