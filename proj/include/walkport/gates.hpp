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

#ifndef WALKPORT_GATES_HPP_
#define WALKPORT_GATES_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "walkport/statevector.hpp"

namespace walkport {

inline Mat2 pauli_x_matrix() {
    return {{{Amplitude{0, 0}, Amplitude{1, 0}}, {Amplitude{1, 0}, Amplitude{0, 0}}}};
}

inline Mat2 pauli_y_matrix() {
    return {{{Amplitude{0, 0}, Amplitude{0, -1}}, {Amplitude{0, 1}, Amplitude{0, 0}}}};
}

inline Mat2 pauli_z_matrix() {
    return {{{Amplitude{1, 0}, Amplitude{0, 0}}, {Amplitude{0, 0}, Amplitude{-1, 0}}}};
}

inline Mat2 hadamard_matrix() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {{{Amplitude{s, 0}, Amplitude{s, 0}}, {Amplitude{s, 0}, Amplitude{-s, 0}}}};
}

inline Mat2 s_dagger_matrix() {
    return {{{Amplitude{1, 0}, Amplitude{0, 0}}, {Amplitude{0, 0}, Amplitude{0, -1}}}};
}

/// U3(theta, phi, lambda) =
///   [ cos(theta/2)              -e^{i lambda} sin(theta/2)        ]
///   [ e^{i phi} sin(theta/2)     e^{i(phi+lambda)} cos(theta/2)   ]
inline Mat2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {{{Amplitude{c, 0}, -std::polar(s, lambda)},
             {std::polar(s, phi), std::polar(c, phi + lambda)}}};
}

enum class PauliAxis { X, Y, Z };

/// A gate in the vocabulary shared by the protocol engine and the circuit
/// exporter. X/Z/H/U3 act on targets[0] under optional all-ones controls;
/// ControlledShift adds the value of `controls` (the coin) into `targets`
/// (the position) mod 2^n; Permutation routes the targets' sub-index through
/// an explicit bijection.
struct GateSpec {
    enum class Kind { X, Z, H, U3, ControlledShift, Permutation };

    Kind kind = Kind::X;
    std::vector<int> targets;
    std::vector<int> controls;
    std::array<double, 3> angles{};           // U3 only: theta, phi, lambda
    std::vector<std::uint64_t> permutation;   // Permutation only

    static GateSpec single(Kind kind, int target, std::vector<int> controls = {}) {
        GateSpec g;
        g.kind = kind;
        g.targets = {target};
        g.controls = std::move(controls);
        return g;
    }

    static GateSpec u3(double theta, double phi, double lambda, int target,
                       std::vector<int> controls = {}) {
        GateSpec g = single(Kind::U3, target, std::move(controls));
        g.angles = {theta, phi, lambda};
        return g;
    }
};

inline void apply_gate(StateVector& state, const GateSpec& gate) {
    switch (gate.kind) {
        case GateSpec::Kind::X:
        case GateSpec::Kind::Z:
        case GateSpec::Kind::H:
        case GateSpec::Kind::U3: {
            if (gate.targets.size() != 1) {
                throw std::invalid_argument("single-qubit gate takes exactly one target");
            }
            Mat2 m;
            if (gate.kind == GateSpec::Kind::X) m = pauli_x_matrix();
            else if (gate.kind == GateSpec::Kind::Z) m = pauli_z_matrix();
            else if (gate.kind == GateSpec::Kind::H) m = hadamard_matrix();
            else m = u3_matrix(gate.angles[0], gate.angles[1], gate.angles[2]);
            state.apply_controlled_single_qubit(m, gate.controls, gate.targets[0]);
            break;
        }
        case GateSpec::Kind::ControlledShift: {
            // Position |l> -> |(l + k) mod 2^n> for every coin value |k>,
            // realized as 2^n controlled permutations on the kernel.
            if (gate.controls.size() != gate.targets.size()) {
                throw std::invalid_argument("conditional shift: coin and position registers must have equal length");
            }
            const std::uint64_t d = std::uint64_t{1} << gate.targets.size();
            for (std::uint64_t k = 1; k < d; ++k) {
                std::vector<std::uint64_t> map(d);
                for (std::uint64_t l = 0; l < d; ++l) map[l] = (l + k) % d;
                state.apply_controlled_permutation(gate.controls, k, gate.targets, map);
            }
            break;
        }
        case GateSpec::Kind::Permutation: {
            const std::uint64_t all_ones = (std::uint64_t{1} << gate.controls.size()) - 1;
            state.apply_controlled_permutation(gate.controls, all_ones, gate.targets,
                                               gate.permutation);
            break;
        }
    }
}

/// Exact <psi|P|psi> for a Pauli on one qubit. X and Y are reduced to Z by
/// basis rotation on a scratch copy (H for X, then S-dagger first for Y).
inline double pauli_expectation(const StateVector& state, int qubit, PauliAxis axis) {
    StateVector rotated = state;
    if (axis == PauliAxis::Y) rotated.apply_single_qubit(s_dagger_matrix(), qubit);
    if (axis != PauliAxis::Z) rotated.apply_single_qubit(hadamard_matrix(), qubit);
    const std::vector<double> probs = rotated.register_probabilities({qubit});
    return probs[0] - probs[1];
}

}  // namespace walkport

#endif  // WALKPORT_GATES_HPP_
