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

#ifndef WALKPORT_STATE_PREP_HPP_
#define WALKPORT_STATE_PREP_HPP_

#include <cctype>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "walkport/gates.hpp"
#include "walkport/statevector.hpp"

namespace walkport {

/// Loads an explicit amplitude vector. The input must be within 1e-6 of unit
/// norm; it is renormalized exactly on load.
inline StateVector prepare_arbitrary(std::vector<Amplitude> amplitudes) {
    const std::size_t len = amplitudes.size();
    if (len < 2 || (len & (len - 1)) != 0) {
        throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    double norm_sq = 0.0;
    for (const Amplitude& a : amplitudes) norm_sq += std::norm(a);
    if (norm_sq < 1e-12) {
        throw std::invalid_argument("unnormalizable");
    }
    if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-6) {
        throw std::invalid_argument("amplitude vector is not normalized");
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (Amplitude& a : amplitudes) a *= scale;
    return StateVector::from_amplitudes(std::move(amplitudes));
}

/// (|00> + |11>)/sqrt(2), built from H then CNOT.
inline StateVector prepare_bell() {
    StateVector s = StateVector::basis_state(2, 0);
    s.apply_single_qubit(hadamard_matrix(), 0);
    s.apply_controlled_permutation({0}, 1, {1}, {1, 0});
    return s;
}

/// (|000> + |111>)/sqrt(2), built from H and two CNOTs.
inline StateVector prepare_ghz() {
    StateVector s = StateVector::basis_state(3, 0);
    s.apply_single_qubit(hadamard_matrix(), 0);
    s.apply_controlled_permutation({0}, 1, {1}, {1, 0});
    s.apply_controlled_permutation({1}, 1, {2}, {1, 0});
    return s;
}

/// (|001> + |010> + |100>)/sqrt(3) by direct amplitude assignment.
inline StateVector prepare_w() {
    const double a = 1.0 / std::sqrt(3.0);
    std::vector<Amplitude> amps(8, Amplitude{0, 0});
    amps[1] = amps[2] = amps[4] = Amplitude{a, 0};
    return StateVector::from_amplitudes(std::move(amps));
}

namespace detail {

inline std::vector<double> parse_doubles(const std::string& text, char sep) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, sep)) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("state spec: cannot parse number '" + token + "'");
        }
        while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
        if (used != token.size()) {
            throw std::invalid_argument("state spec: cannot parse number '" + token + "'");
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace detail

/// State-spec mini-language used by the CLI:
///   "bell" | "ghz" | "w" | "u3:<theta>,<phi>,<lambda>" | "vec:<re,im;re,im;...>"
inline StateVector prepare_from_spec(const std::string& spec) {
    if (spec == "bell") return prepare_bell();
    if (spec == "ghz") return prepare_ghz();
    if (spec == "w") return prepare_w();
    if (spec.rfind("u3:", 0) == 0) {
        const std::vector<double> angles = detail::parse_doubles(spec.substr(3), ',');
        if (angles.size() != 3) {
            throw std::invalid_argument("state spec: u3 takes three angles");
        }
        StateVector s = StateVector::basis_state(1, 0);
        s.apply_single_qubit(u3_matrix(angles[0], angles[1], angles[2]), 0);
        return s;
    }
    if (spec.rfind("vec:", 0) == 0) {
        std::vector<Amplitude> amps;
        std::stringstream ss(spec.substr(4));
        std::string entry;
        while (std::getline(ss, entry, ';')) {
            const std::vector<double> parts = detail::parse_doubles(entry, ',');
            if (parts.size() != 2) {
                throw std::invalid_argument("state spec: vec entries are re,im pairs");
            }
            amps.emplace_back(parts[0], parts[1]);
        }
        return prepare_arbitrary(std::move(amps));
    }
    throw std::invalid_argument("unknown state spec '" + spec + "'");
}

/// Number of qubits a state spec describes, without building the state.
inline int state_spec_qubits(const std::string& spec) {
    if (spec == "bell") return 2;
    if (spec == "ghz" || spec == "w") return 3;
    if (spec.rfind("u3:", 0) == 0) return 1;
    return prepare_from_spec(spec).num_qubits();
}

}  // namespace walkport

#endif  // WALKPORT_STATE_PREP_HPP_
