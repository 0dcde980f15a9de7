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

#ifndef WALKPORT_STATEVECTOR_HPP_
#define WALKPORT_STATEVECTOR_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkport/rng.hpp"

namespace walkport {

using Amplitude = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

/// A 2x2 gate matrix, row-major.
using Mat2 = std::array<std::array<Amplitude, 2>, 2>;

/// Qubit roles for a teleportation experiment. Within each list the first
/// index is the most significant bit of the register's integer value, so the
/// n-qubit register |i j ...> reads as the integer 2^{n-1} i + ....
struct RegisterLayout {
    std::vector<int> position;
    std::vector<int> alice_coin;
    std::vector<int> bob_coin;
    std::vector<int> ancilla;

    int n() const { return static_cast<int>(position.size()); }

    void validate() const {
        if (position.empty() || position.size() != alice_coin.size() ||
            position.size() != bob_coin.size()) {
            throw std::invalid_argument("register layout: position, alice and bob coins must have equal length n >= 1");
        }
        std::vector<int> all;
        for (const auto* reg : {&position, &alice_coin, &bob_coin, &ancilla}) {
            all.insert(all.end(), reg->begin(), reg->end());
        }
        std::vector<int> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("register layout: qubit lists must be pairwise disjoint");
        }
    }
};

struct MeasureOutcome {
    std::uint64_t value = 0;
    double probability = 0.0;
};

namespace detail {

inline bool is_unitary_2x2(const Mat2& m, double tol) {
    // Rows of U must be orthonormal: U U^dag = I.
    const Amplitude r00 = m[0][0] * std::conj(m[0][0]) + m[0][1] * std::conj(m[0][1]);
    const Amplitude r11 = m[1][0] * std::conj(m[1][0]) + m[1][1] * std::conj(m[1][1]);
    const Amplitude r01 = m[0][0] * std::conj(m[1][0]) + m[0][1] * std::conj(m[1][1]);
    return std::abs(r00 - 1.0) < tol && std::abs(r11 - 1.0) < tol && std::abs(r01) < tol;
}

}  // namespace detail

/// Dense complex state vector over `num_qubits` qubits. The global basis
/// index is big-endian in qubit order: qubit 0 is the most significant bit.
class StateVector {
  public:
    StateVector() = default;

    static StateVector basis_state(int num_qubits, std::uint64_t basis_index) {
        if (num_qubits < 1 || num_qubits > 62) {
            throw std::invalid_argument("qubit count out of supported range");
        }
        if (basis_index >= (std::uint64_t{1} << num_qubits)) {
            throw std::invalid_argument("basis index exceeds register");
        }
        StateVector s;
        s.num_qubits_ = num_qubits;
        s.amps_.assign(std::uint64_t{1} << num_qubits, Amplitude{0.0, 0.0});
        s.amps_[basis_index] = Amplitude{1.0, 0.0};
        return s;
    }

    /// Adopts the amplitudes as-is; the caller is responsible for
    /// normalization (state_prep renormalizes on load).
    static StateVector from_amplitudes(std::vector<Amplitude> amps) {
        const std::uint64_t len = amps.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw std::invalid_argument("amplitude count must be a power of two >= 2");
        }
        StateVector s;
        s.num_qubits_ = std::countr_zero(len);
        s.amps_ = std::move(amps);
        return s;
    }

    int num_qubits() const { return num_qubits_; }
    std::uint64_t size() const { return amps_.size(); }
    const Amplitude& operator[](std::uint64_t i) const { return amps_[i]; }
    std::span<const Amplitude> amplitudes() const { return amps_; }

    double norm_squared() const {
        double total = 0.0;
        for (const Amplitude& a : amps_) total += std::norm(a);
        return total;
    }

    /// Applies a 2x2 unitary to one qubit. Throws if the matrix is not
    /// unitary within 1e-9.
    void apply_single_qubit(const Mat2& gate, int target) {
        check_qubit(target);
        if (!detail::is_unitary_2x2(gate, kNormTolerance)) {
            throw std::invalid_argument("gate not unitary");
        }
        const std::uint64_t stride = bit_mask(target);
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            if (g & stride) continue;
            const Amplitude a0 = amps_[g];
            const Amplitude a1 = amps_[g | stride];
            amps_[g] = gate[0][0] * a0 + gate[0][1] * a1;
            amps_[g | stride] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }

    /// Like apply_single_qubit but only on amplitudes whose control qubits
    /// all read 1.
    void apply_controlled_single_qubit(const Mat2& gate, const std::vector<int>& controls,
                                       int target) {
        if (controls.empty()) {
            apply_single_qubit(gate, target);
            return;
        }
        check_register(controls);
        check_qubit(target);
        for (int c : controls) {
            if (c == target) throw std::invalid_argument("targets and controls must be disjoint");
        }
        if (!detail::is_unitary_2x2(gate, kNormTolerance)) {
            throw std::invalid_argument("gate not unitary");
        }
        std::uint64_t cmask = 0;
        for (int c : controls) cmask |= bit_mask(c);
        const std::uint64_t stride = bit_mask(target);
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            if ((g & stride) || (g & cmask) != cmask) continue;
            const Amplitude a0 = amps_[g];
            const Amplitude a1 = amps_[g | stride];
            amps_[g] = gate[0][0] * a0 + gate[0][1] * a1;
            amps_[g | stride] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }

    /// Routes the target-register sub-index l to index_map[l] on every
    /// amplitude whose control register reads control_value; all other
    /// amplitudes are untouched. index_map must be a bijection on
    /// [0, 2^len(targets)).
    void apply_controlled_permutation(const std::vector<int>& controls,
                                      std::uint64_t control_value,
                                      const std::vector<int>& targets,
                                      const std::vector<std::uint64_t>& index_map) {
        check_register(targets);
        if (!controls.empty()) {
            check_register(controls);
            for (int c : controls) {
                for (int t : targets) {
                    if (c == t) throw std::invalid_argument("targets and controls must be disjoint");
                }
            }
        }
        const std::uint64_t sub_size = std::uint64_t{1} << targets.size();
        if (control_value >= (std::uint64_t{1} << controls.size())) {
            throw std::invalid_argument("control value exceeds control register");
        }
        if (index_map.size() != sub_size || !is_bijection(index_map)) {
            throw std::invalid_argument("permutation not bijective");
        }
        std::vector<Amplitude> next = amps_;
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            if (read_register(g, controls) != control_value) continue;
            const std::uint64_t l = read_register(g, targets);
            next[write_register(g, targets, index_map[l])] = amps_[g];
        }
        amps_ = std::move(next);
    }

    /// Marginal Born-rule probabilities of the given register; entry r sums
    /// |amplitude|^2 over all global indices whose register bits read r.
    std::vector<double> register_probabilities(const std::vector<int>& reg) const {
        check_register(reg);
        std::vector<double> probs(std::uint64_t{1} << reg.size(), 0.0);
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            probs[read_register(g, reg)] += std::norm(amps_[g]);
        }
        return probs;
    }

    /// Projective measurement of a register: samples an outcome from the
    /// marginal distribution, zeroes inconsistent amplitudes and
    /// renormalizes. Returns the outcome and its pre-collapse probability.
    MeasureOutcome measure(const std::vector<int>& reg, RngStream& rng) {
        const std::vector<double> probs = register_probabilities(reg);
        const double u = rng.uniform();
        double cumulative = 0.0;
        std::uint64_t outcome = 0;
        bool found = false;
        std::uint64_t last_nonzero = 0;
        for (std::uint64_t r = 0; r < probs.size(); ++r) {
            if (probs[r] > 0.0) last_nonzero = r;
            cumulative += probs[r];
            if (!found && u < cumulative) {
                outcome = r;
                found = true;
            }
        }
        // u can exceed the cumulative total by rounding residue; land on the
        // last outcome that has weight.
        if (!found) outcome = last_nonzero;
        return {outcome, collapse(reg, outcome)};
    }

    /// Forced-outcome collapse; returns the branch probability. Throws
    /// "impossible outcome" when the branch has no weight.
    double collapse(const std::vector<int>& reg, std::uint64_t outcome) {
        check_register(reg);
        if (outcome >= (std::uint64_t{1} << reg.size())) {
            throw std::invalid_argument("outcome exceeds register");
        }
        double weight = 0.0;
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            if (read_register(g, reg) == outcome) weight += std::norm(amps_[g]);
        }
        if (weight < 1e-15) {
            throw std::runtime_error("impossible outcome");
        }
        const double scale = 1.0 / std::sqrt(weight);
        for (std::uint64_t g = 0; g < amps_.size(); ++g) {
            if (read_register(g, reg) == outcome) {
                amps_[g] *= scale;
            } else {
                amps_[g] = Amplitude{0.0, 0.0};
            }
        }
        return weight;
    }

    std::uint64_t read_register(std::uint64_t global_index, const std::vector<int>& reg) const {
        std::uint64_t value = 0;
        for (int q : reg) {
            value = (value << 1) | ((global_index & bit_mask(q)) ? 1u : 0u);
        }
        return value;
    }

    std::uint64_t write_register(std::uint64_t global_index, const std::vector<int>& reg,
                                 std::uint64_t value) const {
        for (auto it = reg.rbegin(); it != reg.rend(); ++it) {
            const std::uint64_t mask = bit_mask(*it);
            global_index = (value & 1) ? (global_index | mask) : (global_index & ~mask);
            value >>= 1;
        }
        return global_index;
    }

    std::uint64_t bit_mask(int qubit) const {
        return std::uint64_t{1} << (num_qubits_ - 1 - qubit);
    }

  private:
    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits_) {
            throw std::invalid_argument("qubit index out of range");
        }
    }

    void check_register(const std::vector<int>& reg) const {
        for (int q : reg) check_qubit(q);
        std::vector<int> sorted = reg;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("register has duplicate qubit indices");
        }
    }

    static bool is_bijection(const std::vector<std::uint64_t>& map) {
        std::vector<bool> seen(map.size(), false);
        for (std::uint64_t v : map) {
            if (v >= map.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    int num_qubits_ = 0;
    std::vector<Amplitude> amps_;
};

/// |<a|b>|^2 for pure states; insensitive to global phase.
inline double fidelity_pure(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("state dimensions differ");
    }
    Amplitude overlap{0.0, 0.0};
    for (std::uint64_t g = 0; g < a.size(); ++g) {
        overlap += std::conj(a[g]) * b[g];
    }
    return std::norm(overlap);
}

/// Amplitude-wise equality after fixing the global phase by the first
/// amplitude of `a` with magnitude above tol.
inline bool approx_equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                            double tol) {
    if (a.size() != b.size()) return false;
    Amplitude phase{1.0, 0.0};
    for (std::uint64_t g = 0; g < a.size(); ++g) {
        if (std::abs(a[g]) > tol) {
            if (std::abs(b[g]) <= tol) return false;
            phase = (a[g] / std::abs(a[g])) / (b[g] / std::abs(b[g]));
            break;
        }
    }
    for (std::uint64_t g = 0; g < a.size(); ++g) {
        if (std::abs(a[g] - phase * b[g]) > tol) return false;
    }
    return true;
}

}  // namespace walkport

#endif  // WALKPORT_STATEVECTOR_HPP_
