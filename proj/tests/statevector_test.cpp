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

#include "walkport/statevector.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "testutil.hpp"
#include "walkport/gates.hpp"

using namespace walkport;
namespace wt = walkport::testing;

namespace {

const double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

StateVector bell_state() {
    StateVector s = StateVector::basis_state(2, 0);
    s.apply_single_qubit(hadamard_matrix(), 0);
    s.apply_controlled_permutation({0}, 1, {1}, {1, 0});
    return s;
}

// Two-step-walk state (|0>(a|00>+b|11>) + |1>(a|01>+b|10>))/sqrt(2),
// written directly as amplitudes so statevector checks do not depend on
// the protocol engine.
StateVector two_step_walk_state(double a, double b) {
    std::vector<Amplitude> amps(8, Amplitude{0, 0});
    amps[0b000] = a * kInvSqrt2;
    amps[0b011] = b * kInvSqrt2;
    amps[0b101] = a * kInvSqrt2;
    amps[0b110] = b * kInvSqrt2;
    return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace

TEST(BasisState, ZeroState) {
    const StateVector s = StateVector::basis_state(1, 0);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[0].real(), 1.0);
    EXPECT_DOUBLE_EQ(std::abs(s[1]), 0.0);
}

TEST(BasisState, ComputationalIndex) {
    const StateVector s = StateVector::basis_state(2, 3);
    EXPECT_DOUBLE_EQ(std::abs(s[3]), 1.0);
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(std::abs(s[i]), 0.0);

    const StateVector t = StateVector::basis_state(3, 5);
    EXPECT_EQ(t.size(), 8u);
    EXPECT_DOUBLE_EQ(std::abs(t[5]), 1.0);
}

TEST(BasisState, OutOfRangeThrows) {
    EXPECT_THROW(
        {
            try {
                StateVector::basis_state(2, 4);
            } catch (const std::invalid_argument& e) {
                EXPECT_STREQ(e.what(), "basis index exceeds register");
                throw;
            }
        },
        std::invalid_argument);
}

TEST(ApplySingleQubit, BitFlip) {
    StateVector s = StateVector::basis_state(1, 0);
    s.apply_single_qubit(pauli_x_matrix(), 0);
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-12);
}

TEST(ApplySingleQubit, Hadamard) {
    StateVector s = StateVector::basis_state(1, 0);
    s.apply_single_qubit(hadamard_matrix(), 0);
    EXPECT_NEAR(s[0].real(), kInvSqrt2, 1e-12);
    EXPECT_NEAR(s[1].real(), kInvSqrt2, 1e-12);
}

// U3(pi/3, pi/2, pi/2)|0> = (cos(pi/6), e^{i pi/2} sin(pi/6)): Z-basis
// probabilities (cos^2, sin^2) = (0.75, 0.25).
TEST(ApplySingleQubit, U3ReferenceAngles) {
    StateVector s = StateVector::basis_state(1, 0);
    s.apply_single_qubit(u3_matrix(std::numbers::pi / 3, std::numbers::pi / 2,
                                   std::numbers::pi / 2),
                         0);
    EXPECT_NEAR(std::norm(s[0]), 0.75, 1e-12);
    EXPECT_NEAR(std::norm(s[1]), 0.25, 1e-12);
}

TEST(ApplySingleQubit, NonUnitaryThrows) {
    StateVector s = StateVector::basis_state(1, 0);
    const Mat2 bad = {{{Amplitude{1, 0}, Amplitude{1, 0}}, {Amplitude{0, 0}, Amplitude{1, 0}}}};
    EXPECT_THROW(
        {
            try {
                s.apply_single_qubit(bad, 0);
            } catch (const std::invalid_argument& e) {
                EXPECT_STREQ(e.what(), "gate not unitary");
                throw;
            }
        },
        std::invalid_argument);
}

TEST(ControlledPermutation, CnotBehavior) {
    StateVector s = StateVector::basis_state(2, 0b10);
    s.apply_controlled_permutation({0}, 1, {1}, {1, 0});
    EXPECT_NEAR(std::abs(s[0b11]), 1.0, 1e-12);
}

TEST(ControlledPermutation, EmptyControlsIdentityMap) {
    StateVector s = bell_state();
    const StateVector before = s;
    s.apply_controlled_permutation({}, 0, {0, 1}, {0, 1, 2, 3});
    EXPECT_LT(wt::max_amplitude_diff(before, s), 1e-15);
}

TEST(ControlledPermutation, TwoControlModularAdd) {
    // |11> (x) |01>: controls read 3, target sub-index 1 -> (1+3) mod 4 = 0.
    StateVector s = StateVector::basis_state(4, 0b1101);
    s.apply_controlled_permutation({0, 1}, 3, {2, 3}, {3, 0, 1, 2});
    EXPECT_NEAR(std::abs(s[0b1100]), 1.0, 1e-12);
}

TEST(ControlledPermutation, NonBijectiveThrows) {
    StateVector s = StateVector::basis_state(2, 0);
    EXPECT_THROW(
        {
            try {
                s.apply_controlled_permutation({0}, 1, {1}, {0, 0});
            } catch (const std::invalid_argument& e) {
                EXPECT_STREQ(e.what(), "permutation not bijective");
                throw;
            }
        },
        std::invalid_argument);
}

// Permutation on an empty control set must equal the unconditional
// permutation, amplitude-exact.
TEST(ControlledPermutation, EmptyControlsEqualsUnconditional) {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector original = wt::random_state(3, rng);
        const std::vector<std::uint64_t> cycle = {1, 2, 3, 0};
        StateVector via_empty = original;
        via_empty.apply_controlled_permutation({}, 0, {1, 2}, cycle);
        // Manual unconditional routing of the same 2-qubit sub-index.
        std::vector<Amplitude> manual(original.size());
        for (std::uint64_t g = 0; g < original.size(); ++g) {
            const std::uint64_t l = original.read_register(g, {1, 2});
            manual[original.write_register(g, {1, 2}, cycle[l])] = original[g];
        }
        const StateVector expected = StateVector::from_amplitudes(std::move(manual));
        ASSERT_LT(wt::max_amplitude_diff(expected, via_empty), 1e-15);
    }
}

TEST(RegisterProbabilities, BellFullRegister) {
    const std::vector<double> probs = bell_state().register_probabilities({0, 1});
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.0, 1e-12);
    EXPECT_NEAR(probs[2], 0.0, 1e-12);
    EXPECT_NEAR(probs[3], 0.5, 1e-12);
}

TEST(RegisterProbabilities, PlusStateSingleQubit) {
    StateVector s = StateVector::basis_state(1, 0);
    s.apply_single_qubit(hadamard_matrix(), 0);
    const std::vector<double> probs = s.register_probabilities({0});
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.5, 1e-12);
}

TEST(RegisterProbabilities, WalkPositionMarginal) {
    const std::vector<double> probs = two_step_walk_state(1.0, 0.0).register_probabilities({0});
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.5, 1e-12);
}

TEST(RegisterProbabilities, DuplicateIndicesThrow) {
    EXPECT_THROW(bell_state().register_probabilities({0, 0}), std::invalid_argument);
}

TEST(Measure, DeterministicOutcome) {
    StateVector s = StateVector::basis_state(1, 1);
    RngStream rng(0, 0);
    const MeasureOutcome m = s.measure({0}, rng);
    EXPECT_EQ(m.value, 1u);
    EXPECT_NEAR(m.probability, 1.0, 1e-12);
}

TEST(Collapse, BellFirstQubit) {
    StateVector s = bell_state();
    const double prob = s.collapse({0}, 0);
    EXPECT_NEAR(prob, 0.5, 1e-12);
    EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(s[3]), 0.0, 1e-12);
}

// Walk state with general (a, b): measuring position 0 leaves
// (a|00> + b|11>) renormalized by sqrt(2), with branch probability 1/2.
TEST(Collapse, WalkStateBranch) {
    const double a = std::sqrt(3.0) / 2.0;
    const double b = 0.5;
    StateVector s = two_step_walk_state(a, b);
    const double prob = s.collapse({0}, 0);
    EXPECT_NEAR(prob, 0.5, 1e-12);
    EXPECT_NEAR(s[0b000].real(), a, 1e-12);
    EXPECT_NEAR(s[0b011].real(), b, 1e-12);
    EXPECT_NEAR(std::abs(s[0b101]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s[0b110]), 0.0, 1e-12);
}

TEST(Collapse, ImpossibleOutcomeThrows) {
    StateVector s = StateVector::basis_state(1, 0);
    EXPECT_THROW(
        {
            try {
                s.collapse({0}, 1);
            } catch (const std::runtime_error& e) {
                EXPECT_STREQ(e.what(), "impossible outcome");
                throw;
            }
        },
        std::runtime_error);
}

TEST(PauliExpectation, BasisCases) {
    const StateVector zero = StateVector::basis_state(1, 0);
    EXPECT_NEAR(pauli_expectation(zero, 0, PauliAxis::Z), 1.0, 1e-12);

    StateVector plus = StateVector::basis_state(1, 0);
    plus.apply_single_qubit(hadamard_matrix(), 0);
    EXPECT_NEAR(pauli_expectation(plus, 0, PauliAxis::X), 1.0, 1e-12);

    const StateVector tilted = StateVector::from_amplitudes(
        {Amplitude{std::sqrt(3.0) / 2.0, 0}, Amplitude{0.5, 0}});
    EXPECT_NEAR(pauli_expectation(tilted, 0, PauliAxis::Z), 0.5, 1e-12);
}

TEST(PauliExpectation, YEigenstate) {
    // (|0> + i|1>)/sqrt(2) is the +1 eigenstate of Y.
    const StateVector s = StateVector::from_amplitudes(
        {Amplitude{kInvSqrt2, 0}, Amplitude{0, kInvSqrt2}});
    EXPECT_NEAR(pauli_expectation(s, 0, PauliAxis::Y), 1.0, 1e-12);
    EXPECT_NEAR(pauli_expectation(s, 0, PauliAxis::Z), 0.0, 1e-12);
    EXPECT_NEAR(pauli_expectation(s, 0, PauliAxis::X), 0.0, 1e-12);
}

// Norm preservation: random gate sequences on random states keep
// |sum |a|^2 - 1| < 1e-9.
TEST(Properties, NormPreservation) {
    RngStream rng(123, 0);
    for (int trial = 0; trial < 25; ++trial) {
        StateVector s = wt::random_state(4, rng);
        for (int step = 0; step < 30; ++step) {
            const int target = static_cast<int>(rng.uniform_below(4));
            s.apply_single_qubit(wt::random_unitary(rng), target);
        }
        ASSERT_LT(std::abs(s.norm_squared() - 1.0), 1e-9);
        for (std::uint64_t g = 0; g < s.size(); ++g) {
            ASSERT_TRUE(std::isfinite(s[g].real()) && std::isfinite(s[g].imag()));
        }
    }
}

// Applying a gate then its conjugate transpose returns the original state
// within 1e-10 per amplitude.
TEST(Properties, UnitarityRoundTrip) {
    RngStream rng(321, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector original = wt::random_state(3, rng);
        const Mat2 u = wt::random_unitary(rng);
        const int target = static_cast<int>(rng.uniform_below(3));
        StateVector s = original;
        s.apply_single_qubit(u, target);
        s.apply_single_qubit(wt::dagger(u), target);
        ASSERT_LT(wt::max_amplitude_diff(original, s), 1e-10);
    }
}

// Probabilities sum to one on every register; forced collapse followed by
// re-measurement of the same register is deterministic.
TEST(Properties, MeasurementCompleteness) {
    RngStream rng(77, 0);
    for (int trial = 0; trial < 20; ++trial) {
        StateVector s = wt::random_state(4, rng);
        const std::vector<std::vector<int>> registers = {{0}, {2, 3}, {0, 1, 2}, {0, 1, 2, 3}};
        for (const auto& reg : registers) {
            const std::vector<double> probs = s.register_probabilities(reg);
            double total = 0.0;
            for (double p : probs) total += p;
            ASSERT_LT(std::abs(total - 1.0), 1e-9);
        }
        const std::vector<int> reg = {1, 3};
        const std::vector<double> probs = s.register_probabilities(reg);
        std::uint64_t outcome = 0;
        while (probs[outcome] < 0.05) ++outcome;  // pick a comfortably likely branch
        s.collapse(reg, outcome);
        RngStream measure_rng(trial, 9);
        const MeasureOutcome remeasured = s.measure(reg, measure_rng);
        ASSERT_EQ(remeasured.value, outcome);
        ASSERT_NEAR(remeasured.probability, 1.0, 1e-9);
    }
}

TEST(GlobalPhase, ComparisonFixesPhase) {
    RngStream rng(55, 0);
    const StateVector a = wt::random_state(2, rng);
    std::vector<Amplitude> rotated(a.amplitudes().begin(), a.amplitudes().end());
    const Amplitude phase = std::polar(1.0, 1.234);
    for (Amplitude& amp : rotated) amp *= phase;
    const StateVector b = StateVector::from_amplitudes(std::move(rotated));
    EXPECT_TRUE(approx_equal_up_to_global_phase(a, b, 1e-9));
    EXPECT_NEAR(fidelity_pure(a, b), 1.0, 1e-12);
}
