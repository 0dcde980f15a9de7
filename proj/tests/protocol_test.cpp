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

#include "walkport/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "testutil.hpp"
#include "walkport/state_prep.hpp"

using namespace walkport;
namespace wt = walkport::testing;

namespace {

using wt::Dense;

// Gate-by-gate pre-measurement state through the production pipeline.
StateVector engine_premeasurement(const StateVector& phi, int n) {
    const RegisterLayout layout = build_layout(n);
    std::vector<Amplitude> amps(std::uint64_t{1} << (3 * n), Amplitude{0, 0});
    for (std::uint64_t a = 0; a < phi.size(); ++a) amps[a << n] = phi[a];
    StateVector state = StateVector::from_amplitudes(std::move(amps));
    conditional_shift(state, layout.alice_coin, layout.position);
    hadamard_layer(state, layout.bob_coin);
    conditional_shift(state, layout.bob_coin, layout.position);
    return state;
}

StateVector reference_input() {
    return prepare_arbitrary({Amplitude{std::sqrt(3.0) / 2.0, 0}, Amplitude{0.5, 0}});
}

ProtocolConfig exact_config(int n) {
    ProtocolConfig config;
    config.n = n;
    config.mode = RunMode::ExactBranches;
    return config;
}

}  // namespace

TEST(BuildLayout, RegisterRoles) {
    const RegisterLayout l1 = build_layout(1);
    EXPECT_EQ(l1.position, std::vector<int>({0}));
    EXPECT_EQ(l1.alice_coin, std::vector<int>({1}));
    EXPECT_EQ(l1.bob_coin, std::vector<int>({2}));
    EXPECT_TRUE(l1.ancilla.empty());

    const RegisterLayout l2 = build_layout(2);
    EXPECT_EQ(l2.position, std::vector<int>({0, 1}));
    EXPECT_EQ(l2.alice_coin, std::vector<int>({2, 3}));
    EXPECT_EQ(l2.bob_coin, std::vector<int>({4, 5}));

    const RegisterLayout l3 = build_layout(3);
    EXPECT_EQ(l3.position, std::vector<int>({0, 1, 2}));
    EXPECT_EQ(l3.alice_coin, std::vector<int>({3, 4, 5}));
    EXPECT_EQ(l3.bob_coin, std::vector<int>({6, 7, 8}));
    l3.validate();
}

TEST(ConditionalShift, SingleQubitCnotBehavior) {
    StateVector s = StateVector::basis_state(2, 0b10);  // coin 1, position 0
    conditional_shift(s, {0}, {1});
    EXPECT_NEAR(std::abs(s[0b11]), 1.0, 1e-12);
}

TEST(ConditionalShift, ModularAddition) {
    // coin |3>, position |2>: (2+3) mod 4 = 1.
    StateVector s = StateVector::basis_state(4, (3u << 2) | 2u);
    conditional_shift(s, {0, 1}, {2, 3});
    EXPECT_NEAR(std::abs(s[(3u << 2) | 1u]), 1.0, 1e-12);
}

// (sum_k a_k |k>_coin) |0>_pos -> sum_k a_k |k>_coin |k>_pos.
TEST(ConditionalShift, EntanglesCoinWithPosition) {
    RngStream rng(2024, 0);
    const StateVector coin = wt::random_state(2, rng);
    std::vector<Amplitude> amps(16, Amplitude{0, 0});
    for (std::uint64_t k = 0; k < 4; ++k) amps[k] = coin[k];  // coin [2,3]... position [0,1]
    StateVector s = StateVector::from_amplitudes(std::move(amps));
    conditional_shift(s, {2, 3}, {0, 1});
    for (std::uint64_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(s[(k << 2) | k] - coin[k]), 0.0, 1e-12);
    }
}

TEST(ConditionalShift, LengthMismatchThrows) {
    StateVector s = StateVector::basis_state(3, 0);
    EXPECT_THROW(conditional_shift(s, {0, 1}, {2}), std::invalid_argument);
}

TEST(HadamardLayer, UniformSuperposition) {
    StateVector one = StateVector::basis_state(1, 0);
    hadamard_layer(one, {0});
    EXPECT_NEAR(one[0].real(), std::numbers::sqrt2 / 2.0, 1e-12);
    EXPECT_NEAR(one[1].real(), std::numbers::sqrt2 / 2.0, 1e-12);

    StateVector two = StateVector::basis_state(2, 0);
    hadamard_layer(two, {0, 1});
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(two[m].real(), 0.5, 1e-12);
}

// H^{(x)2}|3> = (1/2) sum_i (-1)^{i.3} |i> = (|0> - |1> - |2> + |3>)/2.
TEST(HadamardLayer, BitwisePhaseRule) {
    StateVector s = StateVector::basis_state(2, 3);
    hadamard_layer(s, {0, 1});
    EXPECT_NEAR(s[0].real(), 0.5, 1e-12);
    EXPECT_NEAR(s[1].real(), -0.5, 1e-12);
    EXPECT_NEAR(s[2].real(), -0.5, 1e-12);
    EXPECT_NEAR(s[3].real(), 0.5, 1e-12);
}

TEST(BitwiseAndParity, Examples) {
    for (std::uint64_t k = 0; k < 16; ++k) EXPECT_EQ(bitwise_and_parity(0, k), 0);
    EXPECT_EQ(bitwise_and_parity(3, 3), 0);  // two overlapping bits, even parity
    EXPECT_EQ(bitwise_and_parity(1, 3), 1);
    EXPECT_EQ(bitwise_and_parity(5, 3), 1);  // AND = 0b001
    EXPECT_EQ(bitwise_and_parity(7, 7), 1);  // AND = 0b111
}

TEST(CorrectionUnitary, TableOneRowForRow) {
    const auto expect_matrix = [](const CorrectionUnitary& u, const Dense& want) {
        for (std::uint64_t r = 0; r < u.d; ++r) {
            for (std::uint64_t c = 0; c < u.d; ++c) {
                ASSERT_EQ(u.matrix[r][c], want[r][c]) << "entry " << r << "," << c;
            }
        }
    };
    const Amplitude one{1, 0}, zero{0, 0};
    expect_matrix(correction_unitary(0, 0, 1), {{one, zero}, {zero, one}});           // I
    expect_matrix(correction_unitary(1, 0, 1), {{one, zero}, {zero, -one}});          // Z
    expect_matrix(correction_unitary(0, 1, 1), {{zero, one}, {one, zero}});           // X
    expect_matrix(correction_unitary(1, 1, 1), {{zero, one}, {-one, zero}});          // ZX
}

TEST(CorrectionUnitary, DimensionFourSourceMap) {
    const CorrectionUnitary u = correction_unitary(0, 0, 2);
    // |0><0|, |1><3|, |2><2|, |3><1| with all-positive signs.
    EXPECT_EQ(u.matrix[0][0], Amplitude(1, 0));
    EXPECT_EQ(u.matrix[1][3], Amplitude(1, 0));
    EXPECT_EQ(u.matrix[2][2], Amplitude(1, 0));
    EXPECT_EQ(u.matrix[3][1], Amplitude(1, 0));
}

// U U^dag = I exactly for every (p, q): signed permutations compose by
// integer arithmetic, no rounding involved.
TEST(CorrectionUnitary, UnitarySignedPermutation) {
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t d = std::uint64_t{1} << n;
        for (std::uint64_t p = 0; p < d; ++p) {
            for (std::uint64_t q = 0; q < d; ++q) {
                const CorrectionUnitary u = correction_unitary(p, q, n);
                int nonzero = 0;
                for (std::uint64_t r = 0; r < d; ++r) {
                    for (std::uint64_t c = 0; c < d; ++c) {
                        Amplitude prod{0, 0};
                        for (std::uint64_t k = 0; k < d; ++k) {
                            prod += u.matrix[r][k] * std::conj(u.matrix[c][k]);
                        }
                        ASSERT_EQ(prod, (r == c ? Amplitude{1, 0} : Amplitude{0, 0}));
                        if (u.matrix[r][c] != Amplitude{0, 0}) {
                            ++nonzero;
                            ASSERT_TRUE(u.matrix[r][c] == Amplitude(1, 0) ||
                                        u.matrix[r][c] == Amplitude(-1, 0));
                        }
                    }
                }
                ASSERT_EQ(nonzero, static_cast<int>(d));
            }
        }
    }
}

TEST(CorrectionUnitary, OutOfRangeThrows) {
    EXPECT_THROW(correction_unitary(2, 0, 1), std::invalid_argument);
    EXPECT_THROW(correction_unitary(0, 4, 2), std::invalid_argument);
}

// n=1 walk reproduces the intermediate states amplitude-for-amplitude:
// after Alice's shift a|000> + b|110>, after Bob's H + shift the four-term
// branch structure with coefficient 1/sqrt(2).
TEST(Protocol, IntermediateStatesSingleQubit) {
    const double a = std::sqrt(3.0) / 2.0;
    const double b = 0.5;
    const RegisterLayout layout = build_layout(1);
    std::vector<Amplitude> amps(8, Amplitude{0, 0});
    amps[0b000] = Amplitude{a, 0};
    amps[0b010] = Amplitude{b, 0};
    StateVector state = StateVector::from_amplitudes(std::move(amps));

    conditional_shift(state, layout.alice_coin, layout.position);
    EXPECT_NEAR(state[0b000].real(), a, 1e-12);
    EXPECT_NEAR(state[0b110].real(), b, 1e-12);
    EXPECT_NEAR(std::abs(state[0b010]), 0.0, 1e-12);

    hadamard_layer(state, layout.bob_coin);
    conditional_shift(state, layout.bob_coin, layout.position);
    const double c = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(state[0b000].real(), a * c, 1e-12);
    EXPECT_NEAR(state[0b011].real(), b * c, 1e-12);
    EXPECT_NEAR(state[0b101].real(), a * c, 1e-12);
    EXPECT_NEAR(state[0b110].real(), b * c, 1e-12);
}

// Dense-matrix oracle equivalence for n in {1, 2}: max amplitude difference
// below 1e-12 on random inputs.
TEST(Protocol, DenseOracleEquivalence) {
    RngStream rng(99, 0);
    for (int n = 1; n <= 2; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const StateVector phi = wt::random_state(n, rng);
            const std::vector<Amplitude> expected = wt::dense_premeasurement(phi, n);
            const StateVector got = engine_premeasurement(phi, n);
            double worst = 0.0;
            for (std::uint64_t g = 0; g < got.size(); ++g) {
                worst = std::max(worst, std::abs(expected[g] - got[g]));
            }
            ASSERT_LT(worst, 1e-12) << "n=" << n << " trial=" << trial;
        }
    }
}

TEST(RunBranch, ReferenceStateIdentityBranch) {
    const StateVector phi = reference_input();
    const TeleportResult r = run_protocol_branch(phi, 0, 0, exact_config(1));
    EXPECT_NEAR(r.record.branch_probability, 0.25, 1e-9);
    EXPECT_NEAR(r.fidelity_to_input, 1.0, 1e-10);
    EXPECT_NEAR(r.bob_state[0].real(), std::sqrt(3.0) / 2.0, 1e-10);
    EXPECT_NEAR(r.bob_state[1].real(), 0.5, 1e-10);
}

// Branch (q, p) = (1, 0): Bob holds (b, a) before correction; X restores.
TEST(RunBranch, BitFlippedBranch) {
    const StateVector phi = reference_input();
    const TeleportResult r = run_protocol_branch(phi, 1, 0, exact_config(1));
    EXPECT_NEAR(r.fidelity_to_input, 1.0, 1e-10);
    // Undo the correction: U_{01}^dag = X recovers the pre-correction state.
    const CorrectionUnitary u = correction_unitary(0, 1, 1);
    std::vector<Amplitude> pre(2);
    for (int c = 0; c < 2; ++c) {
        for (int rr = 0; rr < 2; ++rr) {
            pre[c] += std::conj(u.matrix[rr][c]) * r.bob_state[rr];
        }
    }
    EXPECT_NEAR(pre[0].real(), 0.5, 1e-10);
    EXPECT_NEAR(pre[1].real(), std::sqrt(3.0) / 2.0, 1e-10);
}

TEST(RunBranch, BellAllSixteenBranches) {
    const StateVector bell = prepare_bell();
    for (std::uint64_t q = 0; q < 4; ++q) {
        for (std::uint64_t p = 0; p < 4; ++p) {
            const TeleportResult r = run_protocol_branch(bell, q, p, exact_config(2));
            ASSERT_NEAR(r.record.branch_probability, 1.0 / 16.0, 1e-9);
            ASSERT_GE(r.fidelity_to_input, 1.0 - 1e-10);
        }
    }
}

TEST(RunBranch, OutOfRangeForcedOutcome) {
    EXPECT_THROW(run_protocol_branch(reference_input(), 2, 0, exact_config(1)),
                 std::invalid_argument);
}

// Teleportation identity and uniform branch law on random states; the full
// 1000-state sweep runs in the acceptance suite.
TEST(Protocol, RandomStatesAllBranches) {
    RngStream rng(7, 0);
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t d = std::uint64_t{1} << n;
        for (int trial = 0; trial < 25; ++trial) {
            const StateVector phi = wt::random_state(n, rng);
            for (std::uint64_t q = 0; q < d; ++q) {
                for (std::uint64_t p = 0; p < d; ++p) {
                    const TeleportResult r = run_protocol_branch(phi, q, p, exact_config(n));
                    ASSERT_GE(r.fidelity_to_input, 1.0 - 1e-10);
                    ASSERT_NEAR(r.record.branch_probability, 1.0 / static_cast<double>(d * d),
                                1e-9);
                }
            }
        }
    }
}

TEST(ExactDistribution, ReferenceTargets) {
    ProtocolConfig c1 = exact_config(1);
    const std::vector<double> u3 = exact_bob_distribution(reference_input(), c1);
    EXPECT_NEAR(u3[0], 0.75, 1e-9);
    EXPECT_NEAR(u3[1], 0.25, 1e-9);

    const std::vector<double> bell = exact_bob_distribution(prepare_bell(), exact_config(2));
    EXPECT_NEAR(bell[0], 0.5, 1e-9);
    EXPECT_NEAR(bell[3], 0.5, 1e-9);
    EXPECT_NEAR(bell[1], 0.0, 1e-9);

    const std::vector<double> w = exact_bob_distribution(prepare_w(), exact_config(3));
    EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(w[2], 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(w[4], 1.0 / 3.0, 1e-9);
}

TEST(RunSampled, ReferenceStateWithinThreeSigma) {
    ProtocolConfig config;
    config.n = 1;
    config.shots = 8192;
    config.seed = 7;
    const SampledRun run = run_protocol_sampled(reference_input(), config);
    const double p0 = static_cast<double>(run.histogram.counts.at(0)) / 8192.0;
    EXPECT_NEAR(p0, 0.75, 0.0143);
    EXPECT_EQ(run.samples.size(), 8192u);
    for (const TeleportResult& r : run.samples) {
        ASSERT_NEAR(r.record.branch_probability, 0.25, 1e-9);
        ASSERT_GE(r.fidelity_to_input, 1.0 - 1e-10);
    }
}

TEST(RunSampled, BellOutcomesOnlyCorrelated) {
    ProtocolConfig config;
    config.n = 2;
    config.shots = 8192;
    config.seed = 11;
    const SampledRun run = run_protocol_sampled(prepare_bell(), config);
    const double sigma3 = 3.0 * std::sqrt(0.25 / 8192.0);
    const double p00 = static_cast<double>(run.histogram.counts.at(0)) / 8192.0;
    const double p11 = static_cast<double>(run.histogram.counts.at(3)) / 8192.0;
    EXPECT_NEAR(p00, 0.5, sigma3);
    EXPECT_NEAR(p11, 0.5, sigma3);
    EXPECT_EQ(run.histogram.counts.count(1), 0u);
    EXPECT_EQ(run.histogram.counts.count(2), 0u);
}

TEST(RunSampled, WStateThirds) {
    ProtocolConfig config;
    config.n = 3;
    config.shots = 8192;
    config.seed = 3;
    const SampledRun run = run_protocol_sampled(prepare_w(), config);
    const double sigma3 = 3.0 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 8192.0);
    for (std::uint64_t outcome : {1u, 2u, 4u}) {
        const double p = static_cast<double>(run.histogram.counts.at(outcome)) / 8192.0;
        EXPECT_NEAR(p, 1.0 / 3.0, sigma3);
    }
}

TEST(RunSampled, SeedReproducible) {
    ProtocolConfig config;
    config.n = 1;
    config.shots = 512;
    config.seed = 99;
    const SampledRun a = run_protocol_sampled(reference_input(), config);
    const SampledRun b = run_protocol_sampled(reference_input(), config);
    EXPECT_EQ(a.histogram.counts, b.histogram.counts);
    config.seed = 100;
    const SampledRun c = run_protocol_sampled(reference_input(), config);
    EXPECT_NE(a.histogram.counts, c.histogram.counts);
}
