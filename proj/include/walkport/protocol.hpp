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

#ifndef WALKPORT_PROTOCOL_HPP_
#define WALKPORT_PROTOCOL_HPP_

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "walkport/gates.hpp"
#include "walkport/noise.hpp"
#include "walkport/rng.hpp"
#include "walkport/statevector.hpp"

namespace walkport {

enum class RunMode { ExactBranches, Sampled };

struct ProtocolConfig {
    int n = 1;
    RunMode mode = RunMode::Sampled;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;  // shot s draws from stream (seed, stream_base + s)
    std::optional<NoiseParams> noise;

    void validate() const {
        if (n < 1) throw std::invalid_argument("payload qubit count must be >= 1");
        if (mode == RunMode::Sampled && shots < 1) {
            throw std::invalid_argument("sampled mode needs at least one shot");
        }
        if (noise) noise->validate();
    }
};

/// The classical bits Alice sends: position outcome q and Hadamard-basis
/// coin outcome p, plus the joint pre-collapse probability of the branch
/// (1/4^n on every noiseless branch).
struct MeasurementRecord {
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    double branch_probability = 0.0;
};

struct TeleportResult {
    MeasurementRecord record;
    StateVector bob_state;          // n-qubit state of Bob's coin, post-correction
    double fidelity_to_input = 0.0;
};

struct ShotHistogram {
    int n = 0;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
};

struct SampledRun {
    ShotHistogram histogram;
    std::vector<TeleportResult> samples;
};

/// Contiguous layout: position [0..n), Alice's coin [n..2n), Bob's coin
/// [2n..3n). Ancillas exist only in circuit-export decompositions.
inline RegisterLayout build_layout(int n) {
    if (n < 1) throw std::invalid_argument("payload qubit count must be >= 1");
    RegisterLayout layout;
    for (int i = 0; i < n; ++i) layout.position.push_back(i);
    for (int i = n; i < 2 * n; ++i) layout.alice_coin.push_back(i);
    for (int i = 2 * n; i < 3 * n; ++i) layout.bob_coin.push_back(i);
    return layout;
}

/// The walk's conditional shift: position |l> -> |(l + k) mod 2^n> when the
/// coin reads |k>.
inline void conditional_shift(StateVector& state, const std::vector<int>& coin,
                              const std::vector<int>& position) {
    if (coin.size() != position.size()) {
        throw std::invalid_argument("conditional shift: coin and position registers must have equal length");
    }
    GateSpec shift;
    shift.kind = GateSpec::Kind::ControlledShift;
    shift.controls = coin;
    shift.targets = position;
    apply_gate(state, shift);
}

/// H on every qubit of the register (the d = 2^n coin "Hadamard", which
/// carries the (-1)^{i.k} bitwise phase rule).
inline void hadamard_layer(StateVector& state, const std::vector<int>& reg) {
    for (int q : reg) state.apply_single_qubit(hadamard_matrix(), q);
}

/// Parity of the bitwise AND of p and k: the exponent of (-1) in the
/// Hadamard phase rule and in the correction family.
inline int bitwise_and_parity(std::uint64_t p, std::uint64_t k) {
    return std::popcount(p & k) & 1;
}

/// Bob's correction U_pq: a signed permutation sending |(q-j) mod d> to
/// (-1)^{p.j} |j>.
struct CorrectionUnitary {
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    std::uint64_t d = 0;
    std::vector<std::vector<Amplitude>> matrix;  // matrix[j][(q-j) mod d] = +-1

    std::uint64_t source_of(std::uint64_t j) const { return (q + d - j) % d; }
    double sign_of(std::uint64_t j) const { return bitwise_and_parity(p, j) ? -1.0 : 1.0; }
};

inline CorrectionUnitary correction_unitary(std::uint64_t p, std::uint64_t q, int n) {
    if (n < 1) throw std::invalid_argument("payload qubit count must be >= 1");
    const std::uint64_t d = std::uint64_t{1} << n;
    if (p >= d || q >= d) {
        throw std::invalid_argument("correction outcome out of range");
    }
    CorrectionUnitary u{p, q, d, {}};
    u.matrix.assign(d, std::vector<Amplitude>(d, Amplitude{0, 0}));
    for (std::uint64_t j = 0; j < d; ++j) {
        u.matrix[j][u.source_of(j)] = Amplitude{u.sign_of(j), 0.0};
    }
    return u;
}

inline void apply_correction(StateVector& state, const std::vector<int>& reg,
                             const CorrectionUnitary& u) {
    if ((std::uint64_t{1} << reg.size()) != u.d) {
        throw std::invalid_argument("correction dimension does not match register");
    }
    const std::span<const Amplitude> old = state.amplitudes();
    std::vector<Amplitude> next(old.begin(), old.end());
    for (std::uint64_t g = 0; g < next.size(); ++g) {
        const std::uint64_t j = state.read_register(g, reg);
        const std::uint64_t src = state.write_register(g, reg, u.source_of(j));
        next[g] = u.sign_of(j) * old[src];
    }
    state = StateVector::from_amplitudes(std::move(next));
}

namespace detail {

/// psi_0 = |0...0>_pos (x) |phi>_alice (x) |0...0>_bob.
inline StateVector embed_input(const StateVector& phi, int n) {
    if (phi.num_qubits() != n) {
        throw std::invalid_argument("input state size does not match configured n");
    }
    std::vector<Amplitude> amps(std::uint64_t{1} << (3 * n), Amplitude{0, 0});
    for (std::uint64_t a = 0; a < phi.size(); ++a) {
        amps[a << n] = phi[a];
    }
    return StateVector::from_amplitudes(std::move(amps));
}

/// One depolarizing event with probability p after a coin-position shift,
/// landing on a uniformly chosen qubit among those the gate touched. The
/// shift is the protocol's two-qubit gate, so it takes a single p2 event
/// rather than one per qubit. Draw order: occurrence, Pauli, qubit.
inline void depolarize_after_shift(StateVector& state, const std::vector<int>& coin,
                                   const std::vector<int>& position, double p,
                                   RngStream& rng) {
    const std::optional<PauliAxis> pauli = sample_depolarizing(p, rng);
    if (!pauli) return;
    std::vector<int> touched = coin;
    touched.insert(touched.end(), position.begin(), position.end());
    const int qubit = touched[rng.uniform_below(touched.size())];
    switch (*pauli) {
        case PauliAxis::X: state.apply_single_qubit(pauli_x_matrix(), qubit); break;
        case PauliAxis::Y: state.apply_single_qubit(pauli_y_matrix(), qubit); break;
        case PauliAxis::Z: state.apply_single_qubit(pauli_z_matrix(), qubit); break;
    }
}

/// Noise insertion points, in rng-consumption order: one p2 event after
/// Alice's shift, p1 after each Bob-coin H, one p2 event after Bob's shift,
/// readout flips on q, p1 after each Alice-coin H, readout flips on p.
/// Keeping this order fixed is what makes seeded runs reproducible.
struct WalkEngine {
    const ProtocolConfig& config;
    RegisterLayout layout;
    StateVector state;

    WalkEngine(const StateVector& phi, const ProtocolConfig& cfg)
        : config(cfg), layout(build_layout(cfg.n)), state(embed_input(phi, cfg.n)) {}

    double p1() const { return config.noise ? config.noise->p1 : 0.0; }
    double p2() const { return config.noise ? config.noise->p2 : 0.0; }
    double readout() const { return config.noise ? config.noise->readout_flip : 0.0; }

    void entangle(RngStream& rng) {
        conditional_shift(state, layout.alice_coin, layout.position);
        depolarize_after_shift(state, layout.alice_coin, layout.position, p2(), rng);
        for (int q : layout.bob_coin) {
            state.apply_single_qubit(hadamard_matrix(), q);
            apply_depolarizing(state, q, p1(), rng);
        }
        conditional_shift(state, layout.bob_coin, layout.position);
        depolarize_after_shift(state, layout.bob_coin, layout.position, p2(), rng);
    }

    void alice_basis_change(RngStream& rng) {
        for (int q : layout.alice_coin) {
            state.apply_single_qubit(hadamard_matrix(), q);
            apply_depolarizing(state, q, p1(), rng);
        }
    }
};

}  // namespace detail

/// Runs one deterministic branch: Alice's outcomes are forced to
/// (forced_q, forced_p), Bob corrects with U_pq, and the returned result
/// carries Bob's coin state plus its fidelity to the input. Gate noise (if
/// configured) draws from stream (seed, 0); forced branches take no readout
/// flips since the forced values are the classical record.
inline TeleportResult run_protocol_branch(const StateVector& phi, std::uint64_t forced_q,
                                          std::uint64_t forced_p,
                                          const ProtocolConfig& config) {
    config.validate();
    const std::uint64_t d = std::uint64_t{1} << config.n;
    if (forced_q >= d || forced_p >= d) {
        throw std::invalid_argument("forced outcome out of range");
    }
    RngStream rng(config.seed, 0);
    detail::WalkEngine engine(phi, config);
    engine.entangle(rng);
    const double prob_q = engine.state.collapse(engine.layout.position, forced_q);
    engine.alice_basis_change(rng);
    const double prob_p = engine.state.collapse(engine.layout.alice_coin, forced_p);
    apply_correction(engine.state, engine.layout.bob_coin,
                     correction_unitary(forced_p, forced_q, config.n));

    std::vector<Amplitude> bob(d);
    for (std::uint64_t b = 0; b < d; ++b) {
        bob[b] = engine.state[(forced_q << (2 * config.n)) | (forced_p << config.n) | b];
    }
    TeleportResult result;
    result.record = {forced_q, forced_p, prob_q * prob_p};
    result.bob_state = StateVector::from_amplitudes(std::move(bob));
    result.fidelity_to_input = fidelity_pure(phi, result.bob_state);
    return result;
}

/// One sampled pass through the protocol, stopping after Bob's correction.
/// The record holds the classical bits Bob acted on (readout flips applied)
/// while true_q/true_p are the outcomes the state actually collapsed to.
struct SingleShot {
    StateVector state;       // full 3n-qubit state, post-correction
    RegisterLayout layout;
    MeasurementRecord record;
    std::uint64_t true_q = 0;
    std::uint64_t true_p = 0;

    StateVector bob_state(int n) const {
        const std::uint64_t d = std::uint64_t{1} << n;
        std::vector<Amplitude> bob(d);
        for (std::uint64_t b = 0; b < d; ++b) {
            bob[b] = state[(true_q << (2 * n)) | (true_p << n) | b];
        }
        return StateVector::from_amplitudes(std::move(bob));
    }
};

inline SingleShot teleport_single_shot(const StateVector& phi, const ProtocolConfig& config,
                                       RngStream& rng) {
    detail::WalkEngine engine(phi, config);
    engine.entangle(rng);
    const MeasureOutcome mq = engine.state.measure(engine.layout.position, rng);
    const std::uint64_t q_rep = flip_readout(mq.value, config.n, engine.readout(), rng);
    engine.alice_basis_change(rng);
    const MeasureOutcome mp = engine.state.measure(engine.layout.alice_coin, rng);
    const std::uint64_t p_rep = flip_readout(mp.value, config.n, engine.readout(), rng);
    apply_correction(engine.state, engine.layout.bob_coin,
                     correction_unitary(p_rep, q_rep, config.n));
    SingleShot shot;
    shot.layout = engine.layout;
    shot.record = {q_rep, p_rep, mq.probability * mp.probability};
    shot.true_q = mq.value;
    shot.true_p = mp.value;
    shot.state = std::move(engine.state);
    return shot;
}

/// Samples the full protocol `shots` times. Shot s draws from stream
/// (seed, s). Per shot: sample (q, p), flip their readout bits, correct per
/// the (possibly flipped) classical record, record Bob's state and fidelity,
/// then Z-measure Bob's coin into the histogram.
inline SampledRun run_protocol_sampled(const StateVector& phi, const ProtocolConfig& config) {
    config.validate();
    if (config.mode != RunMode::Sampled) {
        throw std::invalid_argument("run_protocol_sampled requires sampled mode");
    }
    const double readout = config.noise ? config.noise->readout_flip : 0.0;
    SampledRun run;
    run.histogram.n = config.n;
    run.histogram.shots = config.shots;
    run.samples.reserve(config.shots);
    for (std::uint64_t s = 0; s < config.shots; ++s) {
        RngStream rng(config.seed, config.stream_base + s);
        SingleShot shot = teleport_single_shot(phi, config, rng);

        TeleportResult result;
        result.record = shot.record;
        result.bob_state = shot.bob_state(config.n);
        result.fidelity_to_input = fidelity_pure(phi, result.bob_state);

        const MeasureOutcome mz = shot.state.measure(shot.layout.bob_coin, rng);
        const std::uint64_t z_rep = flip_readout(mz.value, config.n, readout, rng);
        run.histogram.counts[z_rep] += 1;
        run.samples.push_back(std::move(result));
    }
    return run;
}

/// Noiseless Z-basis distribution of Bob's coin, averaged over all 4^n
/// forced branches with their branch probabilities.
inline std::vector<double> exact_bob_distribution(const StateVector& phi,
                                                  const ProtocolConfig& config) {
    ProtocolConfig exact = config;
    exact.mode = RunMode::ExactBranches;
    exact.noise.reset();
    const std::uint64_t d = std::uint64_t{1} << config.n;
    std::vector<double> dist(d, 0.0);
    for (std::uint64_t q = 0; q < d; ++q) {
        for (std::uint64_t p = 0; p < d; ++p) {
            const TeleportResult r = run_protocol_branch(phi, q, p, exact);
            for (std::uint64_t z = 0; z < d; ++z) {
                dist[z] += r.record.branch_probability * std::norm(r.bob_state[z]);
            }
        }
    }
    return dist;
}

}  // namespace walkport

#endif  // WALKPORT_PROTOCOL_HPP_
