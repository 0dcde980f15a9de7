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

#ifndef WALKPORT_QASM_HPP_
#define WALKPORT_QASM_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "walkport/gates.hpp"
#include "walkport/protocol.hpp"
#include "walkport/state_prep.hpp"
#include "walkport/statevector.hpp"

namespace walkport {

/// `if (creg == value)` guard on a gate, as in OpenQASM 2.0.
struct ClassicalCondition {
    int creg = 0;
    std::uint64_t value = 0;
};

struct QasmGate {
    GateSpec gate;
    std::optional<ClassicalCondition> condition;
};

/// measure q[qubit] -> creg[bit]; creg bits are little-endian, so bit b has
/// weight 2^b in the integer the creg compares against.
struct QasmMeasure {
    int qubit = 0;
    int creg = 0;
    int bit = 0;
};

using QasmInstr = std::variant<QasmGate, QasmMeasure>;

struct Creg {
    std::string name;
    int width = 0;
};

/// Flat circuit form restricted to {h, x, z, u3, cx, ccx}, measurements and
/// classically-controlled gates.
struct CircuitIR {
    int n = 0;                  // payload qubits; protocol wires are [0, 3n)
    int num_qubits = 0;         // including ancillas
    std::vector<int> ancilla;   // ancilla wire indices, uncomputed to |0>
    std::vector<Creg> cregs;
    std::vector<QasmInstr> body;

    std::vector<int> position_register() const { return range(0, n); }
    std::vector<int> alice_register() const { return range(n, 2 * n); }
    std::vector<int> bob_register() const { return range(2 * n, 3 * n); }

    void validate() const {
        std::set<std::pair<int, int>> classical_targets;
        for (const QasmInstr& instr : body) {
            if (const auto* m = std::get_if<QasmMeasure>(&instr)) {
                check_qubit(m->qubit);
                check_creg_bit(m->creg, m->bit);
                if (!classical_targets.insert({m->creg, m->bit}).second) {
                    throw std::invalid_argument("measurement targets must be unique");
                }
                continue;
            }
            const auto& g = std::get<QasmGate>(instr);
            for (int q : g.gate.targets) check_qubit(q);
            for (int q : g.gate.controls) check_qubit(q);
            if (g.condition && (g.condition->creg < 0 ||
                                g.condition->creg >= static_cast<int>(cregs.size()))) {
                throw std::invalid_argument("condition references unknown creg");
            }
        }
    }

  private:
    static std::vector<int> range(int lo, int hi) {
        std::vector<int> out;
        for (int i = lo; i < hi; ++i) out.push_back(i);
        return out;
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= num_qubits) {
            throw std::invalid_argument("circuit qubit index out of range");
        }
    }

    void check_creg_bit(int creg, int bit) const {
        if (creg < 0 || creg >= static_cast<int>(cregs.size()) || bit < 0 ||
            bit >= cregs[creg].width) {
            throw std::invalid_argument("classical bit index out of range");
        }
    }
};

namespace detail {

inline QasmGate plain(GateSpec::Kind kind, int target, std::vector<int> controls = {}) {
    return {GateSpec::single(kind, target, std::move(controls)), std::nullopt};
}

/// Multi-controlled X over {cx, ccx} with a clean-ancilla ladder; k controls
/// need k-2 ancillas, each uncomputed back to |0>.
inline void emit_mcx(std::vector<QasmGate>& out, const std::vector<int>& controls, int target,
                     const std::vector<int>& ancilla) {
    const std::size_t k = controls.size();
    if (k == 0) {
        out.push_back(plain(GateSpec::Kind::X, target));
        return;
    }
    if (k <= 2) {
        out.push_back(plain(GateSpec::Kind::X, target, controls));
        return;
    }
    const std::size_t needed = k - 2;
    if (ancilla.size() < needed) {
        throw std::invalid_argument("insufficient ancilla: need " + std::to_string(needed));
    }
    std::vector<QasmGate> compute;
    compute.push_back(plain(GateSpec::Kind::X, ancilla[0], {controls[0], controls[1]}));
    for (std::size_t i = 2; i + 1 < k; ++i) {
        compute.push_back(plain(GateSpec::Kind::X, ancilla[i - 1], {controls[i], ancilla[i - 2]}));
    }
    for (const QasmGate& g : compute) out.push_back(g);
    out.push_back(plain(GateSpec::Kind::X, target, {controls[k - 1], ancilla[k - 3]}));
    for (auto it = compute.rbegin(); it != compute.rend(); ++it) out.push_back(*it);
}

/// Ripple increment of `reg` (MSB-first) by 2^b under the given extra
/// controls: bit j >= b flips when all of bits b..j-1 and the controls are 1.
inline void emit_controlled_increment(std::vector<QasmGate>& out, const std::vector<int>& reg,
                                      int b, const std::vector<int>& extra_controls,
                                      const std::vector<int>& ancilla) {
    const int n = static_cast<int>(reg.size());
    for (int j = n - 1; j >= b; --j) {
        std::vector<int> controls = extra_controls;
        for (int m = b; m < j; ++m) controls.push_back(reg[n - 1 - m]);
        emit_mcx(out, controls, reg[n - 1 - j], ancilla);
    }
}

/// reg += constant (mod 2^n), constant known at compile time.
inline void emit_add_constant(std::vector<QasmGate>& out, const std::vector<int>& reg,
                              std::uint64_t constant, const std::vector<int>& ancilla) {
    const int n = static_cast<int>(reg.size());
    for (int b = n - 1; b >= 0; --b) {
        if (constant & (std::uint64_t{1} << b)) {
            emit_controlled_increment(out, reg, b, {}, ancilla);
        }
    }
}

/// Cancels immediately adjacent plain X pairs on the same wire.
inline std::vector<QasmGate> cancel_adjacent_x(const std::vector<QasmGate>& gates) {
    std::vector<QasmGate> out;
    for (const QasmGate& g : gates) {
        const bool plain_x = g.gate.kind == GateSpec::Kind::X && g.gate.controls.empty() &&
                             !g.condition.has_value();
        if (plain_x && !out.empty()) {
            const QasmGate& prev = out.back();
            if (prev.gate.kind == GateSpec::Kind::X && prev.gate.controls.empty() &&
                !prev.condition.has_value() && prev.gate.targets == g.gate.targets) {
                out.pop_back();
                continue;
            }
        }
        out.push_back(g);
    }
    return out;
}

inline void emit_state_prep(std::vector<QasmGate>& out, int n, const std::string& spec,
                            const std::vector<int>& alice) {
    if (spec.rfind("u3:", 0) == 0) {
        if (n != 1) throw std::invalid_argument("u3 state prep targets a single qubit");
        const std::vector<double> a = walkport::detail::parse_doubles(spec.substr(3), ',');
        if (a.size() != 3) throw std::invalid_argument("state spec: u3 takes three angles");
        out.push_back({GateSpec::u3(a[0], a[1], a[2], alice[0]), std::nullopt});
        return;
    }
    if (spec == "bell") {
        if (n != 2) throw std::invalid_argument("bell state prep needs n = 2");
        out.push_back(plain(GateSpec::Kind::H, alice[0]));
        out.push_back(plain(GateSpec::Kind::X, alice[1], {alice[0]}));
        return;
    }
    if (spec == "ghz") {
        if (n != 3) throw std::invalid_argument("ghz state prep needs n = 3");
        out.push_back(plain(GateSpec::Kind::H, alice[0]));
        out.push_back(plain(GateSpec::Kind::X, alice[1], {alice[0]}));
        out.push_back(plain(GateSpec::Kind::X, alice[2], {alice[1]}));
        return;
    }
    if (spec == "w") {
        if (n != 3) throw std::invalid_argument("w state prep needs n = 3");
        // Ry(2 acos(1/sqrt(3))) then a controlled-Ry(pi/2) in ABC form,
        // CNOT chain and a final X: lands on (|001>+|010>+|100>)/sqrt(3).
        const double theta = 2.0 * std::acos(1.0 / std::sqrt(3.0));
        const double quarter = std::numbers::pi / 4.0;
        out.push_back({GateSpec::u3(theta, 0.0, 0.0, alice[0]), std::nullopt});
        out.push_back({GateSpec::u3(quarter, 0.0, 0.0, alice[1]), std::nullopt});
        out.push_back(plain(GateSpec::Kind::X, alice[1], {alice[0]}));
        out.push_back({GateSpec::u3(-quarter, 0.0, 0.0, alice[1]), std::nullopt});
        out.push_back(plain(GateSpec::Kind::X, alice[1], {alice[0]}));
        out.push_back(plain(GateSpec::Kind::X, alice[2], {alice[1]}));
        out.push_back(plain(GateSpec::Kind::X, alice[1], {alice[0]}));
        out.push_back(plain(GateSpec::Kind::X, alice[0]));
        return;
    }
    if (spec.rfind("vec:", 0) == 0) {
        throw std::invalid_argument("vec: specs are simulator-only");
    }
    throw std::invalid_argument("unsupported state spec for circuit synthesis: '" + spec + "'");
}

}  // namespace detail

/// Gate-level realization of the walk shift |k>_coin |l>_pos ->
/// |k>|(l+k) mod 2^n>: one controlled add-2^b per coin bit, rippled over
/// {cx, ccx} with ancillas uncomputed to |0>. Needs max(0, n-2) ancillas.
inline std::vector<QasmGate> decompose_conditional_shift(int n, const std::vector<int>& coin,
                                                         const std::vector<int>& position,
                                                         const std::vector<int>& ancilla) {
    if (n < 1 || static_cast<int>(coin.size()) != n || static_cast<int>(position.size()) != n) {
        throw std::invalid_argument("conditional shift: coin and position registers must have length n");
    }
    const std::size_t needed = n > 2 ? static_cast<std::size_t>(n - 2) : 0;
    if (ancilla.size() < needed) {
        throw std::invalid_argument("insufficient ancilla: need " + std::to_string(needed));
    }
    std::vector<QasmGate> out;
    for (int i = 0; i < n; ++i) {
        const int b = n - 1 - i;  // coin[i] carries weight 2^b
        detail::emit_controlled_increment(out, position, b, {coin[i]}, ancilla);
    }
    return out;
}

/// Full protocol circuit for a synthesizable input spec: state prep on
/// Alice's coin, the two-step walk, position and Alice-coin measurements,
/// then the correction table as classically-controlled gates. Bob's coin is
/// left unmeasured; re-simulation samples it from the final state.
inline CircuitIR build_protocol_circuit(int n, const std::string& input_spec) {
    if (n < 1 || n > 3) {
        throw std::invalid_argument("circuit synthesis supports n in {1, 2, 3}");
    }
    if (state_spec_qubits(input_spec) != n) {
        throw std::invalid_argument("state spec does not match n");
    }
    CircuitIR ir;
    ir.n = n;
    const int num_ancilla = n > 2 ? n - 2 : 0;
    ir.num_qubits = 3 * n + num_ancilla;
    for (int i = 0; i < num_ancilla; ++i) ir.ancilla.push_back(3 * n + i);
    ir.cregs = {{"cq", n}, {"cp", n}};

    const std::vector<int> position = ir.position_register();
    const std::vector<int> alice = ir.alice_register();
    const std::vector<int> bob = ir.bob_register();
    const std::uint64_t d = std::uint64_t{1} << n;

    std::vector<QasmGate> gates;
    detail::emit_state_prep(gates, n, input_spec, alice);
    for (const QasmGate& g : decompose_conditional_shift(n, alice, position, ir.ancilla)) {
        gates.push_back(g);
    }
    for (int q : bob) gates.push_back(detail::plain(GateSpec::Kind::H, q));
    for (const QasmGate& g : decompose_conditional_shift(n, bob, position, ir.ancilla)) {
        gates.push_back(g);
    }
    for (const QasmGate& g : gates) ir.body.push_back(g);

    // Alice measures the position register, rotates her coin into the
    // Hadamard basis and measures it.
    for (int i = 0; i < n; ++i) ir.body.push_back(QasmMeasure{position[i], 0, n - 1 - i});
    for (int q : alice) ir.body.push_back(detail::plain(GateSpec::Kind::H, q));
    for (int i = 0; i < n; ++i) ir.body.push_back(QasmMeasure{alice[i], 1, n - 1 - i});

    // U_pq = D_p P_q. P_q (|l> -> |(q-l) mod d>) is an X layer plus a
    // constant add, emitted per position outcome; D_p is a Z on every bob
    // qubit whose bit is set in p.
    for (std::uint64_t q_val = 0; q_val < d; ++q_val) {
        std::vector<QasmGate> perm;
        for (int q : bob) perm.push_back(detail::plain(GateSpec::Kind::X, q));
        detail::emit_add_constant(perm, bob, (q_val + 1) % d, ir.ancilla);
        for (QasmGate g : detail::cancel_adjacent_x(perm)) {
            g.condition = ClassicalCondition{0, q_val};
            ir.body.push_back(g);
        }
    }
    for (std::uint64_t p_val = 1; p_val < d; ++p_val) {
        for (int b = n - 1; b >= 0; --b) {
            if (p_val & (std::uint64_t{1} << b)) {
                QasmGate g = detail::plain(GateSpec::Kind::Z, bob[n - 1 - b]);
                g.condition = ClassicalCondition{1, p_val};
                ir.body.push_back(g);
            }
        }
    }
    ir.validate();
    return ir;
}

namespace detail {

inline std::string format_angle(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string gate_name(const GateSpec& g) {
    switch (g.kind) {
        case GateSpec::Kind::H:
            if (g.controls.empty()) return "h";
            break;
        case GateSpec::Kind::X:
            if (g.controls.empty()) return "x";
            if (g.controls.size() == 1) return "cx";
            if (g.controls.size() == 2) return "ccx";
            break;
        case GateSpec::Kind::Z:
            if (g.controls.empty()) return "z";
            break;
        case GateSpec::Kind::U3:
            if (g.controls.empty()) {
                return "u3(" + format_angle(g.angles[0]) + "," + format_angle(g.angles[1]) +
                       "," + format_angle(g.angles[2]) + ")";
            }
            break;
        default:
            break;
    }
    throw std::invalid_argument("gate outside supported set");
}

}  // namespace detail

/// Deterministic OpenQASM 2.0 text: identical IR yields identical bytes.
inline std::string emit_qasm(const CircuitIR& ir) {
    ir.validate();
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out += "qreg q[" + std::to_string(ir.num_qubits) + "];\n";
    for (const Creg& c : ir.cregs) {
        out += "creg " + c.name + "[" + std::to_string(c.width) + "];\n";
    }
    for (const QasmInstr& instr : ir.body) {
        if (const auto* m = std::get_if<QasmMeasure>(&instr)) {
            out += "measure q[" + std::to_string(m->qubit) + "] -> " + ir.cregs[m->creg].name +
                   "[" + std::to_string(m->bit) + "];\n";
            continue;
        }
        const auto& g = std::get<QasmGate>(instr);
        std::string line;
        if (g.condition) {
            line += "if(" + ir.cregs[g.condition->creg].name + "==" +
                    std::to_string(g.condition->value) + ") ";
        }
        line += detail::gate_name(g.gate) + " ";
        bool first = true;
        for (int q : g.gate.controls) {
            if (!first) line += ",";
            line += "q[" + std::to_string(q) + "]";
            first = false;
        }
        for (int q : g.gate.targets) {
            if (!first) line += ",";
            line += "q[" + std::to_string(q) + "]";
            first = false;
        }
        out += line + ";\n";
    }
    return out;
}

/// Applies an unconditioned gate list to a state (decomposition checks).
inline void apply_qasm_gates(StateVector& state, const std::vector<QasmGate>& gates) {
    for (const QasmGate& g : gates) {
        if (g.condition) {
            throw std::invalid_argument("gate list must be unconditioned");
        }
        apply_gate(state, g.gate);
    }
}

struct CircuitRunResult {
    StateVector final_state;
    std::vector<std::uint64_t> creg_values;
};

/// Reference interpretation of the IR on the state-vector kernel: one shot,
/// sampling measurements from `rng` and gating conditioned instructions on
/// the classical registers recorded so far.
inline CircuitRunResult simulate_circuit(const CircuitIR& ir, RngStream& rng) {
    ir.validate();
    CircuitRunResult run;
    run.final_state = StateVector::basis_state(ir.num_qubits, 0);
    run.creg_values.assign(ir.cregs.size(), 0);
    for (const QasmInstr& instr : ir.body) {
        if (const auto* m = std::get_if<QasmMeasure>(&instr)) {
            const MeasureOutcome outcome = run.final_state.measure({m->qubit}, rng);
            const std::uint64_t mask = std::uint64_t{1} << m->bit;
            if (outcome.value) {
                run.creg_values[m->creg] |= mask;
            } else {
                run.creg_values[m->creg] &= ~mask;
            }
            continue;
        }
        const auto& g = std::get<QasmGate>(instr);
        if (g.condition && run.creg_values[g.condition->creg] != g.condition->value) {
            continue;
        }
        apply_gate(run.final_state, g.gate);
    }
    return run;
}

/// Re-simulates the emitted protocol circuit for `shots` shots and samples
/// Bob's coin from each final state (shot s uses stream (seed, s)).
inline ShotHistogram sample_circuit_bob_histogram(const CircuitIR& ir, std::uint64_t shots,
                                                  std::uint64_t seed) {
    ShotHistogram hist;
    hist.n = ir.n;
    hist.shots = shots;
    const std::vector<int> bob = ir.bob_register();
    for (std::uint64_t s = 0; s < shots; ++s) {
        RngStream rng(seed, s);
        CircuitRunResult run = simulate_circuit(ir, rng);
        hist.counts[run.final_state.measure(bob, rng).value] += 1;
    }
    return hist;
}

}  // namespace walkport

#endif  // WALKPORT_QASM_HPP_
