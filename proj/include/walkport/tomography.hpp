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

#ifndef WALKPORT_TOMOGRAPHY_HPP_
#define WALKPORT_TOMOGRAPHY_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "walkport/gates.hpp"
#include "walkport/protocol.hpp"
#include "walkport/rng.hpp"
#include "walkport/statevector.hpp"

namespace walkport {

struct DensityMatrix {
    int dim = 0;
    std::vector<Amplitude> entries;  // row-major, dim x dim

    Amplitude& at(int r, int c) { return entries[static_cast<std::size_t>(r) * dim + c]; }
    const Amplitude& at(int r, int c) const {
        return entries[static_cast<std::size_t>(r) * dim + c];
    }

    static DensityMatrix zero(int dim) {
        DensityMatrix m;
        m.dim = dim;
        m.entries.assign(static_cast<std::size_t>(dim) * dim, Amplitude{0, 0});
        return m;
    }

    Amplitude trace() const {
        Amplitude t{0, 0};
        for (int i = 0; i < dim; ++i) t += at(i, i);
        return t;
    }

    /// Tr(rho^2), real for Hermitian input.
    double purity() const {
        double total = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                total += (at(r, c) * at(c, r)).real();
            }
        }
        return total;
    }

    bool is_hermitian(double tol) const {
        for (int r = 0; r < dim; ++r) {
            for (int c = r; c < dim; ++c) {
                if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
            }
        }
        return true;
    }
};

/// JSON wire format: {"dim": d, "re": [[...]], "im": [[...]]}.
inline void to_json(nlohmann::json& j, const DensityMatrix& m) {
    std::vector<std::vector<double>> re(m.dim, std::vector<double>(m.dim));
    std::vector<std::vector<double>> im(m.dim, std::vector<double>(m.dim));
    for (int r = 0; r < m.dim; ++r) {
        for (int c = 0; c < m.dim; ++c) {
            re[r][c] = m.at(r, c).real();
            im[r][c] = m.at(r, c).imag();
        }
    }
    j = nlohmann::json{{"dim", m.dim}, {"re", re}, {"im", im}};
}

inline void from_json(const nlohmann::json& j, DensityMatrix& m) {
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw std::invalid_argument("density matrix dim must be >= 1");
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim) {
        throw std::invalid_argument("density matrix row count does not match dim");
    }
    m = DensityMatrix::zero(dim);
    for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(re[r].size()) != dim || static_cast<int>(im[r].size()) != dim) {
            throw std::invalid_argument("density matrix column count does not match dim");
        }
        for (int c = 0; c < dim; ++c) {
            m.at(r, c) = Amplitude{re[r][c], im[r][c]};
        }
    }
}

/// Estimated Pauli expectations of one qubit.
struct PauliTriple {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Reduced density matrix over `keep` (MSB-first), tracing out the rest.
inline DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep) {
    const std::uint64_t dim = std::uint64_t{1} << keep.size();
    DensityMatrix rho = DensityMatrix::zero(static_cast<int>(dim));
    // Group global indices by their kept-register value.
    std::vector<std::vector<std::uint64_t>> buckets(dim);
    for (std::uint64_t g = 0; g < psi.size(); ++g) {
        buckets[psi.read_register(g, keep)].push_back(g);
    }
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            Amplitude sum{0, 0};
            for (std::size_t e = 0; e < buckets[r].size(); ++e) {
                sum += psi[buckets[r][e]] * std::conj(psi[buckets[c][e]]);
            }
            rho.at(static_cast<int>(r), static_cast<int>(c)) = sum;
        }
    }
    return rho;
}

/// rho_T = |psi><psi| restricted to the subset. The subset must be in a pure
/// state, i.e. unentangled with the remaining qubits.
inline DensityMatrix rho_theoretical(const StateVector& psi, const std::vector<int>& subset) {
    DensityMatrix rho = partial_trace(psi, subset);
    if (rho.purity() < 1.0 - kNormTolerance) {
        throw std::invalid_argument("subset is entangled with the remaining qubits");
    }
    return rho;
}

/// rho_E = (I + <X> X + <Y> Y + <Z> Z) / 2.
inline DensityMatrix rho_from_expectations(const PauliTriple& t) {
    if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.z)) {
        throw std::invalid_argument("Pauli expectations must be finite");
    }
    DensityMatrix rho = DensityMatrix::zero(2);
    rho.at(0, 0) = Amplitude{(1.0 + t.z) / 2.0, 0.0};
    rho.at(1, 1) = Amplitude{(1.0 - t.z) / 2.0, 0.0};
    rho.at(0, 1) = Amplitude{t.x / 2.0, -t.y / 2.0};
    rho.at(1, 0) = Amplitude{t.x / 2.0, t.y / 2.0};
    return rho;
}

inline PauliTriple exact_expectations(const StateVector& psi, int qubit) {
    return {pauli_expectation(psi, qubit, PauliAxis::X),
            pauli_expectation(psi, qubit, PauliAxis::Y),
            pauli_expectation(psi, qubit, PauliAxis::Z)};
}

/// One experiment shot measured in a rotated basis; returns the Z bit.
using ShotRunner = std::function<int(PauliAxis, RngStream&)>;

/// Three basis-rotated repetitions of `shots` shots each; expectation
/// estimates are (N+ - N-)/shots. Basis a, shot s draws from stream
/// (seed, a * shots + s), so the three experiments are independent.
inline PauliTriple estimate_expectations(const ShotRunner& runner, std::uint64_t shots,
                                         std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("tomography needs at least one shot");
    const PauliAxis axes[3] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
    double estimates[3];
    for (int a = 0; a < 3; ++a) {
        std::int64_t sum = 0;
        for (std::uint64_t s = 0; s < shots; ++s) {
            RngStream rng(seed, static_cast<std::uint64_t>(a) * shots + s);
            sum += runner(axes[a], rng) == 0 ? 1 : -1;
        }
        estimates[a] = static_cast<double>(sum) / static_cast<double>(shots);
    }
    return {estimates[0], estimates[1], estimates[2]};
}

/// Shot runner for single-qubit teleportation tomography: teleports phi,
/// rotates Bob's qubit into the requested basis and measures it (readout
/// flips applied when noise is configured).
inline ShotRunner make_teleport_runner(StateVector phi, ProtocolConfig config) {
    if (config.n != 1 || phi.num_qubits() != 1) {
        throw std::invalid_argument("tomography supports single qubits");
    }
    config.validate();
    return [phi = std::move(phi), config](PauliAxis axis, RngStream& rng) -> int {
        SingleShot shot = teleport_single_shot(phi, config, rng);
        const int qubit = shot.layout.bob_coin[0];
        if (axis == PauliAxis::Y) shot.state.apply_single_qubit(s_dagger_matrix(), qubit);
        if (axis != PauliAxis::Z) shot.state.apply_single_qubit(hadamard_matrix(), qubit);
        const MeasureOutcome m = shot.state.measure({qubit}, rng);
        const double readout = config.noise ? config.noise->readout_flip : 0.0;
        return static_cast<int>(flip_readout(m.value, 1, readout, rng));
    };
}

namespace detail {

inline Eigen::MatrixXcd to_eigen(const DensityMatrix& m) {
    Eigen::MatrixXcd out(m.dim, m.dim);
    for (int r = 0; r < m.dim; ++r) {
        for (int c = 0; c < m.dim; ++c) out(r, c) = m.at(r, c);
    }
    return out;
}

/// Eigenvalues below this are treated as noise from rounded or sampled
/// inputs (matrices quoted to four decimals grow spurious eigenvalues of
/// order 1e-5). The Uhlmann square root would amplify
/// such an eigenvalue from O(eps) to O(sqrt(eps)) in the fidelity, which is
/// why they are cleared rather than carried through.
inline constexpr double kSpectrumFloor = 1e-4;

/// Repairs a nearly-valid density matrix: eigenvalues that are negative or
/// below the noise floor are clipped to zero and the trace renormalized.
inline Eigen::MatrixXcd clip_to_density(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    Eigen::VectorXd vals = eig.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) {
        if (vals[i] < kSpectrumFloor) vals[i] = 0.0;
    }
    const double total = vals.sum();
    if (total <= 0.0) {
        throw std::invalid_argument("density matrix has no positive weight");
    }
    vals /= total;
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

inline Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
    const Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

/// Uhlmann fidelity F = [Tr sqrt(sqrt(rho_t) rho_e sqrt(rho_t))]^2. When
/// rho_t is pure this reduces to <psi|rho_e|psi>, which is used directly.
inline double fidelity(const DensityMatrix& rho_t, const DensityMatrix& rho_e) {
    if (rho_t.dim != rho_e.dim) {
        throw std::invalid_argument("density matrix dimensions differ");
    }
    if (!rho_t.is_hermitian(kNormTolerance) || !rho_e.is_hermitian(kNormTolerance)) {
        throw std::invalid_argument("density matrix not Hermitian within tolerance");
    }
    const Eigen::MatrixXcd t = detail::clip_to_density(detail::to_eigen(rho_t));
    const Eigen::MatrixXcd e = detail::clip_to_density(detail::to_eigen(rho_e));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_t(t);
    const double purity = (t * t).trace().real();
    if (purity > 1.0 - kNormTolerance) {
        const Eigen::VectorXcd psi = eig_t.eigenvectors().col(rho_t.dim - 1);
        return (psi.adjoint() * e * psi)(0, 0).real();
    }

    const Eigen::MatrixXcd root = detail::hermitian_sqrt(t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(root * e * root);
    const double trace = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return trace * trace;
}

}  // namespace walkport

#endif  // WALKPORT_TOMOGRAPHY_HPP_
