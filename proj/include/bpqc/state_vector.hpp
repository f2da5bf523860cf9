// Copyright 2026 The bpqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file state_vector.hpp
 * Dense statevector simulation with RY, RZ and CNOT gates, Pauli-Z
 * expectations, partial traces and von Neumann entropy.
 *
 * Bit convention: qubit k is bit k of the basis-state index, so qubit 0 is
 * the least significant bit.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace bpqc {

using complex_t = std::complex<double>;

inline constexpr std::size_t kMinQubits = 2;
inline constexpr std::size_t kMaxQubits = 12;

class StateVector {
  public:
    /// |0...0> on @p n_qubits qubits.
    explicit StateVector(std::size_t n_qubits) : n_qubits_{n_qubits} {
        if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
            throw ConfigError("qubit count " + std::to_string(n_qubits) +
                              " outside [2, 12]");
        }
        amplitudes_.assign(std::size_t{1} << n_qubits, complex_t{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    [[nodiscard]] std::size_t num_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amplitudes_.size(); }

    [[nodiscard]] std::span<const complex_t> amplitudes() const {
        return amplitudes_;
    }
    [[nodiscard]] std::span<complex_t> amplitudes() { return amplitudes_; }

    [[nodiscard]] double norm_squared() const {
        double acc = 0.0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return acc;
    }

    /// Number of gates applied since construction.
    [[nodiscard]] std::size_t gates_applied() const { return gates_applied_; }

    void check_qubit(std::size_t qubit) const {
        if (qubit >= n_qubits_) {
            throw IndexError("qubit " + std::to_string(qubit) +
                             " out of range for " + std::to_string(n_qubits_) +
                             " qubits");
        }
    }

    void count_gate() { ++gates_applied_; }

  private:
    std::size_t n_qubits_;
    std::vector<complex_t> amplitudes_;
    std::size_t gates_applied_{0};
};

inline StateVector init_zero(std::size_t n_qubits) {
    return StateVector(n_qubits);
}

/// RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
inline void apply_ry(StateVector &state, std::size_t qubit, double angle) {
    state.check_qubit(qubit);
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    auto amps = state.amplitudes();
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const complex_t a0 = amps[i];
            const complex_t a1 = amps[i + stride];
            amps[i] = c * a0 - s * a1;
            amps[i + stride] = s * a0 + c * a1;
        }
    }
    state.count_gate();
}

/// RZ(theta) = diag(exp(-i theta/2), exp(+i theta/2)).
inline void apply_rz(StateVector &state, std::size_t qubit, double angle) {
    state.check_qubit(qubit);
    const complex_t phase0 = std::polar(1.0, -angle / 2);
    const complex_t phase1 = std::polar(1.0, angle / 2);
    auto amps = state.amplitudes();
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] *= (i & mask) ? phase1 : phase0;
    }
    state.count_gate();
}

inline void apply_cnot(StateVector &state, std::size_t control,
                       std::size_t target) {
    state.check_qubit(control);
    state.check_qubit(target);
    if (control == target) {
        throw ArgumentError("CNOT control and target must differ");
    }
    auto amps = state.amplitudes();
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        // visit each swapped pair once, from the member with target bit 0
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amps[i], amps[i | tmask]);
        }
    }
    state.count_gate();
}

inline double expect_z(const StateVector &state, std::size_t qubit) {
    state.check_qubit(qubit);
    const auto amps = state.amplitudes();
    const std::size_t mask = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

/// <Z_q> for every qubit in one pass over the amplitudes.
inline std::vector<double> expect_z_all(const StateVector &state) {
    const auto amps = state.amplitudes();
    const std::size_t n = state.num_qubits();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (std::size_t q = 0; q < n; ++q) {
            out[q] += ((i >> q) & 1U) ? -p : p;
        }
    }
    return out;
}

/// Parity expectation of the Z string on @p qubits.
inline double expect_z_string(const StateVector &state,
                              std::span<const std::size_t> qubits) {
    if (qubits.empty()) {
        throw ArgumentError("Z string needs at least one qubit");
    }
    std::size_t mask = 0;
    for (auto q : qubits) {
        state.check_qubit(q);
        mask |= std::size_t{1} << q;
    }
    const auto amps = state.amplitudes();
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (std::popcount(static_cast<std::uint64_t>(i & mask)) & 1U) ? -p
                                                                           : p;
    }
    return acc;
}

using DensityMatrix = Eigen::MatrixXcd;

/**
 * Partial trace over every qubit not in @p keep.
 *
 * Row/column index bit i of the result corresponds to the i-th smallest
 * qubit in @p keep.
 */
inline DensityMatrix reduced_density_matrix(const StateVector &state,
                                            std::span<const std::size_t> keep) {
    const std::size_t n = state.num_qubits();
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.empty() || kept.size() >= n) {
        throw ArgumentError("kept subsystem must be a proper nonempty subset");
    }
    for (auto q : kept) {
        state.check_qubit(q);
    }
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) {
            traced.push_back(q);
        }
    }

    auto scatter = [](std::size_t bits, const std::vector<std::size_t> &qs) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            if ((bits >> i) & 1U) {
                idx |= std::size_t{1} << qs[i];
            }
        }
        return idx;
    };

    const std::size_t dim_keep = std::size_t{1} << kept.size();
    const std::size_t dim_env = std::size_t{1} << traced.size();
    const auto amps = state.amplitudes();
    // psi reshaped as (kept, environment); rho = M M^dagger
    Eigen::MatrixXcd m(dim_keep, dim_env);
    for (std::size_t a = 0; a < dim_keep; ++a) {
        const std::size_t ia = scatter(a, kept);
        for (std::size_t e = 0; e < dim_env; ++e) {
            m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(e)) =
                amps[ia | scatter(e, traced)];
        }
    }
    return m * m.adjoint();
}

/// Eigenvalues below this are treated as exactly zero in the entropy sum.
inline constexpr double kEntropyEigenFloor = 1e-12;

/// von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix &rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw ArgumentError("density matrix must be square and nonempty");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw NumericError("density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue decomposition failed");
    }
    double s = 0.0;
    for (double lambda : solver.eigenvalues()) {
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda < kEntropyEigenFloor) {
            continue;
        }
        s -= lambda * std::log2(lambda);
    }
    return s;
}

/// Entropy of the first floor(n/2) qubits against the rest.
inline double half_cut_entropy(const StateVector &state) {
    std::vector<std::size_t> keep(state.num_qubits() / 2);
    for (std::size_t q = 0; q < keep.size(); ++q) {
        keep[q] = q;
    }
    return von_neumann_entropy(reduced_density_matrix(state, keep));
}

} // namespace bpqc
