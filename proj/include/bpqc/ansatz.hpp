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
 * @file ansatz.hpp
 * Layered hardware-efficient ansatz.
 *
 * Each layer applies RY(phi_k) then RZ(phi_{k+n}) on every qubit k, followed
 * by a fixed CNOT entangler. Parameters are stored layer-major; within a
 * layer the first n angles drive RY and the next n drive RZ.
 */
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "state_vector.hpp"

namespace bpqc {

enum class Topology { NearestNeighbor, AllToAll };

inline std::string_view to_string(Topology t) {
    return t == Topology::NearestNeighbor ? "nearest-neighbor" : "all-to-all";
}

struct CircuitSpec {
    std::size_t n_qubits{};
    std::size_t layers{};
    Topology topology{Topology::NearestNeighbor};

    [[nodiscard]] std::size_t param_count() const {
        return 2 * n_qubits * layers;
    }

    void validate() const {
        if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
            throw ConfigError("qubit count " + std::to_string(n_qubits) +
                              " outside [2, 12]");
        }
        if (layers == 0) {
            throw ConfigError("circuit needs at least one layer");
        }
    }

    bool operator==(const CircuitSpec &) const = default;
};

using ParamVector = std::vector<double>;

/// Index of the RY angle on @p qubit in @p layer (0-based).
inline std::size_t ry_index(const CircuitSpec &spec, std::size_t layer,
                            std::size_t qubit) {
    return layer * 2 * spec.n_qubits + qubit;
}

/// Index of the RZ angle on @p qubit in @p layer (0-based).
inline std::size_t rz_index(const CircuitSpec &spec, std::size_t layer,
                            std::size_t qubit) {
    return layer * 2 * spec.n_qubits + spec.n_qubits + qubit;
}

/// CNOT (control, target) pairs of one entangling layer, in application order.
inline std::vector<std::pair<std::size_t, std::size_t>>
entangler_pairs(const CircuitSpec &spec) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t n = spec.n_qubits;
    if (spec.topology == Topology::NearestNeighbor) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            pairs.emplace_back(k, k + 1);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                pairs.emplace_back(i, j);
            }
        }
    }
    return pairs;
}

/// Closed-form gate count: L(3n-1) nearest-neighbor, L(n(n-1)/2 + 2n) all-to-all.
inline std::size_t gate_count(const CircuitSpec &spec) {
    const std::size_t n = spec.n_qubits;
    const std::size_t L = spec.layers;
    if (spec.topology == Topology::NearestNeighbor) {
        return L * (3 * n - 1);
    }
    return L * (n * (n - 1) / 2 + 2 * n);
}

inline StateVector run_circuit(const CircuitSpec &spec,
                               std::span<const double> params) {
    spec.validate();
    if (params.size() != spec.param_count()) {
        throw ArgumentError("expected " + std::to_string(spec.param_count()) +
                            " parameters, got " +
                            std::to_string(params.size()));
    }
    StateVector state(spec.n_qubits);
    const auto pairs = entangler_pairs(spec);
    for (std::size_t layer = 0; layer < spec.layers; ++layer) {
        for (std::size_t k = 0; k < spec.n_qubits; ++k) {
            apply_ry(state, k, params[ry_index(spec, layer, k)]);
            apply_rz(state, k, params[rz_index(spec, layer, k)]);
        }
        for (const auto &[control, target] : pairs) {
            apply_cnot(state, control, target);
        }
    }
    return state;
}

} // namespace bpqc
