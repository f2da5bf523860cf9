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
 * @file experiments.hpp
 * Gradient-variance sweeps over qubit count, depth and PDE type, the
 * entanglement-entropy sweep, gradient-descent training traces and
 * scaling-exponent fits.
 *
 * All configurations in a sweep reuse the same seeded parameter draws for a
 * given circuit size, so cross-configuration comparisons are paired.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ansatz.hpp"
#include "errors.hpp"
#include "gradients.hpp"
#include "losses.hpp"
#include "parallel.hpp"
#include "state_vector.hpp"

namespace bpqc {

inline const std::vector<LossKind> &all_loss_kinds() {
    static const std::vector<LossKind> kinds{
        LossKind::GlobalCost, LossKind::LocalCost, LossKind::PdeConstrained,
        LossKind::PdeStructured};
    return kinds;
}

inline const std::vector<PdeKind> &all_pdes() {
    static const std::vector<PdeKind> pdes{Heat{}, Burgers{}, SaintVenant{}};
    return pdes;
}

/// Loss configuration for @p kind on @p n qubits with the gradient penalty.
inline LossConfig make_config(LossKind kind, std::size_t n,
                              double physics_weight = kDefaultPhysicsWeight) {
    switch (kind) {
    case LossKind::GlobalCost:
        return LossConfig::global();
    case LossKind::LocalCost:
        return LossConfig::local();
    default:
        return LossConfig::pde_penalty(kind, n, physics_weight);
    }
}

struct SweepRow {
    std::size_t n_qubits{};
    std::size_t layers{};
    LossKind config{};
    std::optional<PdeKind> pde;
    VarianceReport report;

    [[nodiscard]] std::string pde_label() const {
        return pde ? std::string(pde_name(*pde)) : std::string{};
    }
};

struct SweepResult {
    std::string experiment;
    std::vector<SweepRow> rows;

    /// Orders rows by (n, layers, config, pde).
    void sort_rows() {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const SweepRow &a, const SweepRow &b) {
                             const auto pa = a.pde ? a.pde->index() : 0;
                             const auto pb = b.pde ? b.pde->index() : 0;
                             return std::tuple(a.n_qubits, a.layers, a.config,
                                               pa) <
                                    std::tuple(b.n_qubits, b.layers, b.config,
                                               pb);
                         });
    }

    /// Row for the given cell, or nullptr.
    [[nodiscard]] const SweepRow *find(std::size_t n, std::size_t layers,
                                       LossKind config) const {
        for (const auto &r : rows) {
            if (r.n_qubits == n && r.layers == layers && r.config == config) {
                return &r;
            }
        }
        return nullptr;
    }
};

struct SweepOptions {
    std::size_t n_samples{25};
    std::uint64_t seed{1};
    double physics_weight{kDefaultPhysicsWeight};
    std::size_t threads{0};
};

namespace detail {

inline void check_samples(const SweepOptions &opts) {
    if (opts.n_samples < 2) {
        throw ArgumentError("variance sweeps need K >= 2");
    }
}

inline SweepRow variance_cell(std::size_t n, std::size_t layers, LossKind kind,
                              const SweepOptions &opts) {
    const CircuitSpec spec{n, layers, required_topology(kind)};
    const auto config = make_config(kind, n, opts.physics_weight);
    return {n, layers, kind, std::nullopt,
            gradient_variance(config, spec, Discretization::periodic_unit(n),
                              opts.n_samples, opts.seed, opts.threads)};
}

} // namespace detail

/// Variance of every configuration over qubit counts @p ns at depth @p layers.
inline SweepResult sweep_qubits(const std::vector<std::size_t> &ns,
                                std::size_t layers,
                                const std::vector<LossKind> &kinds,
                                const SweepOptions &opts) {
    detail::check_samples(opts);
    SweepResult result{"sweep-qubits", {}};
    for (auto n : ns) {
        for (auto kind : kinds) {
            result.rows.push_back(detail::variance_cell(n, layers, kind, opts));
        }
    }
    result.sort_rows();
    return result;
}

/// Variance of every configuration over depths @p layer_counts on @p n qubits.
inline SweepResult sweep_depth(const std::vector<std::size_t> &layer_counts,
                               std::size_t n,
                               const std::vector<LossKind> &kinds,
                               const SweepOptions &opts) {
    detail::check_samples(opts);
    SweepResult result{"sweep-depth", {}};
    for (auto layers : layer_counts) {
        for (auto kind : kinds) {
            result.rows.push_back(detail::variance_cell(n, layers, kind, opts));
        }
    }
    result.sort_rows();
    return result;
}

/// PDE-constrained variance with each PDE residual as the physics term.
inline SweepResult sweep_pde(const std::vector<PdeKind> &pdes, std::size_t n,
                             std::size_t layers, const SweepOptions &opts) {
    detail::check_samples(opts);
    SweepResult result{"sweep-pde", {}};
    const CircuitSpec spec{n, layers, Topology::AllToAll};
    for (const auto &pde : pdes) {
        const auto config = LossConfig::pde_residual(LossKind::PdeConstrained,
                                                     pde, n, opts.physics_weight);
        result.rows.push_back(
            {n, layers, LossKind::PdeConstrained, pde,
             gradient_variance(config, spec, Discretization::periodic_unit(n),
                               opts.n_samples, opts.seed, opts.threads)});
    }
    result.sort_rows();
    return result;
}

/// Same cells as sweep_qubits at a single size; rows keep full per-parameter vectors.
inline SweepResult per_param_distribution(std::size_t n, std::size_t layers,
                                          const std::vector<LossKind> &kinds,
                                          const SweepOptions &opts) {
    auto result = sweep_qubits({n}, layers, kinds, opts);
    result.experiment = "per-param";
    return result;
}

struct EntropyRow {
    std::size_t n_qubits{};
    std::size_t layers{};
    Topology topology{};
    double mean_entropy_bits{};
    double ratio_to_max{};
    std::size_t n_samples{};
    std::uint64_t seed{};
    EvalStats stats;
};

struct EntropyResult {
    std::string experiment{"entanglement"};
    std::vector<EntropyRow> rows;

    [[nodiscard]] const EntropyRow *find(std::size_t n, std::size_t layers,
                                         Topology t) const {
        for (const auto &r : rows) {
            if (r.n_qubits == n && r.layers == layers && r.topology == t) {
                return &r;
            }
        }
        return nullptr;
    }
};

/// Mean half-cut entropy over K seeded draws, normalized by its n/2 maximum.
inline EntropyResult entanglement_sweep(const std::vector<std::size_t> &ns,
                                        const std::vector<std::size_t> &layer_counts,
                                        const std::vector<Topology> &topologies,
                                        std::size_t n_samples,
                                        std::uint64_t seed,
                                        std::size_t threads = 0) {
    if (n_samples < 1) {
        throw ArgumentError("entanglement sweep needs K >= 1");
    }
    EntropyResult result;
    for (auto n : ns) {
        for (auto layers : layer_counts) {
            for (auto topology : topologies) {
                const CircuitSpec spec{n, layers, topology};
                spec.validate();
                std::vector<double> entropy(n_samples);
                std::vector<EvalStats> stats(n_samples);
                parallel_for(n_samples, threads, [&](std::size_t i) {
                    const auto state =
                        run_circuit(spec, draw_params(spec, seed, i));
                    stats[i].record(state);
                    entropy[i] = half_cut_entropy(state);
                });
                EntropyRow row{n, layers, topology, 0.0, 0.0, n_samples, seed,
                               {}};
                for (std::size_t i = 0; i < n_samples; ++i) {
                    row.mean_entropy_bits += entropy[i];
                    row.stats.merge(stats[i]);
                }
                row.mean_entropy_bits /= static_cast<double>(n_samples);
                row.ratio_to_max =
                    row.mean_entropy_bits / (static_cast<double>(n) / 2.0);
                result.rows.push_back(row);
            }
        }
    }
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const EntropyRow &a, const EntropyRow &b) {
                         return std::tuple(a.n_qubits, a.layers, a.topology) <
                                std::tuple(b.n_qubits, b.layers, b.topology);
                     });
    return result;
}

struct TrainEpoch {
    std::size_t epoch{};
    double loss{};
    double gradient_norm{};
    GradientVector gradient;
};

struct TrainTrace {
    LossKind config{};
    std::uint64_t seed{};
    std::vector<TrainEpoch> epochs;
    EvalStats stats;

    [[nodiscard]] double final_loss() const { return epochs.back().loss; }
    [[nodiscard]] double final_grad_norm() const {
        return epochs.back().gradient_norm;
    }
};

struct TrainOptions {
    std::size_t n_qubits{4};
    std::size_t layers{3};
    std::size_t epochs{50};
    double learning_rate{0.01};
    std::uint64_t seed{1};
};

inline double euclidean_norm(const GradientVector &g) {
    double acc = 0.0;
    for (double x : g) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

/**
 * Plain gradient descent phi <- phi - lr * grad from a seeded uniform start.
 *
 * Entry 0 is the initial point; entry e is the point after e updates.
 */
inline TrainTrace train(const LossConfig &config, const TrainOptions &opts) {
    if (opts.epochs < 1) {
        throw ArgumentError("training needs at least one epoch");
    }
    const CircuitSpec spec{opts.n_qubits, opts.layers,
                           required_topology(config.kind)};
    const auto disc = Discretization::periodic_unit(opts.n_qubits);
    check_pairing(config, spec, disc);
    auto params = draw_params(spec, opts.seed, 0);
    TrainTrace trace{config.kind, opts.seed, {}, {}};
    trace.epochs.reserve(opts.epochs + 1);
    for (std::size_t e = 0; e <= opts.epochs; ++e) {
        const auto state = run_circuit(spec, params);
        trace.stats.record(state);
        auto grad = loss_gradient(config, spec, params, disc, &trace.stats);
        const double norm = euclidean_norm(grad);
        trace.epochs.push_back(
            {e, loss_of_state(config, state, disc), norm, grad});
        if (e < opts.epochs) {
            for (std::size_t j = 0; j < params.size(); ++j) {
                params[j] -= opts.learning_rate * grad[j];
            }
        }
    }
    return trace;
}

enum class ScalingModel {
    ExpInQubits,   ///< var ~ 2^{-b n}
    PowerInQubits, ///< var ~ n^{-a}
};

struct ScalingFit {
    ScalingModel model{};
    double exponent{};
    double residual_norm{};
};

/// Least-squares fit of log-variance against n (exp) or log n (power).
inline ScalingFit fit_scaling(const std::vector<std::pair<double, double>> &points,
                              ScalingModel model) {
    if (points.size() < 2) {
        throw ArgumentError("scaling fit needs at least 2 points");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto &[n, var] : points) {
        if (!(var > 0.0)) {
            throw NumericError("scaling fit needs positive variances");
        }
        if (model == ScalingModel::ExpInQubits) {
            xs.push_back(n);
            ys.push_back(std::log2(var));
        } else {
            if (!(n > 0.0)) {
                throw NumericError("power-law fit needs positive n");
            }
            xs.push_back(std::log(n));
            ys.push_back(std::log(var));
        }
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw ArgumentError("scaling fit needs at least two distinct n");
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }
    return {model, -slope, std::sqrt(rss)};
}

} // namespace bpqc
