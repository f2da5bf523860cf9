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
 * @file gradients.hpp
 * Parameter-shift gradients, the finite-difference oracle and the
 * gradient-variance estimator.
 *
 * Every rotation has a Pauli/2 generator, so shifting one angle by +-pi/2
 * and halving the difference is exact for any expectation value. Losses that
 * are nonlinear in the expectations (the PDE configurations) are
 * differentiated by shifting each output <Z_k> and applying the analytic
 * outer derivative: dL/dphi = J^T dL/df.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ansatz.hpp"
#include "errors.hpp"
#include "losses.hpp"
#include "parallel.hpp"
#include "state_vector.hpp"

namespace bpqc {

using GradientVector = std::vector<double>;

inline constexpr double kShift = std::numbers::pi / 2;

/// Tally of circuits simulated and their worst norm drift.
struct EvalStats {
    std::size_t circuits{0};
    double max_norm_deviation{0.0};

    void record(const StateVector &state) {
        ++circuits;
        max_norm_deviation = std::max(max_norm_deviation,
                                      std::abs(state.norm_squared() - 1.0));
    }

    void merge(const EvalStats &other) {
        circuits += other.circuits;
        max_norm_deviation =
            std::max(max_norm_deviation, other.max_norm_deviation);
    }
};

namespace detail {

inline StateVector run_tracked(const CircuitSpec &spec,
                               std::span<const double> params,
                               EvalStats *stats) {
    auto state = run_circuit(spec, params);
    if (stats != nullptr) {
        stats->record(state);
    }
    return state;
}

/// Calls fn(j, state_plus, state_minus) for every parameter j.
template <typename Fn>
void for_each_shift(const CircuitSpec &spec, std::span<const double> params,
                    EvalStats *stats, Fn &&fn) {
    if (params.size() != spec.param_count()) {
        throw ArgumentError("parameter vector length does not match circuit");
    }
    std::vector<double> shifted(params.begin(), params.end());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
        const double original = shifted[j];
        shifted[j] = original + kShift;
        const auto plus = run_tracked(spec, shifted, stats);
        shifted[j] = original - kShift;
        const auto minus = run_tracked(spec, shifted, stats);
        shifted[j] = original;
        fn(j, plus, minus);
    }
}

} // namespace detail

/// d<Z_k>/dphi_j for every output k and parameter j (n x 2nL).
inline Eigen::MatrixXd jacobian_outputs(const CircuitSpec &spec,
                                        std::span<const double> params,
                                        EvalStats *stats = nullptr) {
    spec.validate();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(spec.n_qubits),
                        static_cast<Eigen::Index>(spec.param_count()));
    detail::for_each_shift(
        spec, params, stats,
        [&](std::size_t j, const StateVector &plus, const StateVector &minus) {
            const auto fp = expect_z_all(plus);
            const auto fm = expect_z_all(minus);
            for (std::size_t k = 0; k < fp.size(); ++k) {
                jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                    0.5 * (fp[k] - fm[k]);
            }
        });
    return jac;
}

/// Exact gradient of total_loss with respect to the circuit parameters.
inline GradientVector loss_gradient(const LossConfig &config,
                                    const CircuitSpec &spec,
                                    std::span<const double> params,
                                    const Discretization &disc,
                                    EvalStats *stats = nullptr) {
    check_pairing(config, spec, disc);
    GradientVector grad(spec.param_count(), 0.0);
    if (!config.is_pde()) {
        detail::for_each_shift(
            spec, params, stats,
            [&](std::size_t j, const StateVector &plus,
                const StateVector &minus) {
                grad[j] = 0.5 * (loss_of_state(config, plus, disc) -
                                 loss_of_state(config, minus, disc));
            });
        return grad;
    }
    const auto f = output_vector(detail::run_tracked(spec, params, stats));
    const auto outer = composite_loss_output_gradient(config, f, disc);
    const auto jac = jacobian_outputs(spec, params, stats);
    const Eigen::Map<const Eigen::VectorXd> g_f(
        outer.data(), static_cast<Eigen::Index>(outer.size()));
    Eigen::Map<Eigen::VectorXd>(grad.data(),
                                static_cast<Eigen::Index>(grad.size())) =
        jac.transpose() * g_f;
    return grad;
}

/// Central differences [L(phi + h e_j) - L(phi - h e_j)] / 2h.
inline GradientVector
finite_difference_gradient(const std::function<double(std::span<const double>)> &loss,
                           std::span<const double> params, double h) {
    if (!(h > 0.0)) {
        throw ArgumentError("finite-difference step must be positive");
    }
    std::vector<double> shifted(params.begin(), params.end());
    GradientVector grad(params.size());
    for (std::size_t j = 0; j < shifted.size(); ++j) {
        const double original = shifted[j];
        shifted[j] = original + h;
        const double up = loss(shifted);
        shifted[j] = original - h;
        const double down = loss(shifted);
        shifted[j] = original;
        grad[j] = (up - down) / (2.0 * h);
    }
    return grad;
}

/// Uniform[0, 2pi) angles for draw @p sample of the stream keyed by @p seed.
///
/// The stream depends on (seed, n, L, sample) only, so configurations that
/// share a circuit size see identical draws.
inline ParamVector draw_params(const CircuitSpec &spec, std::uint64_t seed,
                               std::uint64_t sample) {
    std::mt19937_64 engine(derive_seed({seed, spec.n_qubits, spec.layers,
                                        sample}));
    ParamVector params(spec.param_count());
    for (double &p : params) {
        // 53 random mantissa bits; portable across standard libraries
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        p = 2.0 * std::numbers::pi * u;
    }
    return params;
}

using ParamSampler = std::function<ParamVector(std::size_t sample)>;

struct VarianceReport {
    std::vector<double> per_param_variance;
    double mean_variance{0.0};
    std::size_t n_samples{0};
    std::uint64_t seed{0};
    EvalStats stats;

    /// Standard error of mean_variance: sample std of per_param_variance / sqrt(p).
    [[nodiscard]] double stderr_of_mean() const {
        const std::size_t p = per_param_variance.size();
        if (p < 2) {
            return 0.0;
        }
        double acc = 0.0;
        for (double v : per_param_variance) {
            acc += (v - mean_variance) * (v - mean_variance);
        }
        return std::sqrt(acc / static_cast<double>(p - 1)) /
               std::sqrt(static_cast<double>(p));
    }
};

/// Unbiased (K-1) per-column variance of @p samples and its mean.
inline VarianceReport summarize_gradients(
    const std::vector<GradientVector> &samples, std::uint64_t seed) {
    const std::size_t k = samples.size();
    if (k < 2) {
        throw ArgumentError("gradient variance needs at least 2 samples");
    }
    const std::size_t p = samples.front().size();
    VarianceReport report;
    report.per_param_variance.assign(p, 0.0);
    report.n_samples = k;
    report.seed = seed;
    for (std::size_t j = 0; j < p; ++j) {
        // Welford update; exact zero for constant columns
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double x = samples[i][j];
            const double delta = x - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (x - mean);
        }
        report.per_param_variance[j] = m2 / static_cast<double>(k - 1);
    }
    double total = 0.0;
    for (double v : report.per_param_variance) {
        total += v;
    }
    report.mean_variance = total / static_cast<double>(p);
    return report;
}

/// Gradient variance over K parameter vectors produced by @p sampler.
inline VarianceReport gradient_variance(const LossConfig &config,
                                        const CircuitSpec &spec,
                                        const Discretization &disc,
                                        std::size_t n_samples,
                                        const ParamSampler &sampler,
                                        std::uint64_t seed,
                                        std::size_t threads = 0) {
    if (n_samples < 2) {
        throw ArgumentError("gradient variance needs at least 2 samples");
    }
    check_pairing(config, spec, disc);
    std::vector<GradientVector> grads(n_samples);
    std::vector<EvalStats> stats(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        grads[i] = loss_gradient(config, spec, sampler(i), disc, &stats[i]);
    });
    auto report = summarize_gradients(grads, seed);
    for (const auto &s : stats) {
        report.stats.merge(s);
    }
    return report;
}

/// Gradient variance over K seeded Uniform[0, 2pi) draws.
inline VarianceReport gradient_variance(const LossConfig &config,
                                        const CircuitSpec &spec,
                                        const Discretization &disc,
                                        std::size_t n_samples,
                                        std::uint64_t seed,
                                        std::size_t threads = 0) {
    return gradient_variance(
        config, spec, disc, n_samples,
        [&](std::size_t i) { return draw_params(spec, seed, i); }, seed,
        threads);
}

} // namespace bpqc
