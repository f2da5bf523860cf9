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
 * @file losses.hpp
 * Loss configurations mapping the per-qubit Z expectations of a circuit to a
 * scalar: global and local expectation costs, and data-fit plus physics
 * losses built from periodic finite-difference stencils.
 *
 * The circuit output f_k = <Z_k> is read as a steady spatial profile on a
 * unit periodic grid with one collocation point per qubit (dx = 1/n). Time
 * derivatives are zero, so PDE residuals test the spatial operator only.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ansatz.hpp"
#include "errors.hpp"
#include "state_vector.hpp"

namespace bpqc {

struct Discretization {
    std::size_t n_points{};
    double dx{};

    /// Unit periodic domain with @p n points, dx = 1/n.
    static Discretization periodic_unit(std::size_t n) {
        if (n < 2) {
            throw ConfigError("periodic grid needs at least 2 points");
        }
        return {n, 1.0 / static_cast<double>(n)};
    }
};

struct Heat {
    double kappa{0.01};
};

struct Burgers {
    double nu{0.01};
};

/// Continuity with Manning discharge in the wide-channel limit (R_h = A).
struct SaintVenant {
    double manning_n{0.035};
    double friction_slope{0.001};
    double epsilon_floor{0.05};
};

using PdeKind = std::variant<Heat, Burgers, SaintVenant>;

inline std::string_view pde_name(const PdeKind &pde) {
    struct Visitor {
        std::string_view operator()(const Heat &) const { return "heat"; }
        std::string_view operator()(const Burgers &) const { return "burgers"; }
        std::string_view operator()(const SaintVenant &) const {
            return "saint-venant";
        }
    };
    return std::visit(Visitor{}, pde);
}

enum class LossKind { GlobalCost, LocalCost, PdeConstrained, PdeStructured };

inline std::string_view to_string(LossKind kind) {
    switch (kind) {
    case LossKind::GlobalCost:
        return "global";
    case LossKind::LocalCost:
        return "local";
    case LossKind::PdeConstrained:
        return "pde-constrained";
    case LossKind::PdeStructured:
        return "pde-structured";
    }
    return "?";
}

/// Entangling topology each configuration is defined with.
inline Topology required_topology(LossKind kind) {
    return kind == LossKind::PdeStructured ? Topology::NearestNeighbor
                                           : Topology::AllToAll;
}

/// Which physics penalty the PDE configurations add to the data loss.
enum class PhysicsTerm {
    GradientPenalty, ///< mean squared centered first difference
    PdeResidual,     ///< mean squared residual of the configured PDE
};

inline constexpr double kDefaultPhysicsWeight = 0.1;

/// sin(2 pi k / n), the fixed data-fit target.
inline std::vector<double> default_target(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) /
                        static_cast<double>(n));
    }
    return t;
}

struct LossConfig {
    LossKind kind{LossKind::GlobalCost};
    PhysicsTerm physics{PhysicsTerm::GradientPenalty};
    PdeKind pde{Heat{}};
    double physics_weight{kDefaultPhysicsWeight};
    std::vector<double> target;

    [[nodiscard]] bool is_pde() const {
        return kind == LossKind::PdeConstrained ||
               kind == LossKind::PdeStructured;
    }

    static LossConfig global() {
        LossConfig c;
        c.kind = LossKind::GlobalCost;
        return c;
    }
    static LossConfig local() {
        LossConfig c;
        c.kind = LossKind::LocalCost;
        return c;
    }

    /// Data + gradient-penalty loss on @p n outputs.
    static LossConfig pde_penalty(LossKind kind, std::size_t n,
                                  double weight = kDefaultPhysicsWeight) {
        return {kind, PhysicsTerm::GradientPenalty, Heat{}, weight,
                default_target(n)};
    }

    /// Data + PDE-residual loss on @p n outputs.
    static LossConfig pde_residual(LossKind kind, PdeKind pde, std::size_t n,
                                   double weight = kDefaultPhysicsWeight) {
        return {kind, PhysicsTerm::PdeResidual, pde, weight,
                default_target(n)};
    }
};

/// f_k = <Z_k>.
inline std::vector<double> output_vector(const StateVector &state) {
    return expect_z_all(state);
}

namespace detail {

inline void check_grid(std::span<const double> f, const Discretization &disc) {
    if (f.size() != disc.n_points) {
        throw ArgumentError("profile has " + std::to_string(f.size()) +
                            " points, grid has " +
                            std::to_string(disc.n_points));
    }
}

inline std::size_t next(std::size_t k, std::size_t n) {
    return k + 1 == n ? 0 : k + 1;
}
inline std::size_t prev(std::size_t k, std::size_t n) {
    return k == 0 ? n - 1 : k - 1;
}

inline double mean_square(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return acc / static_cast<double>(v.size());
}

} // namespace detail

/// (f_{k+1} - f_{k-1}) / (2 dx), periodic.
inline std::vector<double> centered_d1(std::span<const double> f,
                                       const Discretization &disc) {
    detail::check_grid(f, disc);
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = (f[detail::next(k, n)] - f[detail::prev(k, n)]) /
                 (2.0 * disc.dx);
    }
    return out;
}

/// (f_{k+1} - 2 f_k + f_{k-1}) / dx^2, periodic.
inline std::vector<double> centered_d2(std::span<const double> f,
                                       const Discretization &disc) {
    detail::check_grid(f, disc);
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = (f[detail::next(k, n)] - 2.0 * f[k] + f[detail::prev(k, n)]) /
                 (disc.dx * disc.dx);
    }
    return out;
}

/// Transpose of the centered_d1 operator applied to @p g.
inline std::vector<double> centered_d1_transpose(std::span<const double> g,
                                                 const Discretization &disc) {
    detail::check_grid(g, disc);
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = g[k] / (2.0 * disc.dx);
        out[detail::next(k, n)] += w;
        out[detail::prev(k, n)] -= w;
    }
    return out;
}

/// Transpose of the centered_d2 operator applied to @p g.
inline std::vector<double> centered_d2_transpose(std::span<const double> g,
                                                 const Discretization &disc) {
    detail::check_grid(g, disc);
    const std::size_t n = g.size();
    const double inv = 1.0 / (disc.dx * disc.dx);
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        out[detail::next(k, n)] += g[k] * inv;
        out[k] -= 2.0 * g[k] * inv;
        out[detail::prev(k, n)] += g[k] * inv;
    }
    return out;
}

/// Mean squared centered first difference of @p f.
inline double physics_loss_gradient_penalty(std::span<const double> f,
                                            const Discretization &disc) {
    return detail::mean_square(centered_d1(f, disc));
}

namespace detail {

/// Manning discharge Q(A) = A^{5/3} sqrt(S_f) / n_M and dQ/df with A = (f+1)/2 + eps.
struct Discharge {
    std::vector<double> q;
    std::vector<double> dq_df;
};

inline Discharge manning_discharge(std::span<const double> f,
                                   const SaintVenant &sv) {
    if (!(sv.epsilon_floor > 0.0)) {
        throw NumericError("Saint-Venant area floor must be positive");
    }
    const double scale = std::sqrt(sv.friction_slope) / sv.manning_n;
    Discharge out{std::vector<double>(f.size()), std::vector<double>(f.size())};
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double area = 0.5 * (f[k] + 1.0) + sv.epsilon_floor;
        if (!(area > 0.0) || !std::isfinite(area)) {
            throw NumericError("non-positive cross-sectional area at point " +
                               std::to_string(k));
        }
        out.q[k] = scale * std::pow(area, 5.0 / 3.0);
        out.dq_df[k] = scale * (5.0 / 3.0) * std::pow(area, 2.0 / 3.0) * 0.5;
    }
    return out;
}

} // namespace detail

/// Steady-state residual of @p pde at each collocation point.
inline std::vector<double> pde_residual(std::span<const double> f,
                                        const PdeKind &pde,
                                        const Discretization &disc) {
    detail::check_grid(f, disc);
    std::vector<double> r;
    if (const auto *heat = std::get_if<Heat>(&pde)) {
        r = centered_d2(f, disc);
        for (double &x : r) {
            x *= heat->kappa;
        }
    } else if (const auto *burgers = std::get_if<Burgers>(&pde)) {
        const auto d1 = centered_d1(f, disc);
        const auto d2 = centered_d2(f, disc);
        r.resize(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            r[k] = f[k] * d1[k] - burgers->nu * d2[k];
        }
    } else {
        const auto discharge =
            detail::manning_discharge(f, std::get<SaintVenant>(pde));
        r = centered_d1(discharge.q, disc);
    }
    for (double x : r) {
        if (!std::isfinite(x)) {
            throw NumericError("non-finite PDE residual");
        }
    }
    return r;
}

/// Mean squared PDE residual.
inline double pde_loss(std::span<const double> f, const PdeKind &pde,
                       const Discretization &disc) {
    return detail::mean_square(pde_residual(f, pde, disc));
}

/// Gradient of pde_loss with respect to the profile @p f.
inline std::vector<double> pde_loss_output_gradient(std::span<const double> f,
                                                    const PdeKind &pde,
                                                    const Discretization &disc) {
    const auto r = pde_residual(f, pde, disc);
    const std::size_t n = f.size();
    const double scale = 2.0 / static_cast<double>(n);
    std::vector<double> g;
    if (const auto *heat = std::get_if<Heat>(&pde)) {
        g = centered_d2_transpose(r, disc);
        for (double &x : g) {
            x *= heat->kappa;
        }
    } else if (const auto *burgers = std::get_if<Burgers>(&pde)) {
        // dR_k/df_m = delta_km d1_k + f_k D1_km - nu D2_km
        const auto d1 = centered_d1(f, disc);
        std::vector<double> fr(n);
        for (std::size_t k = 0; k < n; ++k) {
            fr[k] = f[k] * r[k];
        }
        const auto t1 = centered_d1_transpose(fr, disc);
        const auto t2 = centered_d2_transpose(r, disc);
        g.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = r[k] * d1[k] + t1[k] - burgers->nu * t2[k];
        }
    } else {
        const auto discharge =
            detail::manning_discharge(f, std::get<SaintVenant>(pde));
        g = centered_d1_transpose(r, disc);
        for (std::size_t k = 0; k < n; ++k) {
            g[k] *= discharge.dq_df[k];
        }
    }
    for (double &x : g) {
        x *= scale;
    }
    return g;
}

/// Mean squared error against @p target.
inline double data_loss(std::span<const double> f,
                        std::span<const double> target) {
    if (f.size() != target.size()) {
        throw ArgumentError("profile and target lengths differ");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double d = f[k] - target[k];
        acc += d * d;
    }
    return acc / static_cast<double>(f.size());
}

/// The weighted physics term selected by @p config.
inline double physics_loss(const LossConfig &config, std::span<const double> f,
                           const Discretization &disc) {
    if (config.physics == PhysicsTerm::GradientPenalty) {
        return physics_loss_gradient_penalty(f, disc);
    }
    return pde_loss(f, config.pde, disc);
}

/// data_loss + weight * physics_loss for the PDE configurations.
inline double composite_loss(const LossConfig &config,
                             std::span<const double> f,
                             const Discretization &disc) {
    return data_loss(f, config.target) +
           config.physics_weight * physics_loss(config, f, disc);
}

/// Gradient of composite_loss with respect to the profile @p f.
inline std::vector<double>
composite_loss_output_gradient(const LossConfig &config,
                               std::span<const double> f,
                               const Discretization &disc) {
    if (f.size() != config.target.size()) {
        throw ArgumentError("profile and target lengths differ");
    }
    const std::size_t n = f.size();
    std::vector<double> phys;
    if (config.physics == PhysicsTerm::GradientPenalty) {
        const auto d1 = centered_d1(f, disc);
        phys = centered_d1_transpose(d1, disc);
        for (double &x : phys) {
            x *= 2.0 / static_cast<double>(n);
        }
    } else {
        phys = pde_loss_output_gradient(f, config.pde, disc);
    }
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = 2.0 / static_cast<double>(n) * (f[k] - config.target[k]) +
               config.physics_weight * phys[k];
    }
    return g;
}

/// Throws ConfigError unless @p config, @p spec and @p disc fit together.
inline void check_pairing(const LossConfig &config, const CircuitSpec &spec,
                          const Discretization &disc) {
    spec.validate();
    if (spec.topology != required_topology(config.kind)) {
        throw ConfigError(std::string(to_string(config.kind)) +
                          " loss requires " +
                          std::string(to_string(required_topology(config.kind))) +
                          " entanglement");
    }
    if (config.is_pde()) {
        if (disc.n_points != spec.n_qubits) {
            throw ConfigError("grid size must equal the qubit count");
        }
        if (config.target.size() != spec.n_qubits) {
            throw ConfigError("target profile length must equal the qubit count");
        }
        if (config.physics_weight < 0.0) {
            throw ConfigError("physics weight must be nonnegative");
        }
    }
}

/// Loss value of an already-prepared circuit state.
inline double loss_of_state(const LossConfig &config, const StateVector &state,
                            const Discretization &disc) {
    switch (config.kind) {
    case LossKind::GlobalCost: {
        std::vector<std::size_t> all(state.num_qubits());
        for (std::size_t q = 0; q < all.size(); ++q) {
            all[q] = q;
        }
        return expect_z_string(state, all);
    }
    case LossKind::LocalCost:
        return expect_z(state, 0);
    default:
        return composite_loss(config, output_vector(state), disc);
    }
}

inline double total_loss(const LossConfig &config, const CircuitSpec &spec,
                         std::span<const double> params,
                         const Discretization &disc) {
    check_pairing(config, spec, disc);
    return loss_of_state(config, run_circuit(spec, params), disc);
}

} // namespace bpqc
