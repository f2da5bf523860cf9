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
#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bpqc/gradients.hpp"

using namespace bpqc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<LossConfig> every_config(std::size_t n) {
    std::vector<LossConfig> out{LossConfig::global(), LossConfig::local()};
    for (auto kind : {LossKind::PdeConstrained, LossKind::PdeStructured}) {
        out.push_back(LossConfig::pde_penalty(kind, n));
        for (const PdeKind &pde : {PdeKind{Heat{}}, PdeKind{Burgers{}},
                                   PdeKind{SaintVenant{}}}) {
            out.push_back(LossConfig::pde_residual(kind, pde, n));
        }
    }
    return out;
}

/// Delete-one jackknife standard error of the mean gradient variance.
double jackknife_stderr(const std::vector<GradientVector> &grads) {
    const std::size_t k = grads.size();
    std::vector<double> loo(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<GradientVector> rest;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != i) {
                rest.push_back(grads[j]);
            }
        }
        loo[i] = summarize_gradients(rest, 0).mean_variance;
    }
    double mean = 0.0;
    for (double v : loo) {
        mean += v;
    }
    mean /= static_cast<double>(k);
    double acc = 0.0;
    for (double v : loo) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(static_cast<double>(k - 1) / static_cast<double>(k) * acc);
}

} // namespace

TEST_CASE("output Jacobian", "[gradients]") {
    const CircuitSpec spec{2, 1, Topology::NearestNeighbor};
    ParamVector p(4, 0.0);
    auto jac = jacobian_outputs(spec, p);
    CHECK_THAT(jac(0, 0), WithinAbs(0.0, 1e-15));
    p[0] = std::numbers::pi / 2;
    jac = jacobian_outputs(spec, p);
    CHECK_THAT(jac(0, 0), WithinAbs(-1.0, 1e-14));

    const CircuitSpec deep{4, 2, Topology::AllToAll};
    for (std::uint64_t i = 0; i < 5; ++i) {
        const auto q = draw_params(deep, 3, i);
        const auto j = jacobian_outputs(deep, q);
        CHECK(j.rows() == 4);
        CHECK(j.cols() == 16);
        CHECK(j.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
        for (std::size_t k = 0; k < 4; ++k) {
            const auto fd = finite_difference_gradient(
                [&](std::span<const double> x) {
                    return expect_z(run_circuit(deep, x), k);
                },
                q, 1e-5);
            for (std::size_t c = 0; c < fd.size(); ++c) {
                CHECK_THAT(j(k, c), WithinAbs(fd[c], 1e-6));
            }
        }
    }
    // layer-1 RZ columns are live under the RY-then-RZ order
    const auto j0 = jacobian_outputs(deep, draw_params(deep, 3, 0));
    CHECK(j0.block(0, 4, 4, 4).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("loss gradients match central finite differences",
          "[gradients][property]") {
    for (std::size_t n : {2, 4}) {
        const auto disc = Discretization::periodic_unit(n);
        for (std::size_t L : {1, 2}) {
            for (const auto &config : every_config(n)) {
                const CircuitSpec spec{n, L, required_topology(config.kind)};
                for (std::uint64_t draw = 0; draw < 10; ++draw) {
                    const auto p = draw_params(spec, 2024, draw);
                    const auto g = loss_gradient(config, spec, p, disc);
                    const auto fd = finite_difference_gradient(
                        [&](std::span<const double> x) {
                            return total_loss(config, spec, x, disc);
                        },
                        p, 1e-5);
                    REQUIRE(g.size() == spec.param_count());
                    for (std::size_t j = 0; j < g.size(); ++j) {
                        CHECK_THAT(g[j], WithinAbs(fd[j], 1e-6));
                    }
                }
            }
        }
    }
}

TEST_CASE("direct shift agrees with the Jacobian route", "[gradients]") {
    const CircuitSpec spec{4, 2, Topology::AllToAll};
    const auto disc = Discretization::periodic_unit(4);
    for (std::uint64_t i = 0; i < 5; ++i) {
        const auto p = draw_params(spec, 17, i);
        const auto direct = loss_gradient(LossConfig::local(), spec, p, disc);
        const auto jac = jacobian_outputs(spec, p);
        for (std::size_t j = 0; j < direct.size(); ++j) {
            CHECK_THAT(direct[j], WithinAbs(jac(0, j), 1e-14));
        }
    }
}

TEST_CASE("gradient vanishes at a stationary constant-output point", "[gradients]") {
    // all-zero angles: every f_k = 1 with zero first derivative, and the
    // target matches, so data and physics terms are both stationary
    const CircuitSpec spec{4, 2, Topology::NearestNeighbor};
    const auto disc = Discretization::periodic_unit(4);
    auto cfg = LossConfig::pde_residual(LossKind::PdeStructured, Burgers{}, 4);
    cfg.target.assign(4, 1.0);
    for (double g : loss_gradient(cfg, spec, ParamVector(16, 0.0), disc)) {
        CHECK_THAT(g, WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("finite-difference oracle", "[gradients]") {
    const std::vector<double> p{0.3, -1.2, 2.5};
    auto quad = [](std::span<const double> x) {
        double s = 0;
        for (double v : x) {
            s += v * v;
        }
        return s;
    };
    const auto g = finite_difference_gradient(quad, p, 1e-4);
    for (std::size_t j = 0; j < p.size(); ++j) {
        CHECK_THAT(g[j], WithinAbs(2 * p[j], 1e-9));
    }

    // central differences are second order: halving h quarters the error
    auto smooth = [](std::span<const double> x) { return std::sin(x[0]); };
    const std::vector<double> x0{0.7};
    const double e1 = std::abs(finite_difference_gradient(smooth, x0, 1e-2)[0] -
                               std::cos(0.7));
    const double e2 = std::abs(finite_difference_gradient(smooth, x0, 5e-3)[0] -
                               std::cos(0.7));
    CHECK_THAT(e1 / e2, WithinRel(4.0, 0.01));
    CHECK_THROWS_AS(finite_difference_gradient(quad, p, 0.0), ArgumentError);
}

TEST_CASE("seeded parameter draws", "[gradients]") {
    const CircuitSpec spec{4, 3, Topology::AllToAll};
    const auto a = draw_params(spec, 5, 0);
    CHECK(a.size() == 24);
    CHECK(a == draw_params(spec, 5, 0));
    CHECK(a != draw_params(spec, 5, 1));
    CHECK(a != draw_params(spec, 6, 0));
    // draws are keyed by circuit size, not topology
    CHECK(a == draw_params({4, 3, Topology::NearestNeighbor}, 5, 0));
    for (double x : a) {
        CHECK(x >= 0.0);
        CHECK(x < 2 * std::numbers::pi);
    }
}

TEST_CASE("variance report", "[gradients]") {
    const CircuitSpec spec{4, 2, Topology::AllToAll};
    const auto disc = Discretization::periodic_unit(4);
    const auto fixed = draw_params(spec, 1, 0);
    const auto degenerate = gradient_variance(
        LossConfig::local(), spec, disc, 5,
        [&](std::size_t) { return fixed; }, 0);
    for (double v : degenerate.per_param_variance) {
        CHECK(v == 0.0);
    }
    CHECK(degenerate.mean_variance == 0.0);

    const auto r = gradient_variance(LossConfig::global(), spec, disc, 12, 3);
    CHECK(r.n_samples == 12);
    CHECK(r.seed == 3);
    CHECK(r.per_param_variance.size() == 16);
    double mean = 0.0;
    for (double v : r.per_param_variance) {
        CHECK(v >= 0.0);
        mean += v;
    }
    CHECK_THAT(r.mean_variance, WithinAbs(mean / 16.0, 1e-12));
    CHECK(r.stats.circuits == 12 * 2 * 16);
    CHECK(r.stats.max_norm_deviation < 1e-10);

    CHECK_THROWS_AS(gradient_variance(LossConfig::global(), spec, disc, 1, 3),
                    ArgumentError);
}

TEST_CASE("unbiased sample variance", "[gradients]") {
    const std::vector<GradientVector> g{{1.0, 0.0}, {3.0, 0.0}, {5.0, 3.0}};
    const auto r = summarize_gradients(g, 0);
    CHECK_THAT(r.per_param_variance[0], WithinAbs(4.0, 1e-15));
    CHECK_THAT(r.per_param_variance[1], WithinAbs(3.0, 1e-15));
    CHECK_THAT(r.mean_variance, WithinAbs(3.5, 1e-15));
}

TEST_CASE("variance estimate is deterministic across thread counts",
          "[gradients][property]") {
    const CircuitSpec spec{5, 2, Topology::NearestNeighbor};
    const auto disc = Discretization::periodic_unit(5);
    const auto cfg = LossConfig::pde_penalty(LossKind::PdeStructured, 5);
    const auto serial = gradient_variance(cfg, spec, disc, 9, 77, 1);
    const auto threaded = gradient_variance(cfg, spec, disc, 9, 77, 4);
    REQUIRE(serial.per_param_variance.size() == threaded.per_param_variance.size());
    CHECK(std::memcmp(serial.per_param_variance.data(),
                      threaded.per_param_variance.data(),
                      serial.per_param_variance.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(&serial.mean_variance, &threaded.mean_variance,
                      sizeof(double)) == 0);
}

TEST_CASE("variance estimate converges with K", "[gradients][property]") {
    const CircuitSpec spec{4, 2, Topology::AllToAll};
    const auto disc = Discretization::periodic_unit(4);
    const auto cfg = LossConfig::local();
    std::vector<GradientVector> small;
    for (std::size_t i = 0; i < 25; ++i) {
        small.push_back(loss_gradient(cfg, spec, draw_params(spec, 31, i), disc));
    }
    const double v25 = summarize_gradients(small, 31).mean_variance;
    const double se25 = jackknife_stderr(small);
    const double v400 = gradient_variance(cfg, spec, disc, 400, 31).mean_variance;
    CHECK(std::abs(v400 - v25) <= 3.0 * se25);
}

TEST_CASE("global cost variance at n=4, L=3 lies in the reference band",
          "[gradients]") {
    const CircuitSpec spec{4, 3, Topology::AllToAll};
    const auto r = gradient_variance(LossConfig::global(), spec,
                                     Discretization::periodic_unit(4), 25, 1);
    // reference 3.17e-2, +-50%
    CHECK(r.mean_variance > 0.5 * 3.17e-2);
    CHECK(r.mean_variance < 1.5 * 3.17e-2);
}
