// Copyright 2026 The bellherald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bellherald/entangle.hpp"
#include "bellherald/errors.hpp"
#include "bellherald/lindblad.hpp"
#include "test_util.hpp"

using namespace bellherald;

namespace {

// Collective-decay generator written out from scratch.
CMat4 reference_generator(const ModelOperators& ops, const CMat4& rho) {
    const CMat4 h = ops.h_drive + ops.h_exchange;
    const cplx i(0, 1);
    CMat4 out = (-i) * (h * rho - rho * h);
    const CMat4 lo[2] = {ops.sigma_minus_1, ops.sigma_minus_2};
    const double rate[2][2] = {{ops.rates.gamma, ops.rates.gamma12}, {ops.rates.gamma12, ops.rates.gamma}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const CMat4 ud = adjoint(lo[b]) * lo[a];
            out += rate[a][b] * (lo[a] * rho * adjoint(lo[b]) - 0.5 * (ud * rho + rho * ud));
        }
    return out;
}

ModelParams params(double alpha, double kl = std::numbers::pi / 2) {
    ModelParams p;
    p.alpha_mag = alpha;
    p.kl = kl;
    return p;
}

}  // namespace

TEST_CASE("density operator invariants") {
    CMat4 m = CMat4::identity();
    CHECK_THROWS_AS(DensityOp::from_matrix(m), PreconditionError);  // trace 4
    m = CMat4::diagonal({1.1, -0.1, 0.0, 0.0});
    CHECK_THROWS_AS(DensityOp::from_matrix(m), PreconditionError);  // negative
    m = 0.25 * CMat4::identity();
    m(0, 1) = 0.01;
    CHECK_THROWS_AS(DensityOp::from_matrix(m), PreconditionError);  // non-Hermitian
    const DensityOp mixed = DensityOp::maximally_mixed();
    CHECK(mixed.min_eigenvalue() == doctest::Approx(0.25));
    const DensityOp ground;
    CHECK(std::abs(ground.mat()(3, 3) - cplx(1.0)) == 0.0);
}

TEST_CASE("collective and detector forms of the generator coincide") {
    std::mt19937_64 gen(21);
    for (double kl : {0.0, 0.4, std::numbers::pi / 2, 2.5}) {
        for (double alpha : {0.0, 1.5, 100.0}) {
            const auto ops = build_operators(params(alpha, kl));
            const Liouvillian liou(ops);
            for (int n = 0; n < 25; ++n) {
                const CMat4 rho = testutil::random_density(gen);
                const CMat4 ref = reference_generator(ops, rho);
                const double scale = std::max(1.0, max_abs(ref));
                CHECK(max_abs(liouvillian_apply(ops, rho) - ref) < 1e-12 * scale);
                CHECK(max_abs(liouvillian_apply_jump_form(ops, rho) - ref) < 1e-10 * scale);
                CHECK(max_abs(liou.apply(rho) - ref) < 1e-12 * scale);
                const CMat4 d = liouvillian_apply(ops, rho);
                CHECK(std::abs(trace(d)) < 1e-10 * scale);
                CHECK(hermiticity_error(d) < 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("generator is linear") {
    std::mt19937_64 gen(22);
    const auto ops = build_operators(params(100.0, 0.9));
    for (int n = 0; n < 100; ++n) {
        const CMat4 r1 = testutil::random_hermitian(gen), r2 = testutil::random_hermitian(gen);
        const double a = 0.3 + n * 0.01, b = -1.7;
        const CMat4 lhs = liouvillian_apply(ops, a * r1 + b * r2);
        const CMat4 rhs = a * liouvillian_apply(ops, r1) + b * liouvillian_apply(ops, r2);
        CHECK(max_abs(lhs - rhs) < 1e-12 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("integrated states stay positive") {
    std::mt19937_64 gen(23);
    const auto ops = build_operators(params(100.0));
    for (int n = 0; n < 50; ++n) {
        const auto sol = integrate_me(ops, DensityOp::pure(testutil::random_state(gen)), 1.0, 1.25e-4, 400);
        for (const auto& s : sol.states) REQUIRE(s.min_eigenvalue() >= -1e-7);
    }
}

TEST_CASE("undriven doubly excited state decays monotonically to the ground state") {
    const auto ops = build_operators(params(0.0));
    const auto sol = integrate_me(ops, DensityOp::pure(bell::ee()), 20.0, 1e-3, 100);
    for (std::size_t k = 1; k < sol.t.size(); ++k) {
        CHECK(sol.states[k].mat()(0, 0).real() <= sol.states[k - 1].mat()(0, 0).real() + 1e-15);
        CHECK(sol.states[k].mat()(3, 3).real() >= sol.states[k - 1].mat()(3, 3).real() - 1e-15);
    }
    CHECK(sol.states.back().mat()(3, 3).real() > 1 - 1e-6);
}

TEST_CASE("step-size limit") {
    CHECK(dt_max(params(100.0)) == doctest::Approx(0.01 / 200.0 * std::sqrt(4 * std::numbers::pi)));
    CHECK(dt_max(params(0.0)) == doctest::Approx(0.01));
}

TEST_CASE("integrate_me guards") {
    const auto ops = build_operators(params(100.0));
    CHECK_THROWS_AS(integrate_me(ops, DensityOp{}, 1.0, 1e-3), GuardError);
    CHECK_THROWS_AS(integrate_me(ops, DensityOp{}, 1.00001, 1e-4), PreconditionError);
}

TEST_CASE("total excitation of an undriven excited qubit decays as exp(-Gamma t)") {
    const auto ops = build_operators(params(0.0));
    const DensityOp rho0 = DensityOp::pure(bell::eg());
    const auto sol = integrate_me(ops, rho0, 5.0, 1e-3, 100);
    const CMat4 n = adjoint(ops.sigma_minus_1) * ops.sigma_minus_1 + adjoint(ops.sigma_minus_2) * ops.sigma_minus_2;
    REQUIRE(sol.t.size() == 51);
    for (std::size_t k = 0; k < sol.t.size(); ++k) {
        const double exc = trace(n * sol.states[k].mat()).real();
        CHECK(std::abs(exc - std::exp(-sol.t[k])) < 1e-6);
        CHECK(std::abs(trace(sol.states[k].mat()) - cplx(1.0)) < 1e-10);
    }
}

TEST_CASE("long evolution from the mixed state reaches the steady state") {
    const auto ops = build_operators(params(100.0));
    const DensityOp ss = steady_state(ops);
    const auto sol = integrate_me(ops, DensityOp::maximally_mixed(), 20.0, 1.25e-4, 160000);
    CHECK(max_abs(sol.states.back().mat() - ss.mat()) < 1e-5);
}

TEST_CASE("steady state at strong drive") {
    double previous = 1.0;
    for (double alpha : {25.0, 50.0, 100.0, 200.0}) {
        const auto ops = build_operators(params(alpha));
        CHECK(liouvillian_null_dimension(ops) == 1);
        const DensityOp ss = steady_state(ops);
        CHECK(max_abs(liouvillian_apply_jump_form(ops, ss.mat())) < 1e-9);
        if (alpha >= 100.0) {
            const auto pops = populations(ss);
            CHECK(std::abs(pops.ee - 0.25) < 1e-3);
            CHECK(std::abs(pops.plus_i - 0.25) < 1e-3);
            CHECK(std::abs(pops.minus_i - 0.25) < 1e-3);
            CHECK(std::abs(pops.gg - 0.25) < 1e-3);
        }
        CHECK(concurrence(ss) < 1e-9);
        const double dev = max_abs(ss.mat() - DensityOp::maximally_mixed().mat());
        CHECK(dev < previous);
        previous = dev;
    }
}

TEST_CASE("undriven steady state is the ground state") {
    const auto ops = build_operators(params(0.0));
    const DensityOp ss = steady_state(ops);
    CHECK(std::abs(ss.mat()(3, 3) - cplx(1.0)) < 1e-10);
}

TEST_CASE("a decoherence-free subspace makes the steady state non-unique") {
    const auto ops = build_operators(params(0.0, 0.0));  // Gamma12 = Gamma
    CHECK(liouvillian_null_dimension(ops) == 4);  // span{|gg>, singlet} is stationary
    CHECK_THROWS_AS(steady_state(ops), NumericalError);
}

TEST_CASE("g2 agrees with direct propagation of the conditioned state") {
    const auto ops = build_operators(params(5.0));
    const double dt = dt_max(ops.params);
    const double span = 200 * dt;
    const std::vector<double> tau = {0.0, span, 2 * span};
    const auto curve = g2_left(ops, tau);

    const DensityOp ss = steady_state(ops);
    const CMat4 n = adjoint(ops.jump_left) * ops.jump_left;
    const double flux = trace(n * ss.mat()).real();
    const CMat4 jrho = ops.jump_left * ss.mat() * adjoint(ops.jump_left);
    const CMat4 nn = adjoint(ops.jump_left) * n * ops.jump_left;
    CHECK(curve.values[0] == doctest::Approx(trace(nn * ss.mat()).real() / (flux * flux)).epsilon(1e-10));

    const DensityOp cond = DensityOp::from_matrix((1.0 / trace(jrho).real()) * jrho);
    const auto sol = integrate_me(ops, cond, 2 * span, dt, 200);
    REQUIRE(sol.t.size() == 3);
    for (int k = 1; k < 3; ++k) {
        const double expected = trace(n * sol.states[k].mat()).real() / flux;
        CHECK(std::abs(curve.values[k] - expected) < 1e-8);
    }
}

TEST_CASE("g2 at strong drive oscillates at the Rabi frequency and relaxes") {
    const auto ops = build_operators(params(100.0));
    std::vector<double> tau;
    for (int k = 0; k <= 1000; ++k) tau.push_back(k * 1e-3);
    const auto curve = g2_left(ops, tau);
    CHECK(std::abs(curve.values[0] - 1.0) < 2e-2);
    double peak = 0;
    for (double v : curve.values) peak = std::max(peak, v);
    CHECK(peak > 1.5);
    CHECK(peak <= 2.02);
}

TEST_CASE("g2 rejects vanishing flux and bad grids") {
    const auto dark = build_operators(params(0.0));
    const std::vector<double> tau = {0.0, 0.1};
    CHECK_THROWS_AS(g2_left(dark, tau), NumericalError);
    const auto ops = build_operators(params(5.0));
    const std::vector<double> bad = {0.1, 0.0};
    CHECK_THROWS_AS(g2_left(ops, bad), PreconditionError);
}
