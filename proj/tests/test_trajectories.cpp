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
#include "bellherald/trajectories.hpp"

using namespace bellherald;

namespace {

ModelParams params(double alpha) {
    ModelParams p;
    p.alpha_mag = alpha;
    return p;
}

RunOptions options(double t_end, double dt, std::size_t stride) {
    RunOptions o;
    o.t_end = t_end;
    o.dt = dt;
    o.sample_stride = stride;
    return o;
}

}  // namespace

TEST_CASE("forced left jumps climb down the |+i> ladder") {
    const auto ops = build_operators(ModelParams{});
    const CVec4 a = apply_left_jump(ops, bell::ee());
    CHECK(bell_fidelity(a, bell::plus_i()) == doctest::Approx(1.0).epsilon(1e-12));
    const CVec4 b = apply_left_jump(ops, bell::plus_i());
    CHECK(bell_fidelity(b, bell::gg()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(apply_left_jump(ops, bell::minus_i()), NumericalError);
}

TEST_CASE("forced left jump purifies a mixed state on |ee>, |-i>, |gg>") {
    const auto ops = build_operators(ModelParams{});
    const CMat4 rho = 0.3 * outer(bell::ee(), bell::ee()) + 0.5 * outer(bell::minus_i(), bell::minus_i()) +
                      0.2 * outer(bell::gg(), bell::gg());
    const CMat4 out = apply_left_jump(ops, rho);
    CHECK(max_abs(out - outer(bell::plus_i(), bell::plus_i())) < 1e-10);
}

TEST_CASE("jump SSE: ground state without drive never jumps") {
    const auto ops = build_operators(params(0.0));
    const auto rec = run_jump_sse(ops, bell::gg(), options(2.0, 1e-3, 100), 5);
    CHECK(rec.jumps.empty());
    CHECK(norm(rec.psi.back() - bell::gg()) < 1e-12);
}

TEST_CASE("jump SSE: two excitations give exactly two jumps") {
    const auto ops = build_operators(params(0.0));
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto rec = run_jump_sse(ops, bell::ee(), options(30.0, 1e-3, 1000), 9, s);
        CHECK(rec.jumps.size() == 2);
    }
}

TEST_CASE("jump SSE: step-size guard names the required dt") {
    const auto ops = build_operators(params(100.0));
    StreamRng rng(1, 0);
    CVec4 psi = bell::gg();
    const JumpSseStepper stepper(ops, 1e-3);
    try {
        stepper.step(psi, rng);
        FAIL("expected a guard error");
    } catch (const GuardError& e) {
        CHECK(std::string(e.what()).find("need dt <=") != std::string::npos);
    }
}

TEST_CASE("strong-drive engines reject weak drive and coarse steps") {
    CHECK_THROWS_AS(DiffusiveSseStepper(build_operators(params(5.0)), 1e-5), GuardError);
    CHECK_THROWS_AS(DiffusiveSseStepper(build_operators(params(100.0)), 1e-3), GuardError);
    CHECK_THROWS_AS(SmeStepper(build_operators(params(5.0)), 1e-5, 1.0, 1.0), GuardError);
    DiffusiveGuards off;
    off.min_alpha = 0.0;
    CHECK_NOTHROW(DiffusiveSseStepper(build_operators(params(5.0)), 1e-4, off));
}

TEST_CASE("runs are deterministic per seed and stream") {
    const auto ops = build_operators(ModelParams{});
    const auto opt = options(5.0, 5e-5, 200);
    const auto a = run_diffusive_sse(ops, bell::gg(), opt, 77, 3);
    const auto b = run_diffusive_sse(ops, bell::gg(), opt, 77, 3);
    const auto c = run_diffusive_sse(ops, bell::gg(), opt, 77, 4);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t i = 0; i < a.jumps.size(); ++i) CHECK(a.jumps[i].time == b.jumps[i].time);
    CHECK(a.noise == b.noise);
    CHECK(a.noise != c.noise);
    CHECK(a.seed == 77);
    CHECK(a.stream == 3);
}

TEST_CASE("record bookkeeping") {
    const auto ops = build_operators(ModelParams{});
    const auto rec = run_diffusive_sse(ops, bell::gg(), options(20.0, 5e-5, 200), 1, 0);
    CHECK(rec.samples.size() == 2001);
    CHECK(rec.noise.size() == 400000);
    int left = 0;
    double xi = 0;
    for (const auto& s : rec.samples) left += s.jumps_left, xi += s.dxi;
    CHECK(static_cast<std::size_t>(left) == rec.jump_count(Channel::left));
    double total = 0, total_sq = 0;
    for (double x : rec.noise) total += x, total_sq += x * x;
    CHECK(std::abs(xi - total) < 1e-9);
    // Increments are N(0, dt).
    CHECK(std::abs(total) < 5 * std::sqrt(20.0));
    CHECK(std::abs(total_sq / 20.0 - 1.0) < 5 * std::sqrt(2.0 / 400000));
    for (std::size_t i = 1; i < rec.jumps.size(); ++i) CHECK(rec.jumps[i].time >= rec.jumps[i - 1].time);
    for (const auto& psi : rec.psi) CHECK(std::abs(norm(psi) - 1.0) < 1e-12);
}

TEST_CASE("heralds are exact without the exchange interaction") {
    BuildOptions off;
    off.include_exchange = false;
    const auto ops = build_operators(ModelParams{}, off);
    std::size_t windows = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto rec = run_diffusive_sse(ops, bell::gg(), options(20.0, 5e-5, 200), 2, s);
        const auto rep = analyze_heralding(rec);
        CHECK(rep.odd_failures == 0);
        CHECK(rep.even_failures == 0);
        CHECK(rep.min_odd_fidelity >= 1 - 1e-9);
        CHECK(rep.min_even_fidelity >= 1 - 1e-9);
        for (double s_ent : rep.odd_entanglement) CHECK(s_ent >= 1 - 1e-6);
        windows += rep.closed_durations().size();
        for (const auto& w : rep.windows) {
            if (!w.closed) continue;
            for (const auto& smp : rec.samples)
                if (smp.t > w.t_open && smp.t < w.t_close) CHECK(smp.pops.plus_i >= 1 - 1e-8);
        }
    }
    CHECK(windows > 0);
}

TEST_CASE("herald window bookkeeping") {
    TrajectoryRecord rec;
    rec.samples.resize(2);
    rec.samples.back().t = 10.0;
    auto jump = [](double t, double f_plus, double f_gg) {
        JumpEvent e;
        e.time = t;
        e.post_fidelity_plus_i = f_plus;
        e.post_fidelity_gg = f_gg;
        return e;
    };
    rec.jumps = {jump(1.0, 1.0, 0.0), jump(2.5, 0.0, 1.0), jump(4.0, 1.0, 0.0), jump(4.5, 0.9995, 0.0005),
                 jump(9.0, 1.0, 0.0)};
    const auto rep = analyze_heralding(rec);
    REQUIRE(rep.windows.size() == 4);
    CHECK(rep.closed_durations() == std::vector<double>{1.5, 0.5, 4.5});
    CHECK(rep.exposure() == doctest::Approx(1.5 + 0.5 + 4.5 + 1.0));
    CHECK(rep.odd_jumps == 3);
    CHECK(rep.even_jumps == 2);
    CHECK(rep.even_failures == 1);  // the jump at 4.5 should have landed on |gg>
}

TEST_CASE("|+i> is pinned by the no-click flow without exchange") {
    BuildOptions opt;
    opt.include_exchange = false;
    const auto ops = build_operators(ModelParams{}, opt);
    const DiffusiveSseStepper stepper(ops, 5e-5);
    CVec4 psi = bell::plus_i();
    for (int k = 0; k < 20000; ++k) stepper.drift_step(psi);
    CHECK(bell_fidelity(psi, bell::plus_i()) >= 1 - 1e-8);

    // Noise does not move it either.
    DiffusiveGuards no_jumps;
    no_jumps.left_jumps = false;
    const DiffusiveSseStepper noisy(ops, 5e-5, no_jumps);
    StreamRng rng(3, 0);
    psi = bell::plus_i();
    for (int k = 0; k < 20000; ++k) noisy.step(psi, rng);
    CHECK(bell_fidelity(psi, bell::plus_i()) >= 1 - 1e-8);
}

TEST_CASE("SME with perfect detectors reproduces the diffusive SSE") {
    const auto ops = build_operators(ModelParams{});
    const auto opt = options(20.0, 5e-5, 200);
    const auto sse = run_diffusive_sse(ops, bell::gg(), opt, 11, 0);
    const auto sme = run_sme(ops, DensityOp{}, opt, 11, 0, 1.0, 1.0);
    REQUIRE(sse.jumps.size() == sme.jumps.size());
    double worst = 0;
    for (std::size_t k = 0; k < sse.psi.size(); ++k)
        worst = std::max(worst, max_abs(sme.rho[k] - outer(sse.psi[k], sse.psi[k])));
    CHECK(worst < 1e-6);
}

TEST_CASE("SME without detection is the master equation") {
    const auto ops = build_operators(ModelParams{});
    const double dt = 5e-5;
    const auto me = integrate_me(ops, DensityOp{}, 2.0, dt, 2000);
    const auto sme = run_sme(ops, DensityOp{}, options(2.0, dt, 2000), 4, 0, 0.0, 0.0);
    CHECK(sme.jumps.empty());
    REQUIRE(sme.rho.size() == me.states.size());
    double worst = 0;
    for (std::size_t k = 0; k < sme.rho.size(); ++k) worst = std::max(worst, max_abs(me.states[k].mat() - sme.rho[k]));
    CHECK(worst < 1e-10);
}

TEST_CASE("SME states stay positive") {
    const auto ops = build_operators(ModelParams{});
    for (double eta : {0.3, 0.7, 0.95}) {
        const auto rec = run_sme(ops, DensityOp{}, options(5.0, 5e-5, 100), 8, 0, eta, eta);
        for (const auto& rho : rec.rho) REQUIRE(DensityOp::from_matrix(rho).min_eigenvalue() >= -1e-7);
    }
}

TEST_CASE("exchange transfer follows sin^2(2 pi g^2 t)") {
    const ModelParams p;
    for (double t : {0.001, 0.005, 0.01, 0.5}) {
        const double expected = std::pow(std::sin(2 * std::numbers::pi * p.g * p.g * t), 2);
        CHECK(std::abs(exchange_transfer(p, t, 1000) - expected) < 1e-6);
    }
}

TEST_CASE("exchange leakage is suppressed by strong drive") {
    const std::vector<double> alphas = {50.0, 100.0, 200.0};
    const auto rep = hqq_suppression_check(ModelParams{}, alphas);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.non_increasing);
    CHECK(rep.rows[1].max_minus_i <= rep.rows[0].max_minus_i);

    LeakageOptions off;
    off.include_exchange = false;
    for (const auto& row : hqq_suppression_check(ModelParams{}, alphas, off).rows) CHECK(row.max_minus_i <= 1e-8);

    const std::vector<double> bad = {100.0, 50.0};
    CHECK_THROWS_AS(hqq_suppression_check(ModelParams{}, bad), PreconditionError);
    ModelParams detuned;
    detuned.kl = 1.0;
    CHECK_THROWS_AS(hqq_suppression_check(detuned, alphas), PreconditionError);
}
