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

#include "bellherald/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bellherald/errors.hpp"

namespace bellherald {

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// One classical RK4 step of d/dt x = generator x, written as a matrix:
// 1 + A + A^2/2 + A^3/6 + A^4/24 with A = generator * dt.
CMat4 rk4_propagator(const CMat4& generator, double dt) {
    const CMat4 a = dt * generator;
    CMat4 term = CMat4::identity();
    CMat4 sum = term;
    for (int k = 1; k <= 4; ++k) {
        term = (1.0 / k) * (term * a);
        sum += term;
    }
    return sum;
}

long checked_steps(const RunOptions& options) {
    if (!(options.dt > 0.0) || !(options.t_end >= 0.0) || options.sample_stride == 0)
        throw PreconditionError("trajectory run: need dt > 0, t_end >= 0, sample_stride >= 1");
    const long n = std::lround(options.t_end / options.dt);
    if (std::abs(static_cast<double>(n) * options.dt - options.t_end) > 1e-9 * std::max(1.0, options.t_end))
        throw PreconditionError("trajectory run: t_end must be an integer multiple of dt");
    return n;
}

void check_strong_drive(const ModelOperators& ops, double dt, const DiffusiveGuards& guards) {
    const double alpha = ops.params.alpha_mag;
    if (guards.min_alpha > 0.0 && alpha < guards.min_alpha)
        throw GuardError("strong-drive engine requires |alpha| >= " + num(guards.min_alpha) + " (got " + num(alpha) +
                         ")");
    if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
    const double bound = dt_max(ops.params);
    if (dt > bound * (1.0 + 1e-12))
        throw GuardError("dt = " + num(dt) + " does not resolve the Rabi frequency; need dt <= " + num(bound));
}

// Accumulates per-sample counters between samples.
struct SampleAccumulator {
    int left = 0;
    int right = 0;
    double dxi = 0.0;

    void take(TrajectorySample& s) {
        s.jumps_left = left;
        s.jumps_right = right;
        s.dxi = dxi;
        *this = {};
    }
};

JumpEvent make_event(double t, Channel channel, double pre_plus_i, const CVec4& post) {
    return {t, channel, pre_plus_i, bell_fidelity(post, bell::plus_i()), bell_fidelity(post, bell::gg()),
            entropy(post)};
}

JumpEvent make_event(double t, Channel channel, double pre_plus_i, const CMat4& post) {
    return {t, channel, pre_plus_i, bell_fidelity(post, bell::plus_i()), bell_fidelity(post, bell::gg()), eof(post)};
}

template <class Stepper>
TrajectoryRecord run_sse(Engine engine, const Stepper& stepper, const CVec4& psi0, const RunOptions& options,
                         std::uint64_t seed, std::uint64_t stream) {
    const long n_steps = checked_steps(options);
    StreamRng rng(seed, stream);
    TrajectoryRecord rec;
    rec.engine = engine;
    rec.seed = seed;
    rec.stream = stream;
    rec.dt = options.dt;

    CVec4 psi = normalized(psi0);
    SampleAccumulator acc;
    auto push = [&](double t, double norm_value) {
        TrajectorySample s{t, norm_value, populations(psi), entropy(psi), 0, 0, 0.0};
        acc.take(s);
        rec.samples.push_back(s);
        if (options.record_states) rec.psi.push_back(psi);
    };
    push(0.0, 1.0);

    const long stride = static_cast<long>(options.sample_stride);
    for (long step = 1; step <= n_steps; ++step) {
        const double pre_plus_i = bell_fidelity(psi, bell::plus_i());
        const SseStep info = stepper.step(psi, rng);
        const double t = static_cast<double>(step) * options.dt;
        if (info.left) {
            rec.jumps.push_back(make_event(t, Channel::left, pre_plus_i, psi));
            ++acc.left;
        }
        if (info.right) {
            rec.jumps.push_back(make_event(t, Channel::right, pre_plus_i, psi));
            ++acc.right;
        }
        acc.dxi += info.dxi;
        if (options.record_noise && engine != Engine::jump) rec.noise.push_back(info.dxi);
        if (step % stride == 0 || step == n_steps) push(t, info.norm);
    }
    return rec;
}

}  // namespace

std::string_view to_string(Engine engine) {
    switch (engine) {
        case Engine::jump:
            return "jump";
        case Engine::diffusive:
            return "diffusive";
        case Engine::sme:
            return "sme";
    }
    return "unknown";
}

std::vector<double> TrajectoryRecord::t_grid() const {
    std::vector<double> t;
    t.reserve(samples.size());
    for (const auto& s : samples) t.push_back(s.t);
    return t;
}

std::size_t TrajectoryRecord::jump_count(Channel channel) const {
    return static_cast<std::size_t>(
        std::count_if(jumps.begin(), jumps.end(), [&](const JumpEvent& e) { return e.channel == channel; }));
}

// Relative to Gamma; below this the jump operator annihilates the state up to roundoff.
constexpr double kZeroFlux = 1e-20;

CVec4 apply_left_jump(const ModelOperators& ops, const CVec4& psi) {
    const CVec4 out = ops.jump_left * psi;
    if (!(norm_sq(out) > kZeroFlux * ops.rates.gamma * norm_sq(psi)))
        throw NumericalError("left jump from a state with zero reflected flux");
    return normalized(out);
}

CVec4 apply_right_jump(const ModelOperators& ops, const CVec4& psi) {
    return normalized(ops.jump_right.full() * psi);
}

CMat4 apply_left_jump(const ModelOperators& ops, const CMat4& rho) {
    const CMat4 out = ops.jump_left * rho * adjoint(ops.jump_left);
    const double tr = trace(out).real();
    if (!(tr > kZeroFlux * ops.rates.gamma * trace(rho).real()))
        throw NumericalError("left jump from a state with zero reflected flux");
    return hermitian_part((1.0 / tr) * out);
}

// ---------------------------------------------------------------- jump SSE

JumpSseStepper::JumpSseStepper(const ModelOperators& ops, double dt)
    : dt_(dt), jump_left_(ops.jump_left), jump_right_(ops.jump_right.full()) {
    if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
    no_jump_ = rk4_propagator(cplx(0.0, -1.0) * ops.h_eff, dt);
}

SseStep JumpSseStepper::step(CVec4& psi, StreamRng& rng) const {
    const CVec4 jl = jump_left_ * psi;
    const CVec4 jr = jump_right_ * psi;
    const double rate_l = norm_sq(jl);
    const double rate_r = norm_sq(jr);
    const double p_max = dt_ * std::max(rate_l, rate_r);
    if (p_max > kMaxJumpProbability)
        throw GuardError("jump SSE: per-step jump probability " + num(p_max) + " exceeds " +
                         num(kMaxJumpProbability) + "; need dt <= " +
                         num(kMaxJumpProbability / std::max(rate_l, rate_r)));

    const double u_left = rng.uniform();
    const double u_right = rng.uniform();
    SseStep out;
    out.left = u_left < dt_ * rate_l;
    out.right = u_right < dt_ * rate_r;
    if (out.left) {
        out.norm = std::sqrt(rate_l);
        psi = (1.0 / out.norm) * jl;
    }
    if (out.right) {
        const CVec4 j = jump_right_ * psi;
        out.norm = norm(j);
        psi = (1.0 / out.norm) * j;
    }
    if (!out.left && !out.right) {
        const CVec4 next = no_jump_ * psi;
        out.norm = norm(next);
        psi = (1.0 / out.norm) * next;
    }
    return out;
}

// ---------------------------------------------------------------- diffusive SSE

DiffusiveSseStepper::DiffusiveSseStepper(const ModelOperators& ops, double dt, const DiffusiveGuards& guards)
    : dt_(dt), sqrt_dt_(std::sqrt(dt)), left_jumps_(guards.left_jumps), jump_left_(ops.jump_left) {
    check_strong_drive(ops, dt, guards);
    const double g = ops.params.g;
    const cplx phase = std::polar(1.0, -ops.params.theta);
    record_ = (cplx(0.0, -1.0) * phase * std::sqrt(2.0 * std::numbers::pi) * g) * ops.c_minus;
    const CMat4 generator = cplx(0.0, -1.0) * (ops.h_drive + ops.h_exchange) -
                            0.5 * (adjoint(record_) * record_ + adjoint(jump_left_) * jump_left_);
    drift_ = rk4_propagator(generator, dt);
}

SseStep DiffusiveSseStepper::step(CVec4& psi, StreamRng& rng) const {
    SseStep out;
    out.dxi = rng.normal() * sqrt_dt_;
    const double u = rng.uniform();
    const CVec4 jl = jump_left_ * psi;
    const double p_left = dt_ * norm_sq(jl);
    if (left_jumps_ && u < p_left) {
        out.left = true;
        out.norm = norm(jl);
        psi = (1.0 / out.norm) * jl;
        return out;
    }
    // Measured record dy = <L + L^dag> dt + d xi drives the L term.
    const CVec4 lpsi = record_ * psi;
    const double x = 2.0 * inner(psi, lpsi).real();
    const CVec4 next = drift_ * psi + (x * dt_ + out.dxi) * lpsi;
    out.norm = norm(next);
    psi = (1.0 / out.norm) * next;
    return out;
}

void DiffusiveSseStepper::drift_step(CVec4& psi) const {
    const CVec4 lpsi = record_ * psi;
    const double x = 2.0 * inner(psi, lpsi).real();
    psi = normalized(drift_ * psi + (x * dt_) * lpsi);
}

// ---------------------------------------------------------------- SME

SmeStepper::SmeStepper(const ModelOperators& ops, double dt, double eta_l, double eta_r,
                       const DiffusiveGuards& guards)
    : base_(ops, dt, guards), eta_l_(eta_l), eta_r_(eta_r) {
    if (!(eta_l >= 0.0 && eta_l <= 1.0) || !(eta_r >= 0.0 && eta_r <= 1.0))
        throw PreconditionError("SME: detection efficiencies must lie in [0, 1]");
    has_feed_ = eta_l < 1.0 || eta_r < 1.0;
    if (!has_feed_) return;

    const CMat4& jl = base_.jump_left_;
    const CMat4& l = base_.record_;
    const CMat4 k = cplx(0.0, -1.0) * (ops.h_drive + ops.h_exchange) -
                    0.5 * (adjoint(l) * l + adjoint(jl) * jl);
    const auto generator = [&](const CMat4& x) {
        CMat4 out = k * x + x * adjoint(k);
        out += (1.0 - eta_l) * (jl * x * adjoint(jl));
        out += (1.0 - eta_r) * (l * x * adjoint(l));
        return out;
    };
    const CMat4& p = base_.drift_;
    for (std::size_t idx = 0; idx < 16; ++idx) {
        CMat4 term;
        term.a[idx] = 1.0;
        CMat4 sum = term;
        for (int order = 1; order <= 4; ++order) {
            term = (dt / order) * generator(term);
            sum += term;
        }
        CMat4 e;
        e.a[idx] = 1.0;
        sum += -1.0 * (p * e * adjoint(p));
        feed_[idx] = sum;
    }
}

SmeStep SmeStepper::step(CMat4& rho, StreamRng& rng) const {
    const double dt = base_.dt_;
    SmeStep out;
    out.dxi = rng.normal() * base_.sqrt_dt_;
    const double u = rng.uniform();

    const CMat4& jl = base_.jump_left_;
    const CMat4 jl_rho_jld = jl * rho * adjoint(jl);
    const double flux = trace(jl_rho_jld).real();
    if (base_.left_jumps_ && u < eta_l_ * dt * flux) {
        out.left = true;
        out.trace = flux;
        rho = hermitian_part((1.0 / flux) * jl_rho_jld);
        return out;
    }

    const CMat4& l = base_.record_;
    const double x = 2.0 * trace(l * rho).real();
    const double sqrt_eta_r = std::sqrt(eta_r_);
    const double dy = out.dxi + sqrt_eta_r * x * dt;
    const CMat4 m = base_.drift_ + (sqrt_eta_r * dy) * l;
    CMat4 next = m * rho * adjoint(m);
    if (has_feed_)
        for (std::size_t idx = 0; idx < 16; ++idx) next += rho.a[idx] * feed_[idx];

    out.trace = trace(next).real();
    if (!(out.trace >= 1e-14))
        throw NumericalError("SME: unnormalized trace collapsed to " + num(out.trace) +
                             "; reduce dt or check the drive guard");
    rho = hermitian_part((1.0 / out.trace) * next);
    return out;
}

// ---------------------------------------------------------------- free-function steps

std::pair<CVec4, SseStep> step_jump_sse(const ModelOperators& ops, const CVec4& psi, double dt, StreamRng& rng) {
    CVec4 out = psi;
    const SseStep info = JumpSseStepper(ops, dt).step(out, rng);
    return {out, info};
}

std::pair<CVec4, SseStep> step_diffusive_sse(const ModelOperators& ops, const CVec4& psi, double dt, StreamRng& rng,
                                             const DiffusiveGuards& guards) {
    CVec4 out = psi;
    const SseStep info = DiffusiveSseStepper(ops, dt, guards).step(out, rng);
    return {out, info};
}

std::pair<CMat4, SmeStep> step_sme(const ModelOperators& ops, const CMat4& rho, double dt, StreamRng& rng,
                                   double eta_l, double eta_r, const DiffusiveGuards& guards) {
    CMat4 out = rho;
    const SmeStep info = SmeStepper(ops, dt, eta_l, eta_r, guards).step(out, rng);
    return {out, info};
}

// ---------------------------------------------------------------- runs

TrajectoryRecord run_jump_sse(const ModelOperators& ops, const CVec4& psi0, const RunOptions& options,
                              std::uint64_t seed, std::uint64_t stream) {
    checked_steps(options);
    return run_sse(Engine::jump, JumpSseStepper(ops, options.dt), psi0, options, seed, stream);
}

TrajectoryRecord run_diffusive_sse(const ModelOperators& ops, const CVec4& psi0, const RunOptions& options,
                                   std::uint64_t seed, std::uint64_t stream, const DiffusiveGuards& guards) {
    checked_steps(options);
    return run_sse(Engine::diffusive, DiffusiveSseStepper(ops, options.dt, guards), psi0, options, seed, stream);
}

TrajectoryRecord run_sme(const ModelOperators& ops, const DensityOp& rho0, const RunOptions& options,
                         std::uint64_t seed, std::uint64_t stream, double eta_l, double eta_r,
                         const DiffusiveGuards& guards) {
    const long n_steps = checked_steps(options);
    const SmeStepper stepper(ops, options.dt, eta_l, eta_r, guards);
    StreamRng rng(seed, stream);

    TrajectoryRecord rec;
    rec.engine = Engine::sme;
    rec.seed = seed;
    rec.stream = stream;
    rec.dt = options.dt;

    CMat4 rho = rho0.mat();
    SampleAccumulator acc;
    auto push = [&](double t, double norm_value) {
        TrajectorySample s{t, norm_value, populations(rho), eof(rho), 0, 0, 0.0};
        acc.take(s);
        rec.samples.push_back(s);
        if (options.record_states) rec.rho.push_back(rho);
    };
    push(0.0, 1.0);

    const long stride = static_cast<long>(options.sample_stride);
    for (long step = 1; step <= n_steps; ++step) {
        const double pre_plus_i = bell_fidelity(rho, bell::plus_i());
        const SmeStep info = stepper.step(rho, rng);
        const double t = static_cast<double>(step) * options.dt;
        if (info.left) {
            rec.jumps.push_back(make_event(t, Channel::left, pre_plus_i, rho));
            ++acc.left;
        }
        acc.dxi += info.dxi;
        if (options.record_noise) rec.noise.push_back(info.dxi);
        if (step % stride == 0 || step == n_steps) push(t, info.trace);
    }
    return rec;
}

// ---------------------------------------------------------------- heralding

std::vector<double> HeraldReport::closed_durations() const {
    std::vector<double> out;
    for (const auto& w : windows)
        if (w.closed) out.push_back(w.t_close - w.t_open);
    return out;
}

double HeraldReport::exposure() const {
    double total = 0.0;
    for (const auto& w : windows) total += (w.closed ? w.t_close : t_end) - w.t_open;
    return total;
}

HeraldReport analyze_heralding(const TrajectoryRecord& record, double fidelity_threshold) {
    HeraldReport rep;
    rep.t_end = record.samples.empty() ? 0.0 : record.samples.back().t;
    int parity = 0;
    bool open = false;
    for (const JumpEvent& e : record.jumps) {
        if (e.channel != Channel::left) continue;
        const bool to_ground = e.post_fidelity_gg >= e.post_fidelity_plus_i;
        ++parity;
        if (parity % 2 == 1) {
            ++rep.odd_jumps;
            rep.min_odd_fidelity = std::min(rep.min_odd_fidelity, e.post_fidelity_plus_i);
            if (e.post_fidelity_plus_i < fidelity_threshold) ++rep.odd_failures;
            rep.odd_entanglement.push_back(e.post_entanglement);
        } else {
            ++rep.even_jumps;
            rep.min_even_fidelity = std::min(rep.min_even_fidelity, e.post_fidelity_gg);
            if (e.post_fidelity_gg < fidelity_threshold) ++rep.even_failures;
        }

        if (to_ground) {
            if (open) {
                rep.windows.back().t_close = e.time;
                rep.windows.back().closed = true;
                open = false;
            }
            parity = 0;
        } else {
            // A second herald ends the open window and starts a new one.
            if (open) {
                rep.windows.back().t_close = e.time;
                rep.windows.back().closed = true;
            }
            rep.windows.push_back({e.time, 0.0, false});
            open = true;
        }
    }
    return rep;
}

// ---------------------------------------------------------------- exchange leakage

LeakageReport hqq_suppression_check(const ModelParams& base, std::span<const double> alphas,
                                    const LeakageOptions& options) {
    if (std::abs(base.kl - std::numbers::pi / 2) > 1e-12)
        throw PreconditionError("hqq_suppression_check: requires kL = pi/2");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < 20.0) throw PreconditionError("hqq_suppression_check: every alpha must be >= 20");
        if (i > 0 && !(alphas[i] > alphas[i - 1]))
            throw PreconditionError("hqq_suppression_check: alpha list must be increasing");
    }

    LeakageReport rep;
    for (double alpha : alphas) {
        ModelParams p = base;
        p.alpha_mag = alpha;
        const ModelOperators ops = build_operators(p, {options.include_exchange});
        const double duration = options.window / ops.rates.gamma;
        const double h_max = std::min(options.dt, dt_max(p));
        const auto n = static_cast<long>(std::ceil(duration / h_max - 1e-9));
        const DiffusiveSseStepper stepper(ops, duration / static_cast<double>(n), {20.0, false});

        CVec4 psi = bell::plus_i();
        double worst = 0.0;
        for (long k = 0; k < n; ++k) {
            stepper.drift_step(psi);
            worst = std::max(worst, bell_fidelity(psi, bell::minus_i()));
        }
        if (!rep.rows.empty() && worst > rep.rows.back().max_minus_i) rep.non_increasing = false;
        rep.rows.push_back({alpha, worst});
    }
    return rep;
}

double exchange_transfer(const ModelParams& params, double duration, std::size_t steps) {
    if (steps == 0) throw PreconditionError("exchange_transfer: steps must be >= 1");
    ModelParams p = params;
    p.alpha_mag = 0.0;
    const ModelOperators ops = build_operators(p);
    const CMat4 step = rk4_propagator(cplx(0.0, -1.0) * ops.h_exchange, duration / static_cast<double>(steps));
    CVec4 psi = bell::plus_i();
    for (std::size_t k = 0; k < steps; ++k) psi = step * psi;
    return bell_fidelity(psi, bell::minus_i());
}

}  // namespace bellherald
