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

#include "bellherald/lindblad.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "bellherald/errors.hpp"

namespace bellherald {

namespace {

using SuperOp = Eigen::Matrix<cplx, 16, 16>;

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

CMat4 rk4_step(const Liouvillian& liou, const CMat4& rho, double dt) {
    const CMat4 k1 = liou.apply(rho);
    const CMat4 k2 = liou.apply(rho + (0.5 * dt) * k1);
    const CMat4 k3 = liou.apply(rho + (0.5 * dt) * k2);
    const CMat4 k4 = liou.apply(rho + dt * k3);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advance by `duration` with equal sub-steps no longer than h_max.
CMat4 propagate(const Liouvillian& liou, CMat4 rho, double duration, double h_max) {
    if (duration <= 0.0) return rho;
    const auto n = static_cast<long>(std::ceil(duration / h_max - 1e-9));
    const double h = duration / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        rho = rk4_step(liou, rho, h);
        if ((i + 1) % 1000 == 0) rho = hermitian_part(rho);
    }
    return rho;
}

SuperOp superoperator(const ModelOperators& ops) {
    const Liouvillian liou(ops);
    SuperOp l;
    for (std::size_t j = 0; j < 16; ++j) {
        CMat4 e;
        e.a[j] = 1.0;
        const CMat4 col = liou.apply(e);
        for (std::size_t i = 0; i < 16; ++i) l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col.a[i];
    }
    return l;
}

int null_dimension(const SuperOp& l) {
    Eigen::JacobiSVD<SuperOp> svd(l);
    const auto& s = svd.singularValues();
    const double tol = 1e-9 * std::max(s(0), 1e-300);
    int dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) <= tol) ++dim;
    return dim;
}

}  // namespace

DensityOp DensityOp::from_matrix(const CMat4& m) {
    if (const double err = hermiticity_error(m); !(err <= kHermiticityTol))
        throw PreconditionError("density operator not Hermitian (error " + num(err) + ")");
    if (const double tr = std::abs(trace(m) - 1.0); !(tr <= kTraceTol))
        throw PreconditionError("density operator trace deviates from 1 by " + num(tr));
    const CMat4 h = hermitian_part(m);
    if (const double lo = eig_hermitian(h)[0]; lo < -kNegativityTol)
        throw PreconditionError("density operator has negative eigenvalue " + num(lo));
    return DensityOp(h);
}

DensityOp DensityOp::pure(const CVec4& psi) { return DensityOp(outer(normalized(psi), normalized(psi))); }

DensityOp DensityOp::maximally_mixed() { return DensityOp(CMat4::diagonal({0.25, 0.25, 0.25, 0.25})); }

double DensityOp::min_eigenvalue() const { return eig_hermitian(mat_)[0]; }

Liouvillian::Liouvillian(const ModelOperators& ops) {
    const DerivedRates& r = ops.rates;
    lower_ = {ops.sigma_minus_1, ops.sigma_minus_2};
    raise_ = {ops.sigma_plus_1, ops.sigma_plus_2};
    gamma_ = {{{r.gamma, r.gamma12}, {r.gamma12, r.gamma}}};

    const CMat4 h = ops.h_drive + ops.h_exchange;
    CMat4 decay;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) decay += gamma_[i][j] * (raise_[i] * lower_[j]);
    k_ = cplx(0.0, -1.0) * h - 0.5 * decay;
}

CMat4 Liouvillian::apply(const CMat4& rho) const {
    CMat4 out = k_ * rho + rho * adjoint(k_);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (gamma_[i][j] != 0.0) out += gamma_[i][j] * (lower_[i] * rho * raise_[j]);
    return out;
}

CMat4 liouvillian_apply(const ModelOperators& ops, const CMat4& rho) { return Liouvillian(ops).apply(rho); }

CMat4 liouvillian_apply(const ModelOperators& ops, const DensityOp& rho) { return liouvillian_apply(ops, rho.mat()); }

CMat4 liouvillian_apply_jump_form(const ModelOperators& ops, const CMat4& rho) {
    const cplx minus_i(0.0, -1.0);
    CMat4 out = minus_i * (ops.h_jump_form * rho - rho * ops.h_jump_form);
    for (const CMat4& j : {ops.jump_left, ops.jump_right.full()}) {
        const CMat4 jd = adjoint(j);
        const CMat4 jdj = jd * j;
        out += j * rho * jd - 0.5 * (jdj * rho + rho * jdj);
    }
    return out;
}

double dt_max(const ModelParams& params) {
    const double gamma = derive_rates(params).gamma;
    const double rabi = 2.0 * params.g * params.alpha_mag;
    double bound = 0.01 / gamma;
    if (rabi > 0.0) bound = std::min(bound, 0.01 / rabi);
    return bound;
}

MeSolution integrate_me(const ModelOperators& ops, const DensityOp& rho0, double t_end, double dt,
                        std::size_t sample_stride) {
    if (!(dt > 0.0) || !(t_end >= 0.0) || sample_stride == 0)
        throw PreconditionError("integrate_me: need dt > 0, t_end >= 0, sample_stride >= 1");
    const double bound = dt_max(ops.params);
    if (dt > bound * (1.0 + 1e-12))
        throw GuardError("integrate_me: dt = " + num(dt) + " exceeds the stability bound dt_max = min(0.01/(2g|alpha|), 0.01/Gamma) = " +
                         num(bound));
    const long n_steps = std::lround(t_end / dt);
    if (std::abs(static_cast<double>(n_steps) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
        throw PreconditionError("integrate_me: t_end must be an integer multiple of dt");

    const Liouvillian liou(ops);
    MeSolution out;
    CMat4 rho = rho0.mat();
    out.t.push_back(0.0);
    out.states.push_back(rho0);

    for (long step = 1; step <= n_steps; ++step) {
        rho = rk4_step(liou, rho, dt);
        if (step % 1000 == 0) {
            if (const double err = hermiticity_error(rho); err > DensityOp::kHermiticityTol)
                throw NumericalError("integrate_me: Hermiticity drift " + num(err) + " at t = " + num(step * dt));
            rho = hermitian_part(rho);
        }
        if (step % static_cast<long>(sample_stride) == 0 || step == n_steps) {
            try {
                out.states.push_back(DensityOp::from_matrix(rho));
            } catch (const PreconditionError& e) {
                throw NumericalError(std::string("integrate_me: state left the physical set at t = ") +
                                     num(step * dt) + ": " + e.what());
            }
            out.t.push_back(static_cast<double>(step) * dt);
        }
    }
    if (const double drift = std::abs(trace(rho) - 1.0); drift > 1e-8)
        throw NumericalError("integrate_me: trace drift " + num(drift));
    return out;
}

int liouvillian_null_dimension(const ModelOperators& ops) { return null_dimension(superoperator(ops)); }

DensityOp steady_state(const ModelOperators& ops) {
    SuperOp l = superoperator(ops);
    if (const int dim = null_dimension(l); dim != 1)
        throw NumericalError("steady_state: Liouvillian null space has dimension " + std::to_string(dim) +
                             " (expected 1)");

    // Replace one equation by the trace constraint.
    Eigen::Matrix<cplx, 16, 1> rhs = Eigen::Matrix<cplx, 16, 1>::Zero();
    l.row(0).setZero();
    for (int k = 0; k < 4; ++k) l(0, 5 * k) = 1.0;
    rhs(0) = 1.0;
    const Eigen::Matrix<cplx, 16, 1> x = l.fullPivLu().solve(rhs);

    CMat4 rho;
    for (std::size_t i = 0; i < 16; ++i) rho.a[i] = x(static_cast<Eigen::Index>(i));
    rho = hermitian_part(rho);
    rho = (1.0 / trace(rho).real()) * rho;

    const double residual = max_abs(liouvillian_apply(ops, rho));
    if (residual > 1e-10 * ops.rates.gamma)
        throw NumericalError("steady_state: residual |L(rho)| = " + num(residual) + " exceeds 1e-10 Gamma");
    try {
        return DensityOp::from_matrix(rho);
    } catch (const PreconditionError& e) {
        throw NumericalError(std::string("steady_state: solution is not a density operator: ") + e.what());
    }
}

G2Curve g2_left(const ModelOperators& ops, std::span<const double> tau_grid) {
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0) || (i > 0 && tau_grid[i] < tau_grid[i - 1]))
            throw PreconditionError("g2_left: tau grid must be non-negative and non-decreasing");
    }
    const DensityOp rho_ss = steady_state(ops);
    const CMat4& j = ops.jump_left;
    const CMat4 jd = adjoint(j);
    const CMat4 n_op = jd * j;
    const double flux = trace(n_op * rho_ss.mat()).real();
    if (!(flux > 1e-12 * ops.rates.gamma))
        throw NumericalError("g2_left: steady-state reflected flux vanishes (" + num(flux) + ")");

    // Conditional state after a reflected-photon detection.
    CMat4 rho_c = j * rho_ss.mat() * jd;
    rho_c = (1.0 / trace(rho_c).real()) * rho_c;
    const double g2_zero = trace(jd * jd * j * j * rho_ss.mat()).real() / (flux * flux);

    const Liouvillian liou(ops);
    const double h_max = dt_max(ops.params);
    G2Curve out;
    double t_prev = 0.0;
    for (double tau : tau_grid) {
        rho_c = propagate(liou, rho_c, tau - t_prev, h_max);
        t_prev = tau;
        out.tau.push_back(tau);
        out.values.push_back(tau == 0.0 ? g2_zero : trace(n_op * rho_c).real() / flux);
    }
    return out;
}

}  // namespace bellherald
