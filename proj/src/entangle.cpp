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

#include "bellherald/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace bellherald {

namespace bell {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
CVec4 combo(std::size_t a, cplx ca, std::size_t b, cplx cb) {
    CVec4 out;
    out[a] = ca * kInvSqrt2;
    out[b] = cb * kInvSqrt2;
    return out;
}
constexpr std::size_t kEE = 0, kEG = 1, kGE = 2, kGG = 3;
const cplx I(0.0, 1.0);
}  // namespace

CVec4 ee() { return CVec4::basis(kEE); }
CVec4 eg() { return CVec4::basis(kEG); }
CVec4 ge() { return CVec4::basis(kGE); }
CVec4 gg() { return CVec4::basis(kGG); }
CVec4 phi_plus() { return combo(kGG, 1.0, kEE, 1.0); }
CVec4 phi_minus() { return combo(kGG, 1.0, kEE, -1.0); }
CVec4 psi_plus() { return combo(kGE, 1.0, kEG, 1.0); }
CVec4 psi_minus() { return combo(kGE, 1.0, kEG, -1.0); }
CVec4 plus_i() { return combo(kGE, 1.0, kEG, I); }
CVec4 minus_i() { return combo(kGE, 1.0, kEG, -I); }
CVec4 symmetric() { return combo(kEG, 1.0, kGE, 1.0); }
CVec4 antisymmetric() { return combo(kEG, 1.0, kGE, -1.0); }

}  // namespace bell

double binary_entropy(double p) {
    p = std::clamp(p, 0.0, 1.0);
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double entropy(const CVec4& psi) {
    const CVec4 u = normalized(psi);
    const CMat2 reduced = partial_trace(outer(u, u), 1);
    double s = 0.0;
    for (double lambda : eig_hermitian(reduced))
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    return std::clamp(s, 0.0, 1.0);
}

double concurrence(const CMat4& rho) {
    // sigma_y (x) sigma_y is real and anti-diagonal with signs (-1, 1, 1, -1).
    CMat4 flip;
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;
    const CMat4 rho_tilde = flip * conjugate(rho) * flip;
    const std::array<cplx, 4> ev = eig_general4(rho * rho_tilde);

    std::array<double, 4> lambda{};
    for (std::size_t i = 0; i < 4; ++i) lambda[i] = std::sqrt(std::max(ev[i].real(), 0.0));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double concurrence(const DensityOp& rho) { return concurrence(rho.mat()); }

double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double eof(const CMat4& rho) { return eof_from_concurrence(concurrence(rho)); }
double eof(const DensityOp& rho) { return eof(rho.mat()); }

LevelPopulations populations(const CVec4& psi) {
    return {std::norm(psi[0]), bell_fidelity(psi, bell::plus_i()), bell_fidelity(psi, bell::minus_i()),
            std::norm(psi[3])};
}

LevelPopulations populations(const CMat4& rho) {
    return {rho(0, 0).real(), bell_fidelity(rho, bell::plus_i()), bell_fidelity(rho, bell::minus_i()),
            rho(3, 3).real()};
}

LevelPopulations populations(const DensityOp& rho) { return populations(rho.mat()); }

double bell_fidelity(const CVec4& psi, const CVec4& target) { return std::norm(inner(target, psi)); }

double bell_fidelity(const CMat4& rho, const CVec4& target) { return expectation(rho, target).real(); }

double bell_fidelity(const DensityOp& rho, const CVec4& target) { return bell_fidelity(rho.mat(), target); }

}  // namespace bellherald
