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

#include "bellherald/model.hpp"

#include <cmath>
#include <string>

#include "bellherald/errors.hpp"

namespace bellherald {

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw PreconditionError(std::string("model parameter ") + field + ": " + what);
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(g) && g > 0.0, "g", "must be finite and > 0");
    require(std::isfinite(alpha_mag) && alpha_mag >= 0.0, "alpha", "must be finite and >= 0");
    require(std::isfinite(theta), "theta", "must be finite");
    require(std::isfinite(kl), "kl", "must be finite");
    require(eta_l >= 0.0 && eta_l <= 1.0, "eta_l", "must lie in [0, 1]");
    require(eta_r >= 0.0 && eta_r <= 1.0, "eta_r", "must lie in [0, 1]");
}

DerivedRates derive_rates(const ModelParams& params) {
    params.validate();
    const double g2 = params.g * params.g;
    return {4.0 * std::numbers::pi * g2, 4.0 * std::numbers::pi * g2 * std::cos(params.kl),
            2.0 * std::numbers::pi * g2 * std::sin(params.kl)};
}

ModelOperators build_operators(const ModelParams& params, const BuildOptions& options) {
    ModelOperators ops;
    ops.params = params;
    ops.rates = derive_rates(params);

    CMat2 lower;  // |g><e| in {e, g}
    lower(1, 0) = 1.0;
    const CMat2 id2 = CMat2::identity();

    ops.sigma_minus_1 = kron(lower, id2);
    ops.sigma_minus_2 = kron(id2, lower);
    ops.sigma_plus_1 = adjoint(ops.sigma_minus_1);
    ops.sigma_plus_2 = adjoint(ops.sigma_minus_2);

    const cplx phase = std::polar(1.0, params.kl);
    const double g = params.g;
    const cplx alpha = params.alpha();
    const double root2pi = std::sqrt(2.0 * std::numbers::pi);

    const CMat4 drive_up = ops.sigma_plus_1 + phase * ops.sigma_plus_2;
    const CMat4 half_drive = (g * alpha) * drive_up;
    ops.h_drive = half_drive + adjoint(half_drive);

    if (options.include_exchange) {
        ops.h_exchange = ops.rates.omega * (ops.sigma_plus_1 * ops.sigma_minus_2 + ops.sigma_plus_2 * ops.sigma_minus_1);
    }
    ops.h_jump_form = ops.h_exchange + 0.5 * ops.h_drive;

    ops.jump_left = (root2pi * g) * (ops.sigma_minus_1 + phase * ops.sigma_minus_2);
    ops.c_minus = ops.sigma_minus_1 + std::conj(phase) * ops.sigma_minus_2;
    ops.c_plus = adjoint(ops.c_minus);
    ops.jump_right = {(root2pi * g) * ops.c_minus, cplx(0.0, 1.0) * alpha / root2pi};

    const CMat4 jr = ops.jump_right.full();
    const CMat4 decay = adjoint(ops.jump_left) * ops.jump_left + adjoint(jr) * jr;
    ops.h_eff = ops.h_jump_form - cplx(0.0, 0.5) * decay;
    return ops;
}

}  // namespace bellherald
