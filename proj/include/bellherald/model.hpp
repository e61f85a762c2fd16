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

#pragma once

#include <numbers>

#include "bellherald/qcore.hpp"

namespace bellherald {

// Coupling that makes the individual decay rate 4 pi g^2 equal to one, so
// times are measured in units of 1/Gamma.
inline double unit_rate_coupling() { return 1.0 / std::sqrt(4.0 * std::numbers::pi); }

struct ModelParams {
    double g = unit_rate_coupling();    // sqrt(rate)
    double alpha_mag = 100.0;           // |alpha|, dimensionless drive amplitude
    double theta = 0.0;                 // drive phase, alpha = |alpha| e^{i theta}
    double kl = std::numbers::pi / 2;   // phase k L between the qubits
    double eta_l = 1.0;                 // reflected-photon detection efficiency
    double eta_r = 1.0;                 // transmitted-photon detection efficiency

    cplx alpha() const { return std::polar(alpha_mag, theta); }

    // Throws PreconditionError naming the offending field.
    void validate() const;
};

struct DerivedRates {
    double gamma = 0.0;    // 4 pi g^2
    double gamma12 = 0.0;  // 4 pi g^2 cos(kL)
    double omega = 0.0;    // 2 pi g^2 sin(kL)
};

DerivedRates derive_rates(const ModelParams& params);

// J_R = op + offset * 1; the constant part is the transmitted drive field.
struct RightJumpOperator {
    CMat4 op;
    cplx offset;

    CMat4 full() const { return op + offset * CMat4::identity(); }
};

struct ModelOperators {
    ModelParams params;
    DerivedRates rates;

    CMat4 sigma_minus_1, sigma_minus_2;
    CMat4 sigma_plus_1, sigma_plus_2;

    CMat4 h_drive;      // g alpha (s1+ + e^{ikL} s2+) + h.c.
    CMat4 h_exchange;   // Omega (s1+ s2- + s2+ s1-)
    CMat4 h_jump_form;  // h_exchange + half the drive; pairs with J_L, J_R
    CMat4 h_eff;        // h_jump_form - i/2 (J_L^dag J_L + J_R^dag J_R), non-Hermitian

    CMat4 jump_left;            // sqrt(2 pi) g (s1- + e^{ikL} s2-)
    RightJumpOperator jump_right;  // sqrt(2 pi) g c- + i alpha / sqrt(2 pi)
    CMat4 c_minus;              // s1- + e^{-ikL} s2-
    CMat4 c_plus;               // c_minus^dag
};

struct BuildOptions {
    // false drops the waveguide-mediated exchange H_qq from every Hamiltonian;
    // used to isolate its effect.
    bool include_exchange = true;
};

ModelOperators build_operators(const ModelParams& params, const BuildOptions& options = {});

}  // namespace bellherald
