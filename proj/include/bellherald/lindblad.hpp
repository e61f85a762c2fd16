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

#include <span>
#include <vector>

#include "bellherald/model.hpp"
#include "bellherald/qcore.hpp"

namespace bellherald {

// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
class DensityOp {
   public:
    static constexpr double kHermiticityTol = 1e-9;
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kNegativityTol = 1e-8;

    DensityOp() : mat_(CMat4::diagonal({0.0, 0.0, 0.0, 1.0})) {}

    // Validates all three invariants; throws PreconditionError otherwise.
    static DensityOp from_matrix(const CMat4& m);
    static DensityOp pure(const CVec4& psi);
    static DensityOp maximally_mixed();

    const CMat4& mat() const { return mat_; }
    double min_eigenvalue() const;

   private:
    explicit DensityOp(const CMat4& m) : mat_(m) {}
    CMat4 mat_;
};

// Right-hand side of the collective-decay master equation
//   drho/dt = i[rho, H_d + H_qq] + sum_ij Gamma_ij (s_i- rho s_j+ - 1/2 {rho, s_i+ s_j-}).
// Generators are precomputed so repeated application is cheap.
class Liouvillian {
   public:
    explicit Liouvillian(const ModelOperators& ops);
    CMat4 apply(const CMat4& rho) const;

   private:
    CMat4 k_;  // -i H - 1/2 sum Gamma_ij s_i+ s_j-
    std::array<CMat4, 2> lower_;
    std::array<CMat4, 2> raise_;
    std::array<std::array<double, 2>, 2> gamma_{};
};

CMat4 liouvillian_apply(const ModelOperators& ops, const CMat4& rho);
CMat4 liouvillian_apply(const ModelOperators& ops, const DensityOp& rho);

// Same generator written with the detector jump operators:
//   drho/dt = i[rho, H_h] + sum_{L,R} J rho J^dag - 1/2 {rho, J^dag J}.
CMat4 liouvillian_apply_jump_form(const ModelOperators& ops, const CMat4& rho);

// Largest RK4 step that resolves both the Rabi frequency 2 g |alpha| and the
// decay rate: min(0.01 / (2 g |alpha|), 0.01 / Gamma).
double dt_max(const ModelParams& params);

struct MeSolution {
    std::vector<double> t;
    std::vector<DensityOp> states;
};

// Classical RK4. Samples t = 0, every sample_stride steps, and t_end.
// t_end must be an integer multiple of dt. Throws GuardError for dt > dt_max.
MeSolution integrate_me(const ModelOperators& ops, const DensityOp& rho0, double t_end, double dt,
                        std::size_t sample_stride = 1);

// Unique unit-trace null vector of the 16x16 superoperator. Throws
// NumericalError when the null space is not one-dimensional.
DensityOp steady_state(const ModelOperators& ops);

// Dimension of the numerical null space of the superoperator.
int liouvillian_null_dimension(const ModelOperators& ops);

struct G2Curve {
    std::vector<double> tau;
    std::vector<double> values;
};

// Second-order correlation of the reflected field in the steady state, by the
// quantum regression theorem. tau_grid must be non-negative and
// non-decreasing. Throws NumericalError for vanishing steady-state flux.
G2Curve g2_left(const ModelOperators& ops, std::span<const double> tau_grid);

}  // namespace bellherald
