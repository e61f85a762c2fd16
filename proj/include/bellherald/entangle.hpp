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

#include "bellherald/lindblad.hpp"
#include "bellherald/qcore.hpp"

namespace bellherald {

// Named two-qubit states in the {|ee>, |eg>, |ge>, |gg>} basis.
namespace bell {
CVec4 ee();
CVec4 eg();
CVec4 ge();
CVec4 gg();
CVec4 phi_plus();       // (|gg> + |ee>)/sqrt2
CVec4 phi_minus();      // (|gg> - |ee>)/sqrt2
CVec4 psi_plus();       // (|ge> + |eg>)/sqrt2
CVec4 psi_minus();      // (|ge> - |eg>)/sqrt2
CVec4 plus_i();         // (|ge> + i|eg>)/sqrt2
CVec4 minus_i();        // (|ge> - i|eg>)/sqrt2
CVec4 symmetric();      // (|eg> + |ge>)/sqrt2
CVec4 antisymmetric();  // (|eg> - |ge>)/sqrt2
}  // namespace bell

// Entropy of a Bernoulli(p) variable in bits; 0 log 0 = 0.
double binary_entropy(double p);

// Von Neumann entropy (bits) of either reduced state of a pure state.
double entropy(const CVec4& psi);

// Wootters concurrence, using sigma_y (x) sigma_y in the fixed basis and
// complex conjugation of the matrix entries in that basis.
double concurrence(const CMat4& rho);
double concurrence(const DensityOp& rho);

double eof_from_concurrence(double c);
double eof(const DensityOp& rho);
double eof(const CMat4& rho);

struct LevelPopulations {
    double ee = 0.0;
    double plus_i = 0.0;
    double minus_i = 0.0;
    double gg = 0.0;

    double sum() const { return ee + plus_i + minus_i + gg; }
};

LevelPopulations populations(const CVec4& psi);
LevelPopulations populations(const CMat4& rho);
LevelPopulations populations(const DensityOp& rho);

double bell_fidelity(const CVec4& psi, const CVec4& target);
double bell_fidelity(const CMat4& rho, const CVec4& target);
double bell_fidelity(const DensityOp& rho, const CVec4& target);

}  // namespace bellherald
