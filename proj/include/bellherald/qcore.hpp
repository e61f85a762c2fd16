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

// Dense complex linear algebra for the two fixed sizes this library needs:
// single-qubit (2) and two-qubit (4) operators and states.
//
// Two-qubit basis ordering is fixed everywhere as {|ee>, |eg>, |ge>, |gg>},
// qubit 1 being the left tensor factor. Single-qubit ordering is {|e>, |g>}.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace bellherald {

using cplx = std::complex<double>;

template <std::size_t N>
concept QubitDim = (N == 2 || N == 4);

template <std::size_t N>
    requires QubitDim<N>
struct CVec {
    std::array<cplx, N> v{};

    static constexpr std::size_t size() { return N; }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }

    static CVec basis(std::size_t i) {
        CVec out;
        out.v[i] = 1.0;
        return out;
    }
};

// Row-major N x N complex matrix.
template <std::size_t N>
    requires QubitDim<N>
struct CMat {
    std::array<cplx, N * N> a{};

    static constexpr std::size_t dim() { return N; }
    cplx& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }

    static CMat identity() {
        CMat out;
        for (std::size_t i = 0; i < N; ++i) out(i, i) = 1.0;
        return out;
    }

    static CMat diagonal(const std::array<cplx, N>& d) {
        CMat out;
        for (std::size_t i = 0; i < N; ++i) out(i, i) = d[i];
        return out;
    }
};

using CVec2 = CVec<2>;
using CVec4 = CVec<4>;
using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

// ---------------------------------------------------------------- vectors

template <std::size_t N>
CVec<N> operator+(const CVec<N>& x, const CVec<N>& y) {
    CVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out.v[i] = x.v[i] + y.v[i];
    return out;
}

template <std::size_t N>
CVec<N> operator-(const CVec<N>& x, const CVec<N>& y) {
    CVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out.v[i] = x.v[i] - y.v[i];
    return out;
}

template <std::size_t N>
CVec<N> operator*(cplx s, const CVec<N>& x) {
    CVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out.v[i] = s * x.v[i];
    return out;
}

// <x|y>, conjugate-linear in the first argument.
template <std::size_t N>
cplx inner(const CVec<N>& x, const CVec<N>& y) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(x.v[i]) * y.v[i];
    return s;
}

template <std::size_t N>
double norm_sq(const CVec<N>& x) {
    double s = 0.0;
    for (const auto& z : x.v) s += std::norm(z);
    return s;
}

template <std::size_t N>
double norm(const CVec<N>& x) {
    return std::sqrt(norm_sq(x));
}

// Throws NumericalError for a zero vector.
CVec2 normalized(const CVec2& x);
CVec4 normalized(const CVec4& x);

// ---------------------------------------------------------------- matrices

template <std::size_t N>
CMat<N> operator+(const CMat<N>& x, const CMat<N>& y) {
    CMat<N> out;
    for (std::size_t i = 0; i < N * N; ++i) out.a[i] = x.a[i] + y.a[i];
    return out;
}

template <std::size_t N>
CMat<N> operator-(const CMat<N>& x, const CMat<N>& y) {
    CMat<N> out;
    for (std::size_t i = 0; i < N * N; ++i) out.a[i] = x.a[i] - y.a[i];
    return out;
}

template <std::size_t N>
CMat<N>& operator+=(CMat<N>& x, const CMat<N>& y) {
    for (std::size_t i = 0; i < N * N; ++i) x.a[i] += y.a[i];
    return x;
}

template <std::size_t N>
CMat<N> operator*(cplx s, const CMat<N>& x) {
    CMat<N> out;
    for (std::size_t i = 0; i < N * N; ++i) out.a[i] = s * x.a[i];
    return out;
}

template <std::size_t N>
CMat<N> operator*(const CMat<N>& x, const CMat<N>& y) {
    CMat<N> out;
    for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t k = 0; k < N; ++k) {
            const cplx xrk = x(r, k);
            for (std::size_t c = 0; c < N; ++c) out(r, c) += xrk * y(k, c);
        }
    }
    return out;
}

template <std::size_t N>
CVec<N> operator*(const CMat<N>& m, const CVec<N>& x) {
    CVec<N> out;
    for (std::size_t r = 0; r < N; ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < N; ++c) s += m(r, c) * x.v[c];
        out.v[r] = s;
    }
    return out;
}

template <std::size_t N>
CMat<N> adjoint(const CMat<N>& m) {
    CMat<N> out;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out(r, c) = std::conj(m(c, r));
    return out;
}

// Elementwise complex conjugate in the computational basis.
template <std::size_t N>
CMat<N> conjugate(const CMat<N>& m) {
    CMat<N> out;
    for (std::size_t i = 0; i < N * N; ++i) out.a[i] = std::conj(m.a[i]);
    return out;
}

template <std::size_t N>
cplx trace(const CMat<N>& m) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += m(i, i);
    return s;
}

// |x><y|
template <std::size_t N>
CMat<N> outer(const CVec<N>& x, const CVec<N>& y) {
    CMat<N> out;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out(r, c) = x.v[r] * std::conj(y.v[c]);
    return out;
}

// <x|m|x>
template <std::size_t N>
cplx expectation(const CMat<N>& m, const CVec<N>& x) {
    return inner(x, m * x);
}

template <std::size_t N>
double max_abs(const CMat<N>& m) {
    double s = 0.0;
    for (const auto& z : m.a) s = std::max(s, std::abs(z));
    return s;
}

// max_ij |m - m^dag|_ij
template <std::size_t N>
double hermiticity_error(const CMat<N>& m) {
    double s = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = r; c < N; ++c) s = std::max(s, std::abs(m(r, c) - std::conj(m(c, r))));
    return s;
}

// (m + m^dag) / 2
template <std::size_t N>
CMat<N> hermitian_part(const CMat<N>& m) {
    CMat<N> out;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    return out;
}

CMat4 kron(const CMat2& x, const CMat2& y);
CVec4 kron(const CVec2& x, const CVec2& y);

// Reduced state of one qubit (keep = 1 or 2) of a unit-trace Hermitian 4x4.
// Throws PreconditionError when the input is not Hermitian or not unit trace
// within 1e-10, or keep is not 1 or 2.
CMat2 partial_trace(const CMat4& rho, int keep);

template <std::size_t N>
struct HermitianEigen {
    std::array<double, N> values{};  // ascending
    CMat<N> vectors;                 // column k is the eigenvector of values[k]
};

// Cyclic complex Jacobi. Throws PreconditionError if |m - m^dag|_max > 1e-9.
std::array<double, 2> eig_hermitian(const CMat2& m);
std::array<double, 4> eig_hermitian(const CMat4& m);
HermitianEigen<2> eigh(const CMat2& m);
HermitianEigen<4> eigh(const CMat4& m);

// Eigenvalues of a general complex 4x4 by Householder reduction to Hessenberg
// form followed by single-shift (Wilkinson) QR with deflation. Order is the
// deflation order, not sorted.
inline constexpr int kQrMaxIterations = 200;
inline constexpr double kQrDeflationTolerance = 1e-12;
std::array<cplx, 4> eig_general4(const CMat4& m);

}  // namespace bellherald
