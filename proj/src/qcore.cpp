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

#include "bellherald/qcore.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bellherald/errors.hpp"

namespace bellherald {

namespace {

template <std::size_t N>
CVec<N> normalized_impl(const CVec<N>& x) {
    const double n = norm(x);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite vector");
    return (1.0 / n) * x;
}

template <std::size_t N>
HermitianEigen<N> jacobi(const CMat<N>& m) {
    if (const double err = hermiticity_error(m); !(err <= 1e-9)) {
        throw PreconditionError("eig_hermitian: matrix is not Hermitian (|m - m^dag|_max = " +
                                std::to_string(err) + ")");
    }
    CMat<N> a = hermitian_part(m);
    CMat<N> v = CMat<N>::identity();

    const double scale = std::max(max_abs(a), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-17 * scale) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq_abs = std::abs(a(p, q));
                if (apq_abs <= 1e-300) continue;
                const cplx phase = a(p, q) / apq_abs;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * apq_abs);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary acting on (p, q): diag(1, conj(phase)) followed by a real rotation.
                const cplx vpp = c;
                const cplx vpq = s;
                const cplx vqp = -s * std::conj(phase);
                const cplx vqq = c * std::conj(phase);

                for (std::size_t k = 0; k < N; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < N; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * vpp + vkq * vqp;
                    v(k, q) = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    std::array<std::size_t, N> order;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigen<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

using Mat4 = CMat4;

void hessenberg_reduce(Mat4& h) {
    constexpr std::size_t n = 4;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;

        const cplx x0 = h(k + 1, k);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
        const cplx alpha = -phase * xnorm;

        std::array<cplx, n> v{};
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (const auto& z : v) vnorm += std::norm(z);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (auto& z : v) z /= vnorm;

        // h <- (I - 2 v v^dag) h
        for (std::size_t c = 0; c < n; ++c) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, c);
            for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= 2.0 * v[i] * s;
        }
        // h <- h (I - 2 v v^dag)
        for (std::size_t r = 0; r < n; ++r) {
            cplx s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += h(r, i) * v[i];
            for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= 2.0 * s * std::conj(v[i]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

}  // namespace

CVec2 normalized(const CVec2& x) { return normalized_impl(x); }
CVec4 normalized(const CVec4& x) { return normalized_impl(x); }

CMat4 kron(const CMat2& x, const CMat2& y) {
    CMat4 out;
    for (std::size_t r1 = 0; r1 < 2; ++r1)
        for (std::size_t c1 = 0; c1 < 2; ++c1)
            for (std::size_t r2 = 0; r2 < 2; ++r2)
                for (std::size_t c2 = 0; c2 < 2; ++c2) out(2 * r1 + r2, 2 * c1 + c2) = x(r1, c1) * y(r2, c2);
    return out;
}

CVec4 kron(const CVec2& x, const CVec2& y) {
    CVec4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out[2 * i + j] = x[i] * y[j];
    return out;
}

CMat2 partial_trace(const CMat4& rho, int keep) {
    if (keep != 1 && keep != 2) throw PreconditionError("partial_trace: keep must be 1 or 2");
    if (const double err = hermiticity_error(rho); !(err <= 1e-10))
        throw PreconditionError("partial_trace: input is not Hermitian (error " + std::to_string(err) + ")");
    if (const cplx tr = trace(rho); !(std::abs(tr - 1.0) <= 1e-10))
        throw PreconditionError("partial_trace: input trace " + std::to_string(tr.real()) + " is not 1");

    CMat2 out;
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            cplx s = 0.0;
            for (std::size_t c = 0; c < 2; ++c)
                s += keep == 1 ? rho(2 * a + c, 2 * b + c) : rho(2 * c + a, 2 * c + b);
            out(a, b) = s;
        }
    }
    return out;
}

std::array<double, 2> eig_hermitian(const CMat2& m) { return jacobi(m).values; }
std::array<double, 4> eig_hermitian(const CMat4& m) { return jacobi(m).values; }
HermitianEigen<2> eigh(const CMat2& m) { return jacobi(m); }
HermitianEigen<4> eigh(const CMat4& m) { return jacobi(m); }

std::array<cplx, 4> eig_general4(const CMat4& m) {
    for (const auto& z : m.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw PreconditionError("eig_general4: non-finite matrix entry");

    Mat4 h = m;
    hessenberg_reduce(h);

    std::array<cplx, 4> eig{};
    const double anorm = std::max(max_abs(h), 1e-300);
    int hi = 3;
    int iterations = 0;
    int since_deflation = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = h(0, 0);
            break;
        }
        int l = hi;
        while (l > 0) {
            double scale = std::abs(h(l, l)) + std::abs(h(l - 1, l - 1));
            if (scale == 0.0) scale = anorm;
            if (std::abs(h(l, l - 1)) <= kQrDeflationTolerance * scale) break;
            --l;
        }
        if (l == hi) {
            eig[hi] = h(hi, hi);
            h(hi, hi - 1) = 0.0;
            --hi;
            since_deflation = 0;
            continue;
        }
        if (l > 0) h(l, l - 1) = 0.0;
        if (++iterations > kQrMaxIterations)
            throw NumericalError("eig_general4: QR iteration did not converge in " +
                                 std::to_string(kQrMaxIterations) + " iterations");
        ++since_deflation;

        // Wilkinson shift from the trailing 2x2 of the active block.
        const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
        const cplx half = 0.5 * (a - d);
        const cplx disc = std::sqrt(half * half + b * c);
        const cplx mu1 = 0.5 * (a + d) + disc;
        const cplx mu2 = 0.5 * (a + d) - disc;
        cplx mu = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
        if (since_deflation % 11 == 10) mu = d + std::abs(h(hi, hi - 1));  // exceptional shift

        for (int k = l; k <= hi; ++k) h(k, k) -= mu;
        std::array<cplx, 4> gc{}, gs{};
        for (int k = l; k < hi; ++k) {
            const cplx x = h(k, k), y = h(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            if (r == 0.0) {
                gc[k] = 1.0;
                gs[k] = 0.0;
                continue;
            }
            gc[k] = x / r;
            gs[k] = y / r;
            for (int col = k; col <= hi; ++col) {
                const cplx u = h(k, col), w = h(k + 1, col);
                h(k, col) = std::conj(gc[k]) * u + std::conj(gs[k]) * w;
                h(k + 1, col) = -gs[k] * u + gc[k] * w;
            }
        }
        for (int k = l; k < hi; ++k) {
            const int rmax = std::min(k + 2, hi);
            for (int row = l; row <= rmax; ++row) {
                const cplx u = h(row, k), w = h(row, k + 1);
                h(row, k) = u * gc[k] + w * gs[k];
                h(row, k + 1) = -u * std::conj(gs[k]) + w * std::conj(gc[k]);
            }
        }
        for (int k = l; k <= hi; ++k) h(k, k) += mu;
    }
    return eig;
}

}  // namespace bellherald
