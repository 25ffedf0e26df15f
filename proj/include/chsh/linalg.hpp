// Copyright 2026 The chsh-extremal authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace chsh {

using Vec4 = std::array<double, 4>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 mat4_zero()
{
    return Mat4{{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}};
}

inline Vec4 mat4_apply(const Mat4 &m, const Vec4 &v)
{
    Vec4 out{};
    for (std::size_t i = 0; i < 4; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            s += m[i][j] * v[j];
        }
        out[i] = s;
    }
    return out;
}

inline Mat4 mat4_mul(const Mat4 &a, const Mat4 &b)
{
    Mat4 out = mat4_zero();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double aik = a[i][k];
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < 4; ++j) {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    return out;
}

inline double mat4_trace(const Mat4 &m) { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

inline double dot4(const Vec4 &a, const Vec4 &b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm4(const Vec4 &a) { return std::sqrt(dot4(a, a)); }

/// In-place Gaussian elimination with partial pivoting; returns false when
/// the system is singular to working precision.
template <std::size_t N>
inline bool solve_linear(std::array<std::array<double, N>, N> a, std::array<double, N> &b)
{
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][col]) < 1e-13) {
            return false;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const double inv = 1.0 / a[col][col];
        for (std::size_t r = col + 1; r < N; ++r) {
            const double factor = a[r][col] * inv;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t c = col; c < N; ++c) {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    for (std::size_t col = N; col-- > 0;) {
        double s = b[col];
        for (std::size_t c = col + 1; c < N; ++c) {
            s -= a[col][c] * b[c];
        }
        b[col] = s / a[col][col];
    }
    return true;
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a symmetric NxN
/// matrix.  vectors[k] is the unit eigenvector belonging to values[k].
template <std::size_t N> struct SymmetricEigen {
    std::array<double, N> values{};
    std::array<std::array<double, N>, N> vectors{};
};

using SymmetricEigen4 = SymmetricEigen<4>;

/// Cyclic Jacobi diagonalization.  At these sizes the method converges to
/// machine precision in a handful of sweeps and has no trouble with
/// clustered or degenerate spectra.
template <std::size_t N>
inline SymmetricEigen<N> jacobi_eigen(std::array<std::array<double, N>, N> a)
{
    std::array<std::array<double, N>, N> v{};
    for (std::size_t i = 0; i < N; ++i) {
        v[i][i] = 1.0;
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            scale = std::max(scale, std::abs(a[i][j]));
        }
    }
    if (scale == 0.0) {
        scale = 1.0;
    }

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                off = std::max(off, std::abs(a[p][q]));
            }
        }
        if (off <= 1e-16 * scale) {
            break;
        }
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) <= 1e-18 * scale) {
                    continue;
                }
                // classic stable rotation choice
                const double tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });

    SymmetricEigen<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a[src][src];
        for (std::size_t i = 0; i < N; ++i) {
            out.vectors[k][i] = v[i][src];
        }
    }
    return out;
}

inline SymmetricEigen4 jacobi_eigen_symmetric(const Mat4 &a) { return jacobi_eigen<4>(a); }

/// Eigendecomposition of the symmetric 2x2 matrix [[a, c], [c, b]]:
/// values descending, vectors[k] the unit eigenvector for values[k].
struct SymmetricEigen2 {
    std::array<double, 2> values{};
    std::array<std::array<double, 2>, 2> vectors{};
};

inline SymmetricEigen2 eigen_symmetric_2x2(double a, double b, double c)
{
    SymmetricEigen2 out;
    const double disc = std::sqrt(std::max((a - b) * (a - b) + 4.0 * c * c, 0.0));
    const double l1 = 0.5 * (a + b + disc);
    const double l2 = 0.5 * (a + b - disc);
    out.values = {l1, l2};

    // eigenvector for the leading eigenvalue, picking the better-conditioned row
    double vx, vy;
    if (std::abs(a - l1) > std::abs(b - l1)) {
        const double f = std::hypot(c, l1 - a);
        if (f == 0.0) {
            vx = 1.0;
            vy = 0.0;
        } else {
            vx = c / f;
            vy = (l1 - a) / f;
        }
    } else {
        const double f = std::hypot(c, l1 - b);
        if (f == 0.0) {
            vx = 1.0;
            vy = 0.0;
        } else {
            vx = (l1 - b) / f;
            vy = c / f;
        }
    }
    out.vectors[0] = {vx, vy};
    out.vectors[1] = {-vy, vx};
    return out;
}

/// SVD of a real 2x2 matrix: m = u * diag(s1, s2) * v^T with s1 >= s2 >= 0
/// and u, v real orthogonal.
struct Svd2 {
    Mat2 u{};
    Mat2 v{};
    double s1 = 0.0;
    double s2 = 0.0;
};

inline Svd2 svd_2x2(const Mat2 &m)
{
    // right singular vectors from m^T m
    const double g00 = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    const double g11 = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    const double g01 = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    const SymmetricEigen2 eig = eigen_symmetric_2x2(g00, g11, g01);

    Svd2 out;
    out.s1 = std::sqrt(std::max(eig.values[0], 0.0));
    out.s2 = std::sqrt(std::max(eig.values[1], 0.0));
    out.v = {{{eig.vectors[0][0], eig.vectors[1][0]}, {eig.vectors[0][1], eig.vectors[1][1]}}};

    // u_k = m v_k / s_k; fall back to the orthogonal complement when s_k ~ 0
    std::array<std::array<double, 2>, 2> ucols{};
    for (int k = 0; k < 2; ++k) {
        const double vx = out.v[0][static_cast<std::size_t>(k)];
        const double vy = out.v[1][static_cast<std::size_t>(k)];
        const double sx = m[0][0] * vx + m[0][1] * vy;
        const double sy = m[1][0] * vx + m[1][1] * vy;
        const double s = (k == 0) ? out.s1 : out.s2;
        if (s > 1e-14) {
            ucols[static_cast<std::size_t>(k)] = {sx / s, sy / s};
        } else if (k == 1) {
            ucols[1] = {-ucols[0][1], ucols[0][0]};
        } else {
            ucols[0] = {1.0, 0.0};
        }
    }
    out.u = {{{ucols[0][0], ucols[1][0]}, {ucols[0][1], ucols[1][1]}}};
    return out;
}

} // namespace chsh
