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

#include "chsh/core.hpp"
#include "chsh/linalg.hpp"
#include "chsh/polytopes.hpp"

#include <utility>
#include <vector>

namespace chsh {

/// Observable at Bloch angle t in the X-Z plane: cos(t) Z + sin(t) X.
inline Mat2 observable(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Mat2{{{c, s}, {s, -c}}};
}

inline Mat4 kron(const Mat2 &a, const Mat2 &b)
{
    Mat4 out = mat4_zero();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return out;
}

/// Bell operator in the computational basis for explicit observable angles:
/// W = F1 A0x1 + F2 A1x1 + F3 1xB0 + F4 1xB1 + sum of correlator terms.
inline Mat4 bell_operator_from_angles(const Functional &f, double a0, double a1, double b0,
                                      double b1)
{
    const Mat2 id{{{1, 0}, {0, 1}}};
    const std::array<Mat2, 2> A{observable(a0), observable(a1)};
    const std::array<Mat2, 2> B{observable(b0), observable(b1)};

    Mat4 w = mat4_zero();
    auto add = [&w](double coeff, const Mat4 &term) {
        if (coeff == 0.0) {
            return;
        }
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                w[i][j] += coeff * term[i][j];
            }
        }
    };
    add(f.coeffs[0], kron(A[0], id));
    add(f.coeffs[1], kron(A[1], id));
    add(f.coeffs[2], kron(id, B[0]));
    add(f.coeffs[3], kron(id, B[1]));
    add(f.coeffs[4], kron(A[0], B[0]));
    add(f.coeffs[5], kron(A[0], B[1]));
    add(f.coeffs[6], kron(A[1], B[0]));
    add(f.coeffs[7], kron(A[1], B[1]));
    return w;
}

/**
 * @brief Bell operator in the two-angle parametrisation A0 = B0 = Z,
 * A1 and B1 rotated by a and b in the X-Z plane.
 */
struct BellOperator {
    Mat4 entries = mat4_zero();
    Functional source;
    double a = 0.0;
    double b = 0.0;
};

inline BellOperator build_bell_operator(const Functional &f, double a, double b)
{
    if (a < -1e-12 || a > kPi + 1e-12 || b < -1e-12 || b > kPi + 1e-12) {
        throw std::invalid_argument("build_bell_operator: angles must lie in [0, pi]");
    }
    BellOperator op;
    op.source = f;
    op.a = a;
    op.b = b;
    op.entries = bell_operator_from_angles(f, 0.0, a, 0.0, b);
    return op;
}

/// Largest eigenvalue and a real unit eigenvector of a Bell operator.
inline std::pair<double, Vec4> top_eigenpair(const BellOperator &w)
{
    const SymmetricEigen4 eig = jacobi_eigen_symmetric(w.entries);
    return {eig.values[0], eig.vectors[0]};
}

inline double top_eigenvalue(const Functional &f, double a, double b)
{
    return jacobi_eigen_symmetric(bell_operator_from_angles(f, 0.0, a, 0.0, b)).values[0];
}

/**
 * @brief Canonicalizes a real two-qubit state with X-Z plane observables.
 *
 * Schmidt-decomposes the (real) eigenvector via the reduced states, rotates
 * each side so the state becomes cos(theta/2)|00> + sin(theta/2)|11> with
 * theta in [0, pi/2], and returns the correspondingly rotated observable
 * angles.  The statistics are invariant under the local rotations, so the
 * returned Realization reproduces the input point.
 */
inline Realization canonicalize_realization(const Vec4 &eigenvector, double a, double b)
{
    const double n = norm4(eigenvector);
    if (n < 1e-12) {
        throw std::invalid_argument("canonicalize_realization: eigenvector has zero norm");
    }
    // psi = sum_ij M[i][j] |i>|j>
    const Mat2 m{{{eigenvector[0] / n, eigenvector[1] / n},
                  {eigenvector[2] / n, eigenvector[3] / n}}};
    const Svd2 svd = svd_2x2(m);
    const double theta = 2.0 * std::atan2(svd.s2, svd.s1);

    auto conjugate_angle = [](const Mat2 &basis, double angle) {
        // basis^T * (cos Z + sin X) * basis stays in the X-Z plane
        const Mat2 o = observable(angle);
        double t[2][2] = {};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int k = 0; k < 2; ++k) {
                    for (int l = 0; l < 2; ++l) {
                        s += basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                             o[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] *
                             basis[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
                    }
                }
                t[i][j] = s;
            }
        }
        return std::atan2(t[0][1], t[0][0]);
    };

    return Realization(theta, conjugate_angle(svd.u, 0.0), conjugate_angle(svd.u, a),
                       conjugate_angle(svd.v, 0.0), conjugate_angle(svd.v, b));
}

/// Result of the two-angle quantum-value maximization.
struct QuantumMaximum {
    double beta_max = 0.0;
    double a_star = 0.0;
    double b_star = 0.0;
    Vec4 eigenvector{};
    Realization realization;
    bool unique = false;
    bool boundary = false; // optimum sits at a or b in {0, pi}: local statistics
};

namespace detail {

/// Compass refinement of lambda_max(W(a,b)) inside [0,pi]^2.
inline void refine_candidate(const Functional &f, double &a, double &b, double &val,
                             double start_step, double tol)
{
    static constexpr double dirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                          {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    double h = start_step;
    while (h > tol) {
        bool improved = false;
        for (const auto &d : dirs) {
            const double na = std::clamp(a + h * d[0], 0.0, kPi);
            const double nb = std::clamp(b + h * d[1], 0.0, kPi);
            if (na == a && nb == b) {
                continue;
            }
            const double v = top_eigenvalue(f, na, nb);
            if (v > val) {
                a = na;
                b = nb;
                val = v;
                improved = true;
            }
        }
        if (!improved) {
            h *= 0.5;
        }
    }
}

} // namespace detail

/// Tolerances implementing the informal "unique maximiser" at floating-point
/// scale: a second local optimum within kUniqueValueTol of the maximum at
/// angle distance above kUniqueAngleTol clears the flag.
inline constexpr double kUniqueValueTol = 1e-7;
inline constexpr double kUniqueAngleTol = 1e-3;

/**
 * @brief Maximizes the top Bell-operator eigenvalue over (a,b) in [0,pi]^2.
 *
 * Coarse grid (grid_n cells per axis) followed by compass refinement of every
 * grid-local maximum down to refine_tol.  Interior optimizers flag a
 * non-local extremal candidate; optima at the box edge are reported as
 * boundary (commuting observables, local statistics).
 */
inline QuantumMaximum maximize_quantum_value(const Functional &f, int grid_n = 64,
                                             double refine_tol = 1e-10)
{
    if (grid_n < 8) {
        throw std::invalid_argument("maximize_quantum_value: grid_n must be >= 8");
    }
    if (!(refine_tol > 0.0)) {
        throw std::invalid_argument("maximize_quantum_value: refine_tol must be positive");
    }

    const int n = grid_n;
    const double step = kPi / n;
    std::vector<double> grid(static_cast<std::size_t>((n + 1) * (n + 1)));
    auto at = [&grid, n](int i, int j) -> double & {
        return grid[static_cast<std::size_t>(i * (n + 1) + j)];
    };
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            at(i, j) = top_eigenvalue(f, i * step, j * step);
        }
    }

    // grid-local maxima (>= all existing neighbours), first index wins ties
    struct Candidate {
        double a, b, val;
    };
    std::vector<Candidate> cands;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double v = at(i, j);
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) {
                        continue;
                    }
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni > n || nj > n) {
                        continue;
                    }
                    if (at(ni, nj) > v) {
                        is_max = false;
                    }
                }
            }
            if (is_max) {
                cands.push_back({i * step, j * step, v});
            }
        }
    }

    for (auto &c : cands) {
        detail::refine_candidate(f, c.a, c.b, c.val, step, refine_tol);
    }

    // merge candidates that converged to the same optimizer
    std::vector<Candidate> merged;
    for (const auto &c : cands) {
        bool absorbed = false;
        for (auto &m : merged) {
            if (std::hypot(m.a - c.a, m.b - c.b) <= kUniqueAngleTol) {
                if (c.val > m.val) {
                    m = c;
                }
                absorbed = true;
                break;
            }
        }
        if (!absorbed) {
            merged.push_back(c);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < merged.size(); ++k) {
        if (merged[k].val > merged[best].val) {
            best = k;
        }
    }

    QuantumMaximum out;
    out.a_star = merged[best].a;
    out.b_star = merged[best].b;
    out.beta_max = merged[best].val;

    const BellOperator w = build_bell_operator(f, out.a_star, out.b_star);
    const SymmetricEigen4 eig = jacobi_eigen_symmetric(w.entries);
    out.eigenvector = eig.vectors[0];
    out.realization = canonicalize_realization(out.eigenvector, out.a_star, out.b_star);

    const double edge = 1e-8;
    out.boundary = out.a_star < edge || out.a_star > kPi - edge || out.b_star < edge ||
                   out.b_star > kPi - edge;

    bool rival = false;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        if (k == best) {
            continue;
        }
        const double dist = std::hypot(merged[k].a - out.a_star, merged[k].b - out.b_star);
        if (merged[k].val >= out.beta_max - kUniqueValueTol && dist > kUniqueAngleTol) {
            rival = true;
        }
    }
    const double gap_tol = 1e-9 * std::max(1.0, std::abs(eig.values[0]));
    const bool degenerate_top = eig.values[0] - eig.values[1] < gap_tol;
    out.unique = !rival && !degenerate_top;
    return out;
}

/// Trace-moment consistency data for a proposed eigenvalue pair.
struct MomentCheck {
    double m2 = 0.0;                 // Tr W^2
    double m4 = 0.0;                 // Tr W^4
    double lambda1 = 0.0;            // recovered from the moments, descending
    double lambda2 = 0.0;
    double odd_trace_residual = 0.0; // max(|Tr W|, |Tr W^3|)
    double even_residual = 0.0;      // worst relative defect of the moment equations
    bool passed = false;
};

/**
 * @brief Verifies a claimed (lambda1, lambda2) spectrum via trace moments.
 *
 * Requires one party's marginal coefficients to vanish so that conjugation by
 * Y on that side negates W and the spectrum is {l1, l2, -l1, -l2}.  Then
 * Tr W = Tr W^3 = 0 and the two even moments determine {l1, l2} up to swap.
 */
inline MomentCheck moment_verify(const Functional &f, double a, double b, double lambda1,
                                 double lambda2)
{
    const bool bob_zero = std::abs(f.coeffs[2]) < 1e-12 && std::abs(f.coeffs[3]) < 1e-12;
    const bool alice_zero = std::abs(f.coeffs[0]) < 1e-12 && std::abs(f.coeffs[1]) < 1e-12;
    if (!bob_zero && !alice_zero) {
        throw std::invalid_argument(
            "moment_verify: needs zero marginal coefficients on one side for the "
            "spectral +/- symmetry");
    }

    const Mat4 w = bell_operator_from_angles(f, 0.0, a, 0.0, b);
    const Mat4 w2 = mat4_mul(w, w);
    const Mat4 w3 = mat4_mul(w2, w);
    const Mat4 w4 = mat4_mul(w2, w2);

    MomentCheck out;
    out.m2 = mat4_trace(w2);
    out.m4 = mat4_trace(w4);
    out.odd_trace_residual = std::max(std::abs(mat4_trace(w)), std::abs(mat4_trace(w3)));

    const double root = std::sqrt(std::max(4.0 * out.m4 - out.m2 * out.m2, 0.0));
    out.lambda1 = 0.5 * std::sqrt(std::max(out.m2 + root, 0.0));
    out.lambda2 = 0.5 * std::sqrt(std::max(out.m2 - root, 0.0));

    const double c2 = 2.0 * (lambda1 * lambda1 + lambda2 * lambda2);
    const double c4 = 2.0 * (lambda1 * lambda1 * lambda1 * lambda1 +
                             lambda2 * lambda2 * lambda2 * lambda2);
    const double r2 = std::abs(out.m2 - c2) / std::max(1.0, std::abs(out.m2));
    const double r4 = std::abs(out.m4 - c4) / std::max(1.0, std::abs(out.m4));
    out.even_residual = std::max(r2, r4);
    out.passed = out.odd_trace_residual < 1e-10 && out.even_residual < 1e-9;
    return out;
}

} // namespace chsh
