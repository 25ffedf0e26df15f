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

#include "chsh/bell_spectrum.hpp"
#include "chsh/core.hpp"
#include "chsh/linalg.hpp"
#include "chsh/polytopes.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace chsh {

/// i_max within this band of 1 counts as a boundary verdict.
inline constexpr double kExposeBoundaryTol = 1e-9;

/**
 * @brief The exposing-functional linear program for one realisation.
 *
 * Maximize F.P over F in R^8 subject to the five tangency equalities
 * F . dP/dparam = 0 (analytic gradients) and the sixteen normalization
 * inequalities F . P_j <= 1 over the deterministic points.
 */
struct ExposeProblem {
    ProbabilityPoint point;
    Realization realization;
    std::array<std::array<double, 8>, 5> gradient_rows{};
    std::array<std::array<double, 8>, 16> normalization_rows{};
};

inline ExposeProblem build_expose_lp(const Realization &r)
{
    ExposeProblem prob;
    prob.realization = r;
    prob.point = point_from_realization(r);
    prob.gradient_rows = point_jacobian(r);
    const auto &det = deterministic_points();
    for (std::size_t j = 0; j < 16; ++j) {
        prob.normalization_rows[j] = det[j].as_vector();
    }
    return prob;
}

enum class ExposeStatus { ExposedCandidate, Boundary, Interior, Degenerate };

inline const char *to_string(ExposeStatus s)
{
    switch (s) {
    case ExposeStatus::ExposedCandidate:
        return "exposed-candidate";
    case ExposeStatus::Boundary:
        return "boundary";
    case ExposeStatus::Interior:
        return "interior";
    case ExposeStatus::Degenerate:
        return "degenerate";
    }
    return "unknown";
}

struct ExposeResult {
    Functional functional;
    double i_max = 0.0;
    ExposeStatus status = ExposeStatus::Degenerate;
    int null_dimension = 0; // free dimensions after eliminating the tangency rows
};

namespace detail {

/// Orthonormal basis of the null space of the 5x8 gradient matrix, obtained
/// from the small eigenvalues of G^T G.
inline std::vector<std::array<double, 8>>
gradient_null_space(const std::array<std::array<double, 8>, 5> &g)
{
    std::array<std::array<double, 8>, 8> gtg{};
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < 5; ++r) {
                s += g[r][i] * g[r][j];
            }
            gtg[i][j] = s;
        }
    }
    const auto eig = jacobi_eigen<8>(gtg);
    const double scale = std::max(std::abs(eig.values[0]), 1.0);
    std::vector<std::array<double, 8>> basis;
    for (std::size_t k = 0; k < 8; ++k) {
        // eigenvalues of G^T G: singular values of G below 1e-6*scale count as null
        if (std::abs(eig.values[k]) < 1e-12 * scale) {
            basis.push_back(eig.vectors[k]);
        }
    }
    // G has rank at most 5, so at least three null directions always exist
    return basis;
}

} // namespace detail

/**
 * @brief Solves the exposing LP by null-space projection + vertex enumeration.
 *
 * The tangency equalities are eliminated by projecting onto their null space
 * (typically 3 dimensions); the projected feasible set {w : A w <= 1} is a
 * compact polytope (the deterministic points span R^8), so the optimum is
 * attained at a basic vertex, all of which are enumerated exactly.
 */
inline ExposeResult solve_expose_lp(const ExposeProblem &prob)
{
    ExposeResult out;
    const auto basis = detail::gradient_null_space(prob.gradient_rows);
    const std::size_t k = basis.size();
    out.null_dimension = static_cast<int>(k);
    if (k == 0 || k > 8) {
        out.status = ExposeStatus::Degenerate;
        return out;
    }

    // projected constraint matrix (16 x k) and objective
    std::vector<std::array<double, 8>> arows(16); // only first k entries used
    const auto pvec = prob.point.as_vector();
    std::array<double, 8> cvec{};
    for (std::size_t j = 0; j < 16; ++j) {
        for (std::size_t d = 0; d < k; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < 8; ++i) {
                s += prob.normalization_rows[j][i] * basis[d][i];
            }
            arows[j][d] = s;
        }
    }
    for (std::size_t d = 0; d < k; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            s += pvec[i] * basis[d][i];
        }
        cvec[d] = s;
    }

    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 8> best_w{};
    std::array<std::size_t, 8> idx{};
    bool found = false;

    // enumerate k-subsets of the 16 rows
    auto recurse = [&](auto &&self, std::size_t depth, std::size_t start) -> void {
        if (depth == k) {
            std::array<std::array<double, 8>, 8> m{};
            std::array<double, 8> rhs{};
            for (std::size_t r = 0; r < k; ++r) {
                m[r] = arows[idx[r]];
                rhs[r] = 1.0;
            }
            for (std::size_t r = k; r < 8; ++r) {
                m[r][r] = 1.0; // pad to full size; padded rows solve to 0
                rhs[r] = 0.0;
            }
            if (!solve_linear(m, rhs)) {
                return;
            }
            for (std::size_t j = 0; j < 16; ++j) {
                double s = 0.0;
                for (std::size_t d = 0; d < k; ++d) {
                    s += arows[j][d] * rhs[d];
                }
                if (s > 1.0 + 1e-9) {
                    return;
                }
            }
            double val = 0.0;
            for (std::size_t d = 0; d < k; ++d) {
                val += cvec[d] * rhs[d];
            }
            if (val > best) {
                best = val;
                best_w = rhs;
                found = true;
            }
            return;
        }
        for (std::size_t j = start; j + (k - depth) <= 16; ++j) {
            idx[depth] = j;
            self(self, depth + 1, j + 1);
        }
    };
    recurse(recurse, 0, 0);

    if (!found || !std::isfinite(best)) {
        out.status = ExposeStatus::Degenerate;
        return out;
    }

    for (std::size_t i = 0; i < 8; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < k; ++d) {
            s += basis[d][i] * best_w[d];
        }
        out.functional.coeffs[i] = s;
    }
    out.i_max = best;
    if (best < 1.0 - kExposeBoundaryTol) {
        out.status = ExposeStatus::Interior;
    } else if (best > 1.0 + kExposeBoundaryTol) {
        out.status = ExposeStatus::ExposedCandidate;
    } else {
        out.status = ExposeStatus::Boundary;
    }
    return out;
}

enum class CertificateVerdict { ProvenExposed, Inconclusive, NotExtremal };

inline const char *to_string(CertificateVerdict v)
{
    switch (v) {
    case CertificateVerdict::ProvenExposed:
        return "PROVEN-EXPOSED";
    case CertificateVerdict::Inconclusive:
        return "INCONCLUSIVE";
    case CertificateVerdict::NotExtremal:
        return "NOT-EXTREMAL";
    }
    return "unknown";
}

/// Exposedness certificate: the LP candidate functional round-tripped through
/// the spectral maximizer.
struct ExposeCertificate {
    ExposeResult lp;
    std::optional<QuantumMaximum> maximum;
    double round_trip_distance = std::numeric_limits<double>::quiet_NaN();
    bool unique_maximizer = false;
    CertificateVerdict verdict = CertificateVerdict::Inconclusive;
};

/**
 * @brief Certifies exposedness of a realisation's point.
 *
 * PROVEN-EXPOSED when the LP functional's unique spectral maximizer
 * reproduces the input point to 1e-6; NOT-EXTREMAL only on an interior LP
 * verdict; everything else (degenerate LP, non-unique or different
 * maximizer) is INCONCLUSIVE.
 */
inline ExposeCertificate certify_exposed(const Realization &r, int grid_n = 64)
{
    ExposeCertificate cert;
    const ExposeProblem prob = build_expose_lp(r);
    cert.lp = solve_expose_lp(prob);
    if (cert.lp.status == ExposeStatus::Degenerate) {
        cert.verdict = CertificateVerdict::Inconclusive;
        return cert;
    }
    if (cert.lp.status == ExposeStatus::Interior) {
        cert.verdict = CertificateVerdict::NotExtremal;
        return cert;
    }
    cert.maximum = maximize_quantum_value(cert.lp.functional, grid_n);
    cert.unique_maximizer = cert.maximum->unique;
    const ProbabilityPoint reached = point_from_realization(cert.maximum->realization);
    cert.round_trip_distance = max_abs_component_difference(prob.point, reached);
    cert.verdict = (cert.unique_maximizer && cert.round_trip_distance <= 1e-6)
                       ? CertificateVerdict::ProvenExposed
                       : CertificateVerdict::Inconclusive;
    return cert;
}

} // namespace chsh
