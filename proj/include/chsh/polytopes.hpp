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

#include <optional>
#include <vector>

namespace chsh {

/// Relative tolerance for counting a vertex among the maximizers of a functional.
inline constexpr double kMaximizerTieTol = 1e-12;

/// A Bell functional F in R^8, ordered as the point components:
/// two Alice marginal coefficients, two Bob marginal coefficients, four
/// correlator coefficients.
struct Functional {
    std::array<double, 8> coeffs{};

    double value(const ProbabilityPoint &p) const
    {
        const auto v = p.as_vector();
        double s = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            s += coeffs[i] * v[i];
        }
        return s;
    }
};

/// Local / non-signalling / (optional) quantum values of a functional.
struct FunctionalValues {
    double beta_l = 0.0;
    double beta_ns = 0.0;
    std::optional<double> beta_q; // filled by the spectral module when known
    std::vector<int> maximizers;  // deterministic-vertex indices attaining beta_l
};

/**
 * @brief The 16 deterministic points (local-polytope vertices).
 *
 * Enumeration order is frozen: index i counts (c0, c1, d0, d1) in binary with
 * c0 the most significant bit and +1 mapped to bit 0, so index 0 is the
 * all-plus point and index 15 the all-minus one.
 */
inline const std::array<ProbabilityPoint, 16> &deterministic_points()
{
    static const std::array<ProbabilityPoint, 16> pts = [] {
        std::array<ProbabilityPoint, 16> out{};
        for (int i = 0; i < 16; ++i) {
            const double c0 = (i & 8) ? -1.0 : 1.0;
            const double c1 = (i & 4) ? -1.0 : 1.0;
            const double d0 = (i & 2) ? -1.0 : 1.0;
            const double d1 = (i & 1) ? -1.0 : 1.0;
            out[static_cast<std::size_t>(i)] = ProbabilityPoint::unchecked(
                {c0, c1, d0, d1}, {c0 * d0, c0 * d1, c1 * d0, c1 * d1});
        }
        return out;
    }();
    return pts;
}

/**
 * @brief The 8 PR boxes (the extra non-signalling vertices).
 *
 * Points (0,0,0,0,e1,e2,e3,e4) with e1*e2*e3*e4 = -1, enumerated by counting
 * (e1,e2,e3,e4) in binary with e1 most significant and +1 mapped to bit 0,
 * keeping the odd-sign patterns in counting order.
 */
inline const std::array<ProbabilityPoint, 8> &pr_boxes()
{
    static const std::array<ProbabilityPoint, 8> pts = [] {
        std::array<ProbabilityPoint, 8> out{};
        std::size_t n = 0;
        for (int i = 0; i < 16; ++i) {
            const double e1 = (i & 8) ? -1.0 : 1.0;
            const double e2 = (i & 4) ? -1.0 : 1.0;
            const double e3 = (i & 2) ? -1.0 : 1.0;
            const double e4 = (i & 1) ? -1.0 : 1.0;
            if (e1 * e2 * e3 * e4 < 0.0) {
                out[n++] = ProbabilityPoint::unchecked({0, 0, 0, 0}, {e1, e2, e3, e4});
            }
        }
        return out;
    }();
    return pts;
}

/// beta_L = max of F.P over the 16 deterministic points, with every index
/// attaining the maximum (ties within kMaximizerTieTol relative).
inline FunctionalValues local_value(const Functional &f)
{
    const auto &det = deterministic_points();
    FunctionalValues out;
    out.beta_l = f.value(det[0]);
    for (int i = 1; i < 16; ++i) {
        out.beta_l = std::max(out.beta_l, f.value(det[static_cast<std::size_t>(i)]));
    }
    const double tie = kMaximizerTieTol * std::max(1.0, std::abs(out.beta_l));
    for (int i = 0; i < 16; ++i) {
        if (f.value(det[static_cast<std::size_t>(i)]) >= out.beta_l - tie) {
            out.maximizers.push_back(i);
        }
    }
    out.beta_ns = out.beta_l;
    for (const auto &p : pr_boxes()) {
        out.beta_ns = std::max(out.beta_ns, f.value(p));
    }
    return out;
}

/// Max of F.P over all 24 non-signalling vertices.
inline double nonsignalling_value(const Functional &f)
{
    return local_value(f).beta_ns;
}

/// One non-negativity facet: label (a,b,x,y) plus the residual
/// 1 + (-1)^a<A_x> + (-1)^b<B_y> + (-1)^{a+b}<A_xB_y>  (4x the probability).
struct FacetResidual {
    int a = 0, b = 0, x = 0, y = 0;
    double residual = 0.0;

    bool on_facet(double tol = kPointTol) const { return std::abs(residual) < tol; }
};

inline std::array<FacetResidual, 16> facet_residuals(const ProbabilityPoint &p)
{
    std::array<FacetResidual, 16> out{};
    std::size_t n = 0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double sa = a ? -1.0 : 1.0;
                    const double sb = b ? -1.0 : 1.0;
                    out[n++] = FacetResidual{
                        a, b, x, y,
                        1.0 + sa * p.alice(x) + sb * p.bob(y) + sa * sb * p.correlator(x, y)};
                }
            }
        }
    }
    return out;
}

/// A convex decomposition of a point into at most three deterministic vertices.
struct LocalDecomposition {
    std::array<double, 3> weights{};
    std::array<int, 3> vertex_indices{}; // into deterministic_points()
    double reconstruction_error = 0.0;
};

/**
 * @brief Decomposes a degenerate-facet point into three deterministic points.
 *
 * Expects the form P_E = (1, cos a1, 1, cos b1, 1, cos b1, cos a1,
 * 1 - |cos a1 - cos b1|); returns nullopt for anything else.  The weights are
 * ((1+cos b1)/2, (cos a1-cos b1)/2, (1-cos a1)/2) against the all-plus vertex,
 * the d1-flipped vertex and the (c1,d1)-flipped vertex, mirrored when
 * cos a1 < cos b1.
 */
inline std::optional<LocalDecomposition> local_decomposition_witness(const ProbabilityPoint &p,
                                                                     double tol = 1e-9)
{
    const double ca = p.alice(1);
    const double cb = p.bob(1);
    if (std::abs(ca) > 1.0 + tol || std::abs(cb) > 1.0 + tol) {
        return std::nullopt;
    }
    const std::array<double, 8> expected{
        1.0, ca, 1.0, cb, 1.0, cb, ca, 1.0 - std::abs(ca - cb)};
    const auto v = p.as_vector();
    for (std::size_t i = 0; i < 8; ++i) {
        if (std::abs(v[i] - expected[i]) > tol) {
            return std::nullopt;
        }
    }

    LocalDecomposition d;
    if (ca >= cb) {
        d.weights = {0.5 * (1.0 + cb), 0.5 * (ca - cb), 0.5 * (1.0 - ca)};
        d.vertex_indices = {0, 1, 5}; // (1,1,1,1), (1,1,1,-1), (1,-1,1,-1)
    } else {
        d.weights = {0.5 * (1.0 + ca), 0.5 * (cb - ca), 0.5 * (1.0 - cb)};
        d.vertex_indices = {0, 4, 5}; // (1,1,1,1), (1,-1,1,1), (1,-1,1,-1)
    }

    const auto &det = deterministic_points();
    double err = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        double rec = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            rec += d.weights[k] * det[static_cast<std::size_t>(d.vertex_indices[k])].as_vector()[i];
        }
        err = std::max(err, std::abs(rec - v[i]));
    }
    d.reconstruction_error = err;
    if (err > 1e-12) {
        return std::nullopt;
    }
    return d;
}

/// Largest CHSH combination |s.C| over the eight odd-sign patterns; the point
/// is nonlocal iff this exceeds 2.
inline double chsh_value(const ProbabilityPoint &p)
{
    double best = 0.0;
    for (const auto &box : pr_boxes()) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) {
            s += box.correlators[static_cast<std::size_t>(i)] *
                 p.correlators[static_cast<std::size_t>(i)];
        }
        best = std::max(best, std::abs(s));
    }
    return best;
}

inline bool is_nonlocal(const ProbabilityPoint &p, double tol = 1e-12)
{
    return chsh_value(p) > 2.0 + tol;
}

} // namespace chsh
