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

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chsh {

/// Saturation and threshold comparisons all use this absolute tolerance.
/// The source criteria state exact equalities; the floating-point width of
/// "equal" here is an engineering choice and is echoed in reports.
inline constexpr double kSaturationTol = 1e-9;

/// Marginals at or below this gate route a point to the zero-marginal branch.
inline constexpr double kZeroMarginalGate = 1e-10;

/// Absolute tolerance for matching a common root z across the four quadratics.
inline constexpr double kCommonRootTol = 1e-9;

// ---------------------------------------------------------------------------
// Per-pair quadratics for z = sin^2(theta)
// ---------------------------------------------------------------------------

/// Coefficients, roots and discriminants of the four quadratics
/// z^2 - b_xy z + c_xy^2 = 0 whose common root is sin^2(theta).
struct RealizationQuadratic {
    double b[2][2] = {};
    double c[2][2] = {};
    double discriminant[2][2] = {};
    double z_plus[2][2] = {};
    double z_minus[2][2] = {};
};

inline RealizationQuadratic realization_quadratic(const ProbabilityPoint &p)
{
    RealizationQuadratic q;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double corr = p.correlator(x, y);
            const double ma = p.alice(x);
            const double mb = p.bob(y);
            q.b[x][y] = corr * corr - ma * ma - mb * mb + 1.0;
            q.c[x][y] = corr - ma * mb;
            q.discriminant[x][y] = q.b[x][y] * q.b[x][y] - 4.0 * q.c[x][y] * q.c[x][y];
            const double root = std::sqrt(std::max(q.discriminant[x][y], 0.0));
            q.z_plus[x][y] = 0.5 * (q.b[x][y] + root);
            q.z_minus[x][y] = 0.5 * (q.b[x][y] - root);
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// TLM / STLM saturation
// ---------------------------------------------------------------------------

struct TlmResult {
    bool saturated = false;
    double residual = 0.0;
};

/// residual = |C00 C01 - C10 C11| - sqrt((1-C00^2)(1-C01^2))
///                                - sqrt((1-C10^2)(1-C11^2)).
inline TlmResult tlm_saturation(const std::array<double, 4> &correlators)
{
    std::array<double, 4> c{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(correlators[i]) > 1.0 + 1e-9) {
            throw std::invalid_argument("tlm_saturation: |correlator| must not exceed 1");
        }
        c[i] = std::clamp(correlators[i], -1.0, 1.0);
    }
    const double lhs = std::abs(c[0] * c[1] - c[2] * c[3]);
    const double rhs = std::sqrt((1.0 - c[0] * c[0]) * (1.0 - c[1] * c[1])) +
                       std::sqrt((1.0 - c[2] * c[2]) * (1.0 - c[3] * c[3]));
    TlmResult r;
    r.residual = lhs - rhs;
    r.saturated = std::abs(r.residual) < kSaturationTol;
    return r;
}

/// The normalization quantities of the scaled TLM criterion,
///   D_A[y] = sqrt(<B_y>^2 + sin^2 theta),  D_B[x] = sqrt(<A_x>^2 + sin^2 theta),
/// with the two normalized correlator tables C~_xy = <A_xB_y>/D.
struct StlmQuantities {
    std::array<double, 2> d_a{}; // indexed by y
    std::array<double, 2> d_b{}; // indexed by x
    double c_tilde_b[2][2] = {}; // normalized by d_b[x]
    double c_tilde_a[2][2] = {}; // normalized by d_a[y]
};

inline StlmQuantities stlm_quantities(const Realization &r)
{
    const ProbabilityPoint p = point_from_realization(r);
    const double s2 = std::sin(r.theta) * std::sin(r.theta);
    StlmQuantities q;
    for (int y = 0; y < 2; ++y) {
        q.d_a[static_cast<std::size_t>(y)] = std::sqrt(p.bob(y) * p.bob(y) + s2);
    }
    for (int x = 0; x < 2; ++x) {
        q.d_b[static_cast<std::size_t>(x)] = std::sqrt(p.alice(x) * p.alice(x) + s2);
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double corr = p.correlator(x, y);
            const double db = q.d_b[static_cast<std::size_t>(x)];
            const double da = q.d_a[static_cast<std::size_t>(y)];
            // |corr| <= D holds for canonical realisations; D ~ 0 forces corr ~ 0
            q.c_tilde_b[x][y] = db < 1e-15 ? 0.0 : std::clamp(corr / db, -1.0, 1.0);
            q.c_tilde_a[x][y] = da < 1e-15 ? 0.0 : std::clamp(corr / da, -1.0, 1.0);
        }
    }
    return q;
}

struct StlmResult {
    bool saturated = false;
    std::array<double, 2> residuals{}; // D_B-normalized table, D_A-normalized table
    StlmQuantities quantities;
};

/// Saturation of the scaled TLM inequality for both normalization choices.
inline StlmResult stlm_saturation(const Realization &r)
{
    StlmResult out;
    out.quantities = stlm_quantities(r);
    const auto &q = out.quantities;
    out.residuals[0] = tlm_saturation({q.c_tilde_b[0][0], q.c_tilde_b[0][1],
                                       q.c_tilde_b[1][0], q.c_tilde_b[1][1]})
                           .residual;
    out.residuals[1] = tlm_saturation({q.c_tilde_a[0][0], q.c_tilde_a[0][1],
                                       q.c_tilde_a[1][0], q.c_tilde_a[1][1]})
                           .residual;
    out.saturated = std::abs(out.residuals[0]) < kSaturationTol &&
                    std::abs(out.residuals[1]) < kSaturationTol;
    return out;
}

// ---------------------------------------------------------------------------
// Threshold angle theta*
// ---------------------------------------------------------------------------

/// sin(theta*) together with the attaining pair and branch.  degenerate marks
/// the presence of a pair with |cos a_x cos b_y| = 1 (excluded from the max).
struct ThresholdResult {
    double sin_theta_star = 0.0;
    int x = -1, y = -1;   // attaining pair, -1 when no admissible pair exists
    int branch = -1;      // 0: s/(1-c), 1: -s/(1+c)
    bool degenerate = false;
};

inline ThresholdResult theta_star(double a0, double a1, double b0, double b1)
{
    const std::array<double, 2> as{a0, a1};
    const std::array<double, 2> bs{b0, b1};
    ThresholdResult out;
    double best = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double c = std::cos(as[static_cast<std::size_t>(x)]) *
                             std::cos(bs[static_cast<std::size_t>(y)]);
            if (std::abs(std::abs(c) - 1.0) < 1e-12) {
                out.degenerate = true;
                continue;
            }
            const double s = std::sin(as[static_cast<std::size_t>(x)]) *
                             std::sin(bs[static_cast<std::size_t>(y)]);
            const double v0 = s / (1.0 - c);
            const double v1 = -s / (1.0 + c);
            if (v0 > best) {
                best = v0;
                out.x = x;
                out.y = y;
                out.branch = 0;
            }
            if (v1 > best) {
                best = v1;
                out.x = x;
                out.y = y;
                out.branch = 1;
            }
        }
    }
    if (!std::isfinite(best)) {
        best = 0.0; // every pair degenerate: the whole ellipse sits on facets
    }
    out.sin_theta_star = std::clamp(best, 0.0, 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Ellipse picture
// ---------------------------------------------------------------------------

/// Fixed-observable decomposition P(theta) = P0 + cos(theta) Pm + sin(theta) Pc.
struct EllipseDecomposition {
    std::array<double, 8> p0{};
    std::array<double, 8> pm{};
    std::array<double, 8> pc{};

    std::array<double, 8> evaluate(double theta) const
    {
        const double ct = std::cos(theta), st = std::sin(theta);
        std::array<double, 8> out{};
        for (std::size_t i = 0; i < 8; ++i) {
            out[i] = p0[i] + ct * pm[i] + st * pc[i];
        }
        return out;
    }
};

inline EllipseDecomposition ellipse_decomposition(double a0, double a1, double b0, double b1)
{
    const std::array<double, 2> ca{std::cos(a0), std::cos(a1)};
    const std::array<double, 2> sa{std::sin(a0), std::sin(a1)};
    const std::array<double, 2> cb{std::cos(b0), std::cos(b1)};
    const std::array<double, 2> sb{std::sin(b0), std::sin(b1)};
    EllipseDecomposition e;
    e.pm = {ca[0], ca[1], cb[0], cb[1], 0, 0, 0, 0};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            e.p0[static_cast<std::size_t>(4 + 2 * x + y)] = ca[x] * cb[y];
            e.pc[static_cast<std::size_t>(4 + 2 * x + y)] = sa[x] * sb[y];
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Facet touches of the ellipse
// ---------------------------------------------------------------------------

/// Outcome pair (a,b) whose probability p(ab|xy) vanishes at the reported
/// Schmidt angle; for_all_theta marks the C = 0 case where the probability
/// vanishes identically.
struct FacetTouch {
    int a = 0, b = 0;
    double sin_theta = 0.0;
    double cos_theta = 0.0;
    bool for_all_theta = false;
};

/// Solves p(ab|xy) = 0 for theta at fixed observable angles (a_x, b_y):
/// with A = (-1)^{a+b} sin a_x sin b_y, B = (-1)^a cos a_x + (-1)^b cos b_y
/// and C = 1 + (-1)^{a+b} cos a_x cos b_y, a touch requires A <= 0, B <= 0
/// and gives sin(theta) = -A/C, cos(theta) = -B/C (note A^2 + B^2 = C^2).
inline std::vector<FacetTouch> facet_touch_angles(double ax, double by)
{
    std::vector<FacetTouch> out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double sa = a ? -1.0 : 1.0;
            const double sb = b ? -1.0 : 1.0;
            const double parity = sa * sb;
            const double A = parity * std::sin(ax) * std::sin(by);
            const double B = sa * std::cos(ax) + sb * std::cos(by);
            const double C = 1.0 + parity * std::cos(ax) * std::cos(by);
            if (C < 1e-12) {
                // A^2 + B^2 = C^2 forces A = B = 0: on the facet for every theta
                out.push_back({a, b, 0.0, 0.0, true});
                continue;
            }
            if (A <= 1e-12 && B <= 1e-12) {
                out.push_back({a, b, std::clamp(-A / C, 0.0, 1.0),
                               std::clamp(-B / C, 0.0, 1.0), false});
            }
        }
    }
    return out;
}

/// Residuals of Delta_xy = prod_ab [4 p(ab|xy)], one per setting pair (x,y)
/// in row-major order.
inline std::array<double, 4> discriminant_probability_identity(const ProbabilityPoint &p)
{
    const RealizationQuadratic q = realization_quadratic(p);
    std::array<double, 4> out{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double prod = 1.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double sa = a ? -1.0 : 1.0;
                    const double sb = b ? -1.0 : 1.0;
                    prod *= 1.0 + sa * p.alice(x) + sb * p.bob(y) +
                            sa * sb * p.correlator(x, y);
                }
            }
            out[static_cast<std::size_t>(2 * x + y)] = q.discriminant[x][y] - prod;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Realisation reconstruction (Lemma 1 + sign algorithm)
// ---------------------------------------------------------------------------

namespace detail {

/// A few Gauss-Newton steps of (theta, a0, a1, b0, b1) against the target
/// point.  The closed-form extraction loses digits near double roots of the
/// z-quadratics (facet-adjacent points); this polish restores them.
inline Realization polish_realization(Realization r, const ProbabilityPoint &target)
{
    std::array<double, 5> v{r.theta, r.a0, r.a1, r.b0, r.b1};
    auto residual = [&target](const std::array<double, 5> &w) {
        const ProbabilityPoint p =
            point_from_realization(Realization(w[0], w[1], w[2], w[3], w[4]));
        std::array<double, 8> res{};
        const auto a = p.as_vector();
        const auto b = target.as_vector();
        for (std::size_t i = 0; i < 8; ++i) {
            res[i] = a[i] - b[i];
        }
        return res;
    };
    auto max_abs = [](const std::array<double, 8> &res) {
        double m = 0.0;
        for (const double x : res) {
            m = std::max(m, std::abs(x));
        }
        return m;
    };

    std::array<double, 8> res = residual(v);
    double err = max_abs(res);
    for (int iter = 0; iter < 12 && err > 1e-14; ++iter) {
        const auto jac = point_jacobian(Realization(v[0], v[1], v[2], v[3], v[4]));
        // normal equations for the 8x5 least-squares step
        std::array<std::array<double, 5>, 5> jtj{};
        std::array<double, 5> jtr{};
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 8; ++k) {
                    s += jac[i][k] * jac[j][k];
                }
                jtj[i][j] = s;
            }
            jtj[i][i] += 1e-14;
            double s = 0.0;
            for (std::size_t k = 0; k < 8; ++k) {
                s += jac[i][k] * res[k];
            }
            jtr[i] = s;
        }
        if (!solve_linear(jtj, jtr)) {
            break;
        }
        bool improved = false;
        double scale = 1.0;
        for (int halving = 0; halving < 4 && !improved; ++halving, scale *= 0.5) {
            std::array<double, 5> w = v;
            for (std::size_t i = 0; i < 5; ++i) {
                w[i] -= scale * jtr[i];
            }
            w[0] = std::clamp(w[0], 0.0, kPi / 2);
            const auto nres = residual(w);
            const double nerr = max_abs(nres);
            if (nerr < err) {
                v = w;
                res = nres;
                err = nerr;
                improved = true;
            }
        }
        if (!improved) {
            break;
        }
    }
    return Realization(v[0], v[1], v[2], v[3], v[4]);
}

} // namespace detail

/**
 * @brief All canonical two-qubit realisations of a point with nonzero marginals.
 *
 * For each root z common to the four quadratics (matched within
 * kCommonRootTol) that passes <A_x>^2 <= 1-z, <B_y>^2 <= 1-z and the product
 * condition, reconstructs theta in [0, pi/2), the cosines from the marginals
 * and the sine signs by propagation from sin a0 >= 0.  Zero or one or two
 * realisations can come back; each reproduces the input point to 1e-9.
 */
inline std::vector<Realization> realizations_from_point(const ProbabilityPoint &p)
{
    double max_marginal = 0.0;
    for (const double m : p.marginals) {
        max_marginal = std::max(max_marginal, std::abs(m));
    }
    if (max_marginal <= kZeroMarginalGate) {
        throw std::invalid_argument("realizations_from_point: all marginals vanish; "
                                    "use zero_marginal_realization");
    }

    const RealizationQuadratic q = realization_quadratic(p);
    std::vector<double> candidates;
    for (const double z : {q.z_plus[0][0], q.z_minus[0][0]}) {
        bool fresh = true;
        for (const double w : candidates) {
            if (std::abs(z - w) <= kCommonRootTol) {
                fresh = false;
            }
        }
        if (fresh) {
            candidates.push_back(z);
        }
    }

    std::vector<Realization> out;
    for (double z : candidates) {
        bool common = true;
        for (int x = 0; x < 2 && common; ++x) {
            for (int y = 0; y < 2 && common; ++y) {
                const double d = std::min(std::abs(z - q.z_plus[x][y]),
                                          std::abs(z - q.z_minus[x][y]));
                if (d > kCommonRootTol) {
                    common = false;
                }
            }
        }
        if (!common || z < -kCommonRootTol || z > 1.0 + kCommonRootTol) {
            continue;
        }
        z = std::clamp(z, 0.0, 1.0);

        bool bounded = true;
        for (int x = 0; x < 2; ++x) {
            bounded = bounded && p.alice(x) * p.alice(x) <= 1.0 - z + 1e-12;
        }
        for (int y = 0; y < 2; ++y) {
            bounded = bounded && p.bob(y) * p.bob(y) <= 1.0 - z + 1e-12;
        }
        if (!bounded || 1.0 - z < 1e-15) {
            continue;
        }

        double prod = 1.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                prod *= p.correlator(x, y) - p.alice(x) * p.bob(y) / (1.0 - z);
            }
        }
        if (prod < -1e-12) {
            continue;
        }

        const double theta = std::asin(std::sqrt(z));
        const double ct = std::cos(theta), st = std::sin(theta);
        std::array<double, 2> ca{}, sa_abs{}, cb{}, sb_abs{};
        for (int x = 0; x < 2; ++x) {
            ca[static_cast<std::size_t>(x)] = std::clamp(p.alice(x) / ct, -1.0, 1.0);
            sa_abs[static_cast<std::size_t>(x)] =
                std::sqrt(1.0 - ca[static_cast<std::size_t>(x)] * ca[static_cast<std::size_t>(x)]);
        }
        for (int y = 0; y < 2; ++y) {
            cb[static_cast<std::size_t>(y)] = std::clamp(p.bob(y) / ct, -1.0, 1.0);
            sb_abs[static_cast<std::size_t>(y)] =
                std::sqrt(1.0 - cb[static_cast<std::size_t>(y)] * cb[static_cast<std::size_t>(y)]);
        }

        // sine products s_xy = (<A_xB_y> - cos a_x cos b_y)/sin(theta)
        double s[2][2] = {};
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                s[x][y] = st > 1e-15
                              ? (p.correlator(x, y) - ca[static_cast<std::size_t>(x)] *
                                                          cb[static_cast<std::size_t>(y)]) /
                                    st
                              : 0.0;
            }
        }

        // seed sin a0 >= 0 and propagate signs where the products are resolvable
        constexpr double sign_eps = 1e-7;
        std::array<double, 2> sgn_a{1.0, 1.0}, sgn_b{1.0, 1.0};
        const int seed = sa_abs[0] > sign_eps ? 0 : 1;
        for (int y = 0; y < 2; ++y) {
            if (sb_abs[static_cast<std::size_t>(y)] > sign_eps &&
                std::abs(s[seed][y]) > sign_eps) {
                sgn_b[static_cast<std::size_t>(y)] = s[seed][y] < 0.0 ? -1.0 : 1.0;
            }
        }
        const int other = 1 - seed;
        for (int y = 0; y < 2; ++y) {
            if (sb_abs[static_cast<std::size_t>(y)] > sign_eps &&
                std::abs(s[other][y]) > sign_eps) {
                sgn_a[static_cast<std::size_t>(other)] =
                    (s[other][y] < 0.0 ? -1.0 : 1.0) * sgn_b[static_cast<std::size_t>(y)];
                break;
            }
        }

        Realization r(theta,
                      std::atan2(sgn_a[0] * sa_abs[0], ca[0]),
                      std::atan2(sgn_a[1] * sa_abs[1], ca[1]),
                      std::atan2(sgn_b[0] * sb_abs[0], cb[0]),
                      std::atan2(sgn_b[1] * sb_abs[1], cb[1]));
        r = detail::polish_realization(r, p);
        if (max_abs_component_difference(point_from_realization(r), p) <= 1e-9) {
            out.push_back(r);
        }
    }
    return out;
}

/**
 * @brief Maximally-entangled reconstruction for zero-marginal points.
 *
 * Tries theta = pi/2, a0 = 0, solving the four correlators as cos(a_x - b_y);
 * returns nullopt when no angle assignment matches (e.g. a PR box).
 */
inline std::optional<Realization> zero_marginal_realization(const ProbabilityPoint &p)
{
    for (const double m : p.marginals) {
        if (std::abs(m) > kZeroMarginalGate) {
            throw std::invalid_argument(
                "zero_marginal_realization: marginals are not all zero");
        }
    }
    for (const double c : p.correlators) {
        if (std::abs(c) > 1.0 + kSaturationTol) {
            return std::nullopt;
        }
    }
    const double c00 = std::clamp(p.correlator(0, 0), -1.0, 1.0);
    const double c01 = std::clamp(p.correlator(0, 1), -1.0, 1.0);
    const double c10 = std::clamp(p.correlator(1, 0), -1.0, 1.0);
    const double b0 = std::acos(c00);
    const double phi01 = std::acos(c01);
    const double phi10 = std::acos(c10);
    for (const double a1 : {b0 + phi10, b0 - phi10}) {
        for (const double b1 : {phi01, -phi01}) {
            if (std::abs(std::cos(a1 - b1) - p.correlator(1, 1)) < kSaturationTol) {
                return Realization(kPi / 2, 0.0, a1, b0, b1);
            }
        }
    }
    return std::nullopt;
}

/// Dispatches a point to the Lemma-1 or zero-marginal branch.
struct ReconstructionResult {
    std::string branch;                   // "lemma1" or "zero-marginal"
    std::vector<Realization> realizations;
};

inline ReconstructionResult realize_point(const ProbabilityPoint &p)
{
    double max_marginal = 0.0;
    for (const double m : p.marginals) {
        max_marginal = std::max(max_marginal, std::abs(m));
    }
    ReconstructionResult out;
    if (max_marginal > kZeroMarginalGate) {
        out.branch = "lemma1";
        out.realizations = realizations_from_point(p);
    } else {
        out.branch = "zero-marginal";
        if (auto r = zero_marginal_realization(p)) {
            out.realizations.push_back(*r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The two extremality conjectures
// ---------------------------------------------------------------------------

/// Ishizaka-style verdict: STLM saturation plus the greater-solutions
/// equality sin^2(theta) = z+_xy for all pairs.
struct Conjecture1Report {
    bool extremal = false;
    bool nonlocal = false;
    StlmResult stlm;
    double z = 0.0;                    // sin^2 theta of the candidate
    std::array<double, 4> z_plus{};    // row-major (x,y)
    double max_z_deviation = 0.0;      // max |z - z+_xy|
    bool z_condition = false;
};

inline Conjecture1Report conjecture1_extremal(const Realization &r)
{
    Conjecture1Report rep;
    const ProbabilityPoint p = point_from_realization(r);
    rep.nonlocal = is_nonlocal(p);
    rep.stlm = stlm_saturation(r);
    const RealizationQuadratic q = realization_quadratic(p);
    rep.z = std::sin(r.theta) * std::sin(r.theta);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            rep.z_plus[static_cast<std::size_t>(2 * x + y)] = q.z_plus[x][y];
            rep.max_z_deviation =
                std::max(rep.max_z_deviation, std::abs(rep.z - q.z_plus[x][y]));
        }
    }
    rep.z_condition = rep.max_z_deviation < kSaturationTol;
    rep.extremal = rep.nonlocal && rep.stlm.saturated && rep.z_condition;
    return rep;
}

/// TLM-at-maximal-entanglement plus threshold verdict: the observables must
/// allow extremality at theta = pi/2 and the state must carry enough
/// entanglement, sin(theta) >= sin(theta*).
struct Conjecture2Report {
    bool extremal = false;
    bool nonlocal = false;
    TlmResult tlm;                 // evaluated on cos(a_x - b_y)
    ThresholdResult threshold;
    double sin_theta = 0.0;
};

inline Conjecture2Report conjecture2_extremal(const Realization &r)
{
    Conjecture2Report rep;
    const ProbabilityPoint p = point_from_realization(r);
    rep.nonlocal = is_nonlocal(p);
    rep.tlm = tlm_saturation({std::cos(r.a0 - r.b0), std::cos(r.a0 - r.b1),
                              std::cos(r.a1 - r.b0), std::cos(r.a1 - r.b1)});
    rep.threshold = theta_star(r.a0, r.a1, r.b0, r.b1);
    rep.sin_theta = std::sin(r.theta);
    rep.extremal = rep.nonlocal && rep.tlm.saturated &&
                   rep.sin_theta >= rep.threshold.sin_theta_star - kSaturationTol;
    return rep;
}

/// Both sides of the Appendix-F equivalence for one realisation.
struct EquivalenceCheck {
    bool z_side = false;      // sin^2 theta equals every z+_xy
    bool theta_side = false;  // sin theta >= sin theta*
    bool agree = false;
    double max_z_deviation = 0.0;
    double sin_theta = 0.0;
    double sin_theta_star = 0.0;
};

inline EquivalenceCheck conjecture_equivalence_check(const Realization &r)
{
    EquivalenceCheck out;
    const ProbabilityPoint p = point_from_realization(r);
    const RealizationQuadratic q = realization_quadratic(p);
    const double z = std::sin(r.theta) * std::sin(r.theta);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            out.max_z_deviation = std::max(out.max_z_deviation, std::abs(z - q.z_plus[x][y]));
        }
    }
    out.z_side = out.max_z_deviation < kSaturationTol;
    out.sin_theta = std::sin(r.theta);
    out.sin_theta_star = theta_star(r.a0, r.a1, r.b0, r.b1).sin_theta_star;
    out.theta_side = out.sin_theta >= out.sin_theta_star;
    out.agree = out.z_side == out.theta_side;
    return out;
}

// ---------------------------------------------------------------------------
// Degenerate-facet convex decomposition witness
// ---------------------------------------------------------------------------

/// Constructive non-extremality witness: P(theta) as a convex combination of
/// the threshold point P*, the local point P_E (itself decomposed into three
/// deterministic vertices) and the theta = 0 endpoint of the ellipse.
struct DecompositionWitness {
    double sin_theta_star = 0.0;
    std::array<double, 3> weights{};       // for p_star, p_e, p_theta0
    ProbabilityPoint p_star;
    ProbabilityPoint p_e;
    ProbabilityPoint p_theta0;
    std::array<double, 3> p_e_weights{};   // P_E over three deterministic points
    std::array<ProbabilityPoint, 3> p_e_vertices;
    double reconstruction_error = 0.0;
};

namespace detail {

/// Point relabeling: optional setting swaps followed by observable sign flips
/// (A_x -> -A_x etc.).  All are linear and involutive on the 8-vector.
struct PointRelabel {
    bool swap_alice = false;
    bool swap_bob = false;
    std::array<bool, 2> flip_a{false, false}; // post-swap labels
    std::array<bool, 2> flip_b{false, false};

    ProbabilityPoint forward(const ProbabilityPoint &p) const
    {
        std::array<double, 4> m = p.marginals;
        std::array<double, 4> c = p.correlators;
        if (swap_alice) {
            std::swap(m[0], m[1]);
            std::swap(c[0], c[2]);
            std::swap(c[1], c[3]);
        }
        if (swap_bob) {
            std::swap(m[2], m[3]);
            std::swap(c[0], c[1]);
            std::swap(c[2], c[3]);
        }
        apply_flips(m, c);
        return ProbabilityPoint::unchecked(m, c);
    }

    ProbabilityPoint inverse(const ProbabilityPoint &p) const
    {
        std::array<double, 4> m = p.marginals;
        std::array<double, 4> c = p.correlators;
        apply_flips(m, c);
        if (swap_bob) {
            std::swap(m[2], m[3]);
            std::swap(c[0], c[1]);
            std::swap(c[2], c[3]);
        }
        if (swap_alice) {
            std::swap(m[0], m[1]);
            std::swap(c[0], c[2]);
            std::swap(c[1], c[3]);
        }
        return ProbabilityPoint::unchecked(m, c);
    }

  private:
    void apply_flips(std::array<double, 4> &m, std::array<double, 4> &c) const
    {
        for (int x = 0; x < 2; ++x) {
            if (flip_a[static_cast<std::size_t>(x)]) {
                m[static_cast<std::size_t>(x)] = -m[static_cast<std::size_t>(x)];
                c[static_cast<std::size_t>(2 * x)] = -c[static_cast<std::size_t>(2 * x)];
                c[static_cast<std::size_t>(2 * x + 1)] = -c[static_cast<std::size_t>(2 * x + 1)];
            }
        }
        for (int y = 0; y < 2; ++y) {
            if (flip_b[static_cast<std::size_t>(y)]) {
                m[static_cast<std::size_t>(2 + y)] = -m[static_cast<std::size_t>(2 + y)];
                c[static_cast<std::size_t>(y)] = -c[static_cast<std::size_t>(y)];
                c[static_cast<std::size_t>(2 + y)] = -c[static_cast<std::size_t>(2 + y)];
            }
        }
    }
};

} // namespace detail

/**
 * @brief Appendix-G witness for realisations with a fully degenerate pair.
 *
 * Applicable when some pair has sin a_x = sin b_y = 0 (the ellipse lies on
 * two non-negativity facets for every theta) and sin(theta) < sin(theta*).
 * The input is relabeled to the canonical frame a0 = b0 = 0 with
 * sin a1, sin b1 >= 0, the witness is built there and mapped back.
 */
inline std::optional<DecompositionWitness> decomposition_witness(const Realization &r)
{
    constexpr double axis_tol = 1e-10;
    const std::array<double, 2> as{r.a0, r.a1};
    const std::array<double, 2> bs{r.b0, r.b1};

    int deg_x = -1, deg_y = -1;
    for (int x = 0; x < 2 && deg_x < 0; ++x) {
        for (int y = 0; y < 2; ++y) {
            if (std::abs(std::sin(as[static_cast<std::size_t>(x)])) <= axis_tol &&
                std::abs(std::sin(bs[static_cast<std::size_t>(y)])) <= axis_tol) {
                deg_x = x;
                deg_y = y;
                break;
            }
        }
    }
    if (deg_x < 0) {
        return std::nullopt;
    }

    // canonical frame: degenerate pair at (0,0), angles a0 = b0 = 0
    double a0c = as[static_cast<std::size_t>(deg_x)];
    double a1c = as[static_cast<std::size_t>(1 - deg_x)];
    double b0c = bs[static_cast<std::size_t>(deg_y)];
    double b1c = bs[static_cast<std::size_t>(1 - deg_y)];

    detail::PointRelabel map;
    map.swap_alice = deg_x == 1;
    map.swap_bob = deg_y == 1;
    if (std::cos(a0c) < 0.0) {
        map.flip_a[0] = true;
        a0c = normalize_angle(a0c + kPi);
    }
    if (std::cos(b0c) < 0.0) {
        map.flip_b[0] = true;
        b0c = normalize_angle(b0c + kPi);
    }
    // make the product sin(a1) sin(b1) non-negative, then both sines
    if (std::sin(a1c) * std::sin(b1c) < 0.0) {
        map.flip_b[1] = true;
        b1c = normalize_angle(b1c + kPi);
    }
    if (std::sin(a1c) < 0.0 && std::sin(b1c) < 0.0) {
        a1c = normalize_angle(-a1c);
        b1c = normalize_angle(-b1c);
        // joint sign flip of all four angles: leaves every point unchanged
    }

    const double sa1 = std::sin(a1c), sb1 = std::sin(b1c);
    const double ca1 = std::cos(a1c), cb1 = std::cos(b1c);
    if (sa1 <= axis_tol || sb1 <= axis_tol) {
        return std::nullopt; // second degenerate pair: no threshold to cross
    }

    const double sin_star = std::clamp(sa1 * sb1 / (1.0 - ca1 * cb1), 0.0, 1.0);
    const double sin_th = std::sin(r.theta);
    if (sin_th > sin_star + 1e-12) {
        return std::nullopt; // above threshold: the witness regime does not apply
    }

    const double cos_star = std::sqrt(std::max(1.0 - sin_star * sin_star, 0.0));
    const EllipseDecomposition ell = ellipse_decomposition(0.0, 0.0, a1c, b1c);

    auto to_point = [](const std::array<double, 8> &v) {
        return ProbabilityPoint::unchecked({v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]});
    };
    const ProbabilityPoint p_star_c = to_point(ell.evaluate(std::asin(sin_star)));
    const ProbabilityPoint p_zero_c = to_point(ell.evaluate(0.0));
    const ProbabilityPoint p_e_c = ProbabilityPoint::unchecked(
        {1.0, ca1, 1.0, cb1}, {1.0, cb1, ca1, 1.0 - std::abs(ca1 - cb1)});

    DecompositionWitness w;
    w.sin_theta_star = sin_star;
    if (sin_star - sin_th <= 1e-12) {
        w.weights = {1.0, 0.0, 0.0}; // boundary: the witness degenerates to P* itself
    } else {
        const double cos_th = std::cos(r.theta);
        const double w1 = (1.0 - cos_th) / (1.0 - cos_star);
        const double v_e = (1.0 - cos_star) / sin_star;
        const double w2 = (sin_th - w1 * sin_star) / v_e;
        w.weights = {w1, w2, 1.0 - w1 - w2};
    }

    const auto dec = local_decomposition_witness(p_e_c);
    if (!dec) {
        return std::nullopt; // should not happen: P_E is exactly of the required form
    }
    w.p_e_weights = dec->weights;

    w.p_star = map.inverse(p_star_c);
    w.p_e = map.inverse(p_e_c);
    w.p_theta0 = map.inverse(p_zero_c);
    const auto &det = deterministic_points();
    for (std::size_t k = 0; k < 3; ++k) {
        w.p_e_vertices[k] =
            map.inverse(det[static_cast<std::size_t>(dec->vertex_indices[k])]);
    }

    const ProbabilityPoint target = point_from_realization(r);
    double err = 0.0;
    const auto vs = w.p_star.as_vector();
    const auto ve = w.p_e.as_vector();
    const auto vz = w.p_theta0.as_vector();
    const auto vt = target.as_vector();
    for (std::size_t i = 0; i < 8; ++i) {
        const double rec = w.weights[0] * vs[i] + w.weights[1] * ve[i] + w.weights[2] * vz[i];
        err = std::max(err, std::abs(rec - vt[i]));
    }
    w.reconstruction_error = err;
    return w;
}

// ---------------------------------------------------------------------------
// Combined report
// ---------------------------------------------------------------------------

struct ExtremalityReport {
    Realization input;
    ProbabilityPoint point;
    bool nonlocal = false;
    ReconstructionResult reconstruction; // realisations recovered from the point
    Conjecture1Report conjecture1;
    Conjecture2Report conjecture2;
    bool agreement = false;
    std::optional<DecompositionWitness> witness; // present in the degenerate regime
};

inline ExtremalityReport evaluate_extremality(const Realization &r)
{
    ExtremalityReport rep;
    rep.input = r;
    rep.point = point_from_realization(r);
    rep.nonlocal = is_nonlocal(rep.point);
    rep.reconstruction = realize_point(rep.point);
    rep.conjecture1 = conjecture1_extremal(r);
    rep.conjecture2 = conjecture2_extremal(r);
    rep.agreement = rep.conjecture1.extremal == rep.conjecture2.extremal;
    if (rep.conjecture2.threshold.degenerate && !rep.conjecture2.extremal) {
        rep.witness = decomposition_witness(r);
    }
    return rep;
}

} // namespace chsh
