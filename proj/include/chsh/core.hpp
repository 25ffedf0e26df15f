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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chsh {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Absolute tolerance below which an outcome probability is accepted as
/// non-negative.  Points violating it are rejected at construction.
inline constexpr double kPointTol = 1e-9;

/// Tolerance for probability-table normalization and no-signalling checks.
inline constexpr double kTableTol = 1e-12;

/// Maps any finite angle into [0, 2pi).
inline double normalize_angle(double angle)
{
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("normalize_angle: angle must be finite");
    }
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) {
        a += kTwoPi;
    }
    // fmod can round back up to the period itself
    if (a >= kTwoPi) {
        a = 0.0;
    }
    return a;
}

/**
 * @brief Canonical two-qubit realisation (theta, a0, a1, b0, b1).
 *
 * State cos(theta/2)|00> + sin(theta/2)|11> with all observables in the X-Z
 * plane: A_x = cos(a_x) Z + sin(a_x) X and B_y likewise.  theta lives in
 * [0, pi/2]; observable angles are stored normalized into [0, 2pi).
 */
struct Realization {
    double theta = 0.0;
    double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;

    Realization() = default;

    Realization(double theta_, double a0_, double a1_, double b0_, double b1_)
        : theta(theta_), a0(normalize_angle(a0_)), a1(normalize_angle(a1_)),
          b0(normalize_angle(b0_)), b1(normalize_angle(b1_))
    {
        if (!std::isfinite(theta)) {
            throw std::invalid_argument("Realization: theta must be finite");
        }
        // absorb harmless rounding at the endpoints
        if (theta > -1e-12 && theta < 0.0) {
            theta = 0.0;
        }
        if (theta > kPi / 2 && theta < kPi / 2 + 1e-12) {
            theta = kPi / 2;
        }
        if (theta < 0.0 || theta > kPi / 2) {
            throw std::invalid_argument("Realization: theta must lie in [0, pi/2], got " +
                                        std::to_string(theta));
        }
    }

    std::array<double, 2> alice_angles() const { return {a0, a1}; }
    std::array<double, 2> bob_angles() const { return {b0, b1}; }
};

/**
 * @brief The 8-vector of CHSH statistics.
 *
 * Component order is fixed as
 *   (<A0>, <A1>, <B0>, <B1>, <A0B0>, <A0B1>, <A1B0>, <A1B1>).
 * Construction validates that all 16 outcome probabilities are >= -kPointTol;
 * use `unchecked` for raw data that is validated elsewhere.
 */
struct ProbabilityPoint {
    std::array<double, 4> marginals{};   // <A0>, <A1>, <B0>, <B1>
    std::array<double, 4> correlators{}; // <A0B0>, <A0B1>, <A1B0>, <A1B1>

    ProbabilityPoint() = default;

    ProbabilityPoint(const std::array<double, 4> &m, const std::array<double, 4> &c)
        : marginals(m), correlators(c)
    {
        const double worst = min_facet_value();
        if (!std::isfinite(worst) || worst < -kPointTol) {
            throw std::invalid_argument(
                "ProbabilityPoint: outcome probability " + std::to_string(worst / 4.0) +
                " below -tolerance; point lies outside the non-signalling set");
        }
    }

    static ProbabilityPoint unchecked(const std::array<double, 4> &m,
                                      const std::array<double, 4> &c)
    {
        ProbabilityPoint p;
        p.marginals = m;
        p.correlators = c;
        return p;
    }

    double alice(int x) const { return marginals[static_cast<std::size_t>(x)]; }
    double bob(int y) const { return marginals[static_cast<std::size_t>(2 + y)]; }
    double correlator(int x, int y) const
    {
        return correlators[static_cast<std::size_t>(2 * x + y)];
    }

    std::array<double, 8> as_vector() const
    {
        return {marginals[0],   marginals[1],   marginals[2],   marginals[3],
                correlators[0], correlators[1], correlators[2], correlators[3]};
    }

    static ProbabilityPoint from_vector(const std::array<double, 8> &v)
    {
        return ProbabilityPoint({v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]});
    }

    /// Smallest value of 1 + (-1)^a<A_x> + (-1)^b<B_y> + (-1)^{a+b}<A_xB_y>
    /// over all 16 outcome/setting combinations (4x the smallest probability).
    double min_facet_value() const
    {
        double worst = 4.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        const double sa = a ? -1.0 : 1.0;
                        const double sb = b ? -1.0 : 1.0;
                        const double v =
                            1.0 + sa * alice(x) + sb * bob(y) + sa * sb * correlator(x, y);
                        worst = std::min(worst, v);
                    }
                }
            }
        }
        return worst;
    }
};

/// Conditional outcome probabilities p(ab|xy), a,b,x,y in {0,1}.
struct ProbabilityTable {
    double p[2][2][2][2] = {}; // [a][b][x][y]

    double prob(int a, int b, int x, int y) const { return p[a][b][x][y]; }

    /// Max deviation of the per-setting normalization sums from 1.
    double normalization_residual() const
    {
        double worst = 0.0;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                double s = 0.0;
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) {
                        s += p[a][b][x][y];
                    }
                }
                worst = std::max(worst, std::abs(s - 1.0));
            }
        }
        return worst;
    }

    /// Max violation of the no-signalling marginals across setting changes.
    double no_signalling_residual() const
    {
        double worst = 0.0;
        for (int x = 0; x < 2; ++x) {
            for (int a = 0; a < 2; ++a) {
                const double m0 = p[a][0][x][0] + p[a][1][x][0];
                const double m1 = p[a][0][x][1] + p[a][1][x][1];
                worst = std::max(worst, std::abs(m0 - m1));
            }
        }
        for (int y = 0; y < 2; ++y) {
            for (int b = 0; b < 2; ++b) {
                const double m0 = p[0][b][0][y] + p[1][b][0][y];
                const double m1 = p[0][b][1][y] + p[1][b][1][y];
                worst = std::max(worst, std::abs(m0 - m1));
            }
        }
        return worst;
    }
};

/// Statistics of the canonical realisation:
///   <A_x> = cos(theta) cos(a_x),  <B_y> = cos(theta) cos(b_y),
///   <A_xB_y> = cos(a_x) cos(b_y) + sin(theta) sin(a_x) sin(b_y).
inline ProbabilityPoint point_from_realization(const Realization &r)
{
    const double ct = std::cos(r.theta);
    const double st = std::sin(r.theta);
    const std::array<double, 2> ca{std::cos(r.a0), std::cos(r.a1)};
    const std::array<double, 2> sa{std::sin(r.a0), std::sin(r.a1)};
    const std::array<double, 2> cb{std::cos(r.b0), std::cos(r.b1)};
    const std::array<double, 2> sb{std::sin(r.b0), std::sin(r.b1)};

    std::array<double, 4> m{ct * ca[0], ct * ca[1], ct * cb[0], ct * cb[1]};
    std::array<double, 4> c{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            c[static_cast<std::size_t>(2 * x + y)] = ca[x] * cb[y] + st * sa[x] * sb[y];
        }
    }
    return ProbabilityPoint::unchecked(m, c); // exact statistics, always valid
}

/// p(ab|xy) = (1 + (-1)^a<A_x> + (-1)^b<B_y> + (-1)^{a+b}<A_xB_y>) / 4.
/// Throws if any entry is below -kPointTol (point outside the
/// non-signalling set); mildly negative rounding noise is clamped to 0.
inline ProbabilityTable probabilities_from_point(const ProbabilityPoint &point)
{
    ProbabilityTable t;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double sa = a ? -1.0 : 1.0;
                    const double sb = b ? -1.0 : 1.0;
                    const double v = 0.25 * (1.0 + sa * point.alice(x) + sb * point.bob(y) +
                                             sa * sb * point.correlator(x, y));
                    if (v < -kPointTol) {
                        throw std::domain_error(
                            "probabilities_from_point: p(" + std::to_string(a) +
                            std::to_string(b) + "|" + std::to_string(x) + std::to_string(y) +
                            ") = " + std::to_string(v) + " violates non-negativity");
                    }
                    t.p[a][b][x][y] = v < 0.0 ? 0.0 : v;
                }
            }
        }
    }
    return t;
}

/// Inverse of probabilities_from_point (the Eq.-(9) moment sums).
inline ProbabilityPoint point_from_probabilities(const ProbabilityTable &t)
{
    std::array<double, 4> m{};
    std::array<double, 4> c{};
    for (int x = 0; x < 2; ++x) {
        m[static_cast<std::size_t>(x)] =
            t.p[0][0][x][0] + t.p[0][1][x][0] - t.p[1][0][x][0] - t.p[1][1][x][0];
    }
    for (int y = 0; y < 2; ++y) {
        m[static_cast<std::size_t>(2 + y)] =
            t.p[0][0][0][y] - t.p[0][1][0][y] + t.p[1][0][0][y] - t.p[1][1][0][y];
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            c[static_cast<std::size_t>(2 * x + y)] =
                t.p[0][0][x][y] - t.p[0][1][x][y] - t.p[1][0][x][y] + t.p[1][1][x][y];
        }
    }
    return ProbabilityPoint::unchecked(m, c);
}

/// The statistics-preserving reflection (theta, -a0, -a1, -b0, -b1).
inline Realization sign_flip_symmetry(const Realization &r)
{
    return Realization(r.theta, -r.a0, -r.a1, -r.b0, -r.b1);
}

/// Rows d(point)/d(theta, a0, a1, b0, b1), each an 8-vector in the point's
/// component order (analytic derivatives of the canonical statistics).
inline std::array<std::array<double, 8>, 5> point_jacobian(const Realization &r)
{
    const double ct = std::cos(r.theta), st = std::sin(r.theta);
    const std::array<double, 2> ca{std::cos(r.a0), std::cos(r.a1)};
    const std::array<double, 2> sa{std::sin(r.a0), std::sin(r.a1)};
    const std::array<double, 2> cb{std::cos(r.b0), std::cos(r.b1)};
    const std::array<double, 2> sb{std::sin(r.b0), std::sin(r.b1)};

    std::array<std::array<double, 8>, 5> rows{};
    for (int x = 0; x < 2; ++x) {
        rows[0][static_cast<std::size_t>(x)] = -st * ca[x];
        rows[static_cast<std::size_t>(1 + x)][static_cast<std::size_t>(x)] = -ct * sa[x];
    }
    for (int y = 0; y < 2; ++y) {
        rows[0][static_cast<std::size_t>(2 + y)] = -st * cb[y];
        rows[static_cast<std::size_t>(3 + y)][static_cast<std::size_t>(2 + y)] = -ct * sb[y];
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const auto k = static_cast<std::size_t>(4 + 2 * x + y);
            rows[0][k] = ct * sa[x] * sb[y];
            rows[static_cast<std::size_t>(1 + x)][k] = -sa[x] * cb[y] + st * ca[x] * sb[y];
            rows[static_cast<std::size_t>(3 + y)][k] = -ca[x] * sb[y] + st * sa[x] * cb[y];
        }
    }
    return rows;
}

inline double max_abs_component_difference(const ProbabilityPoint &p,
                                           const ProbabilityPoint &q)
{
    double worst = 0.0;
    const auto a = p.as_vector();
    const auto b = q.as_vector();
    for (std::size_t i = 0; i < 8; ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace chsh
