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
#include "chsh/polytopes.hpp"

#include <limits>
#include <optional>

namespace chsh {

/**
 * @brief Parameters of the Double-Tilted CHSH family.
 *
 * Construction applies the symmetry reduction: the functional
 * (alpha cos(phi/2), alpha sin(phi/2), 0, 0, 1, 1, 1, -1) is invariant (up to
 * relabelings of observables) under sign flips and the swap of its two
 * marginal coefficients, so any input reduces to alpha >= 0, phi in [0, pi/2].
 * alpha >= 2 cannot beat the local bound and is rejected.
 */
struct DoubleTiltedParams {
    double alpha = 0.0;
    double phi = 0.0;

    DoubleTiltedParams(double alpha_, double phi_)
    {
        if (!std::isfinite(alpha_) || !std::isfinite(phi_)) {
            throw std::invalid_argument("DoubleTiltedParams: parameters must be finite");
        }
        alpha = std::abs(alpha_);
        const double half = phi_ / 2.0;
        double c = std::abs(std::cos(half));
        double s = std::abs(std::sin(half));
        if (s > c) {
            std::swap(c, s);
        }
        phi = 2.0 * std::atan2(s, c); // in [0, pi/2]
        if (alpha >= 2.0) {
            throw std::invalid_argument("DoubleTiltedParams: alpha must satisfy |alpha| < 2");
        }
    }
};

/// F = (alpha cos(phi/2), alpha sin(phi/2), 0, 0, 1, 1, 1, -1).
inline Functional double_tilted_functional(const DoubleTiltedParams &p)
{
    return Functional{{p.alpha * std::cos(p.phi / 2.0), p.alpha * std::sin(p.phi / 2.0), 0.0,
                       0.0, 1.0, 1.0, 1.0, -1.0}};
}

/**
 * @brief Closed-form solution data for a Double-Tilted functional.
 *
 * y1, y2 are the stationary values of cos(2a) (a the symmetric half-angle of
 * Alice's observables), beta_q1/beta_q2 the corresponding candidate values;
 * the quantum value is beta_q2 when the admissibility conditions hold.
 */
struct DoubleTiltedSolution {
    explicit DoubleTiltedSolution(const DoubleTiltedParams &p) : params(p) {}

    DoubleTiltedParams params;
    double beta_l = 0.0;
    double beta_q = 0.0;
    double cos_b_opt = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double beta_q1 = 0.0;
    double beta_q2 = 0.0; // NaN when undefined
    double a_opt = 0.0;   // half-angle solving cos(2a) = y2, in (0, pi/2]
    double b_opt = 0.0;
    bool admissible = false;
    std::optional<Realization> realization; // numeric, from the top eigenvector
};

/// Top eigenvalue of the Double-Tilted Bell operator in the symmetric
/// parametrisation (A0 at +a, A1 at -a, B0 = Z, B1 at b).
inline double double_tilted_lambda1(double alpha, double phi, double a, double b)
{
    const double a2 = alpha * alpha;
    const double s1 = 1.0 + 3.0 * a2 - std::cos(2.0 * b) + a2 * std::cos(b) * std::cos(phi) +
                      4.0 * a2 * std::cos(2.0 * a) * std::sin(phi) +
                      std::cos(4.0 * a) * (-1.0 + a2 + std::cos(2.0 * b) -
                                           a2 * std::cos(b) * std::cos(phi));
    const double v = 4.0 + a2 + a2 * std::cos(2.0 * a) * std::sin(phi) +
                     2.0 * std::sqrt(std::max(s1, 0.0));
    return std::sqrt(std::max(v, 0.0));
}

inline DoubleTiltedSolution double_tilted_solve(const DoubleTiltedParams &p)
{
    const double alpha = p.alpha, phi = p.phi;
    const double a2 = alpha * alpha;
    const double a4 = a2 * a2;
    const double c2phi = std::cos(2.0 * phi);

    DoubleTiltedSolution s(p);
    const Functional f = double_tilted_functional(p);
    s.beta_l = local_value(f).beta_l;
    s.cos_b_opt = a2 * std::cos(phi) / 4.0;
    s.b_opt = std::acos(s.cos_b_opt);

    s.y1 = a2 * std::sin(phi) / (4.0 - a2);
    const double den2 = 32.0 - 16.0 * a2 + a4 * (1.0 + c2phi);
    s.y2 = a2 * std::sin(phi) * (96.0 - 16.0 * a2 - a4 * (1.0 + c2phi)) /
           ((4.0 - a2) * den2);

    s.beta_q1 = std::sqrt((32.0 - a4 * (1.0 + c2phi)) / (4.0 - a2));
    const double inner2 = (4.0 - a2) * (32.0 - a4 * (1.0 + c2phi)) / den2;
    s.beta_q2 = inner2 >= 0.0 ? std::sqrt(2.0) * std::sqrt(inner2)
                              : std::numeric_limits<double>::quiet_NaN();

    const bool y2_ok = std::isfinite(s.y2) && std::abs(s.y2) <= 1.0;
    if (y2_ok) {
        s.a_opt = 0.5 * std::acos(s.y2);
    }
    const bool interior = y2_ok && s.a_opt > 1e-12 && s.a_opt < kPi - 1e-12 &&
                          s.b_opt > 1e-12 && s.b_opt < kPi - 1e-12;
    s.admissible = interior && std::isfinite(s.beta_q2) && s.beta_q2 > s.beta_l;
    s.beta_q = s.admissible ? s.beta_q2 : s.beta_l;

    if (s.admissible) {
        // relative Alice angle is 2*a_opt, so the two-angle operator applies
        const BellOperator w = build_bell_operator(f, 2.0 * s.a_opt, s.b_opt);
        const auto [lam, vec] = top_eigenpair(w);
        (void)lam;
        s.realization = canonicalize_realization(vec, 2.0 * s.a_opt, s.b_opt);
    }
    return s;
}

/// Parameters of the Generalised Wolfe-Yelin family.
struct WolfeYelinParams {
    double alpha0 = 0.0;
    double alpha1 = 0.0;

    WolfeYelinParams(double alpha0_, double alpha1_) : alpha0(alpha0_), alpha1(alpha1_)
    {
        if (!(alpha0 > -1.0 && alpha0 < 1.0)) {
            throw std::invalid_argument("WolfeYelinParams: alpha0 must lie in (-1, 1)");
        }
        if (!(alpha1 >= 0.0 && alpha1 <= 2.0)) {
            throw std::invalid_argument("WolfeYelinParams: alpha1 must lie in [0, 2]");
        }
    }
};

/// F = (alpha0, alpha0, alpha1, 0, 1, 1, 1, -1).
inline Functional wolfe_yelin_functional(const WolfeYelinParams &p)
{
    return Functional{{p.alpha0, p.alpha0, p.alpha1, 0.0, 1.0, 1.0, 1.0, -1.0}};
}

/// Eigenvalue candidate at b = pi/2 as a function of x = cos(a/2).
inline double wolfe_yelin_lambda(const WolfeYelinParams &p, double x)
{
    const double a0 = p.alpha0, a1 = p.alpha1;
    const double cos_a = 2.0 * x * x - 1.0;
    const double q = 2.0 + a1 * a1 + 2.0 * a0 * a0 + 4.0 * a0 * a1 * x -
                     2.0 * cos_a * (1.0 - a0 * a0);
    return 2.0 * x + std::sqrt(std::max(q, 0.0));
}

/// cot(theta/2) of the optimal state; NaN when the radicand is non-positive.
inline double wolfe_yelin_cot_half_theta(const WolfeYelinParams &p)
{
    const double a0 = p.alpha0, a1 = p.alpha1;
    const double a0sq = a0 * a0;
    const double num = a1 * std::sqrt(2.0 - a0sq) +
                       std::sqrt(4.0 + a1 * a1 - 4.0 * a0sq) * (1.0 + a0 - a0sq);
    const double rad = -2.0 * a0 * a1 * std::sqrt((2.0 - a0sq) * (4.0 + a1 * a1 - 4.0 * a0sq)) +
                       a1 * a1 * (-1.0 - 2.0 * a0sq + a0sq * a0sq) -
                       4.0 * (-1.0 + 4.0 * a0sq - 4.0 * a0sq * a0sq + a0sq * a0sq * a0sq);
    if (!(rad > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return num / std::sqrt(rad);
}

/// Closed-form solution data for a Generalised Wolfe-Yelin functional.
struct WolfeYelinSolution {
    explicit WolfeYelinSolution(const WolfeYelinParams &p) : params(p) {}

    WolfeYelinParams params;
    double beta_l = 0.0;
    double beta_q = 0.0;
    double x_plus = 0.0;
    double x_minus = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double cot_half_theta = 0.0; // NaN when undefined
    double theta = 0.0;
    double a_half = 0.0;         // observable angle a with cos a = x_plus
    bool admissible = false;     // alpha1/2 < x+ < 1 and beta_L < lambda+ (numeric checks)
    std::optional<Realization> realization; // (theta, a, -a, 0, pi/2)
    std::optional<ProbabilityPoint> point;  // the closed-form quantum point
};

inline WolfeYelinSolution wolfe_yelin_solve(const WolfeYelinParams &p)
{
    const double a0 = p.alpha0, a1 = p.alpha1;
    const double a0sq = a0 * a0;

    WolfeYelinSolution s(p);
    const Functional f = wolfe_yelin_functional(p);
    s.beta_l = local_value(f).beta_l;

    const double root = std::sqrt((a1 * a1 + 4.0 - 4.0 * a0sq) / (2.0 - a0sq));
    s.x_plus = (a0 * a1 + root) / (2.0 * (1.0 - a0sq));
    s.x_minus = (a0 * a1 - root) / (2.0 * (1.0 - a0sq));
    s.lambda_plus =
        (a0 * a1 + std::sqrt((4.0 + a1 * a1 - 4.0 * a0sq) * (2.0 - a0sq))) / (1.0 - a0sq);
    s.lambda_minus = (a0 * a1 - a0sq * root) / (1.0 - a0sq);
    s.cot_half_theta = wolfe_yelin_cot_half_theta(p);

    s.admissible = (a1 / 2.0 < s.x_plus) && (s.x_plus < 1.0) && (s.beta_l < s.lambda_plus);
    s.beta_q = s.admissible ? s.lambda_plus : s.beta_l;

    if (s.admissible && std::isfinite(s.cot_half_theta)) {
        s.theta = 2.0 * std::atan2(1.0, s.cot_half_theta);
        s.a_half = std::acos(std::clamp(s.x_plus, -1.0, 1.0));
        if (s.theta <= kPi / 2.0 + 1e-12) {
            s.realization = Realization(std::min(s.theta, kPi / 2.0), s.a_half, -s.a_half,
                                        0.0, kPi / 2.0);
            const double ct = std::cos(s.theta), st = std::sin(s.theta);
            const double ca = std::cos(s.a_half), sa = std::sin(s.a_half);
            s.point = ProbabilityPoint::unchecked(
                {ca * ct, ca * ct, ct, 0.0}, {ca, sa * st, ca, -sa * st});
        }
    }
    return s;
}

/**
 * @brief The closed-form quantum point with an explicitly supplied angle a.
 *
 * Used to populate the extended family: theta comes from the cot(theta/2)
 * closed form for (alpha0, alpha1) while a ranges freely, so the point exists
 * even where the functional no longer exhibits a quantum advantage.  Throws
 * when the closed form does not define theta.
 */
inline ProbabilityPoint wolfe_yelin_extended_point(const WolfeYelinParams &p, double a)
{
    const double cot = wolfe_yelin_cot_half_theta(p);
    if (!std::isfinite(cot)) {
        throw std::domain_error(
            "wolfe_yelin_extended_point: cot(theta/2) undefined for these parameters");
    }
    const double theta = 2.0 * std::atan2(1.0, cot);
    if (!(theta > 0.0) || theta > kPi) {
        throw std::domain_error("wolfe_yelin_extended_point: theta outside (0, pi]");
    }
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(a), sa = std::sin(a);
    return ProbabilityPoint::unchecked({ca * ct, ca * ct, ct, 0.0},
                                       {ca, sa * st, ca, -sa * st});
}

} // namespace chsh
