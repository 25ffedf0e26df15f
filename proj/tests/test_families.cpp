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

#include "chsh/families.hpp"
#include "chsh/extremality.hpp"
#include "chsh/scan.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace chsh;

namespace {

/// Test-side restatement of the closed-form eigenvalue radicand, kept
/// independent of the library path.
double inner_radicand(double alpha, double phi, double a, double b)
{
    const double a2 = alpha * alpha;
    return 1.0 + 3.0 * a2 - std::cos(2 * b) + a2 * std::cos(b) * std::cos(phi) +
           4.0 * a2 * std::cos(2 * a) * std::sin(phi) +
           std::cos(4 * a) *
               (-1.0 + a2 + std::cos(2 * b) - a2 * std::cos(b) * std::cos(phi));
}

} // namespace

TEST_CASE("double-tilted functional coefficients")
{
    const Functional chsh_like = double_tilted_functional(DoubleTiltedParams(0.0, 1.0));
    CHECK(chsh_like.coeffs == std::array<double, 8>{0, 0, 0, 0, 1, 1, 1, -1});

    const Functional tilted = double_tilted_functional(DoubleTiltedParams(1.0, 0.0));
    CHECK(tilted.coeffs == std::array<double, 8>{1, 0, 0, 0, 1, 1, 1, -1});

    const Functional diag = double_tilted_functional(DoubleTiltedParams(1.0, kPi / 2));
    CHECK(diag.coeffs[0] == Catch::Approx(std::sqrt(2.0) / 2).margin(1e-15));
    CHECK(diag.coeffs[1] == Catch::Approx(std::sqrt(2.0) / 2).margin(1e-15));
}

TEST_CASE("double-tilted parameter symmetry reduction")
{
    // negative alpha and phi outside [0, pi/2] reduce onto the canonical box
    const DoubleTiltedParams p(-1.2, 3.0 * kPi);
    CHECK(p.alpha == 1.2);
    CHECK(p.phi >= 0.0);
    CHECK(p.phi <= kPi / 2 + 1e-15);
    // the reduced functional has the same orbit invariant |F1|^2 + |F2|^2
    const Functional f = double_tilted_functional(p);
    CHECK(f.coeffs[0] * f.coeffs[0] + f.coeffs[1] * f.coeffs[1] ==
          Catch::Approx(1.44).margin(1e-12));
    CHECK(f.coeffs[0] >= f.coeffs[1]); // phi <= pi/2 means cos >= sin of phi/2
    CHECK_THROWS_AS(DoubleTiltedParams(2.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(DoubleTiltedParams(-2.5, 0.3), std::invalid_argument);
}

TEST_CASE("double-tilted closed form at the stated parameters")
{
    const DoubleTiltedSolution chsh_sol = double_tilted_solve(DoubleTiltedParams(0.0, 0.7));
    CHECK(chsh_sol.admissible);
    CHECK(chsh_sol.beta_q == Catch::Approx(2 * std::sqrt(2.0)).margin(1e-12));

    const DoubleTiltedSolution tilted = double_tilted_solve(DoubleTiltedParams(1.0, 0.0));
    CHECK(tilted.admissible);
    CHECK(tilted.beta_q == Catch::Approx(std::sqrt(10.0)).margin(1e-12));
    CHECK(tilted.beta_l == Catch::Approx(3.0).margin(1e-12));
    // at phi = 0 both candidates coincide
    CHECK(tilted.beta_q1 == Catch::Approx(tilted.beta_q2).margin(1e-12));

    const DoubleTiltedSolution edge = double_tilted_solve(DoubleTiltedParams(1.9, kPi / 2));
    CHECK_FALSE(edge.admissible);
}

TEST_CASE("closed-form eigenvalue matches the numeric spectrum")
{
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 150; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(101, i);
        const double alpha = rng.uniform(0, 2), phi = rng.uniform(0, kPi / 2);
        const double a = rng.uniform(0, kPi), b = rng.uniform(0, kPi);
        const Functional f = double_tilted_functional(DoubleTiltedParams(alpha, phi));
        // symmetric parametrisation: A0 at +a, A1 at -a
        const Mat4 w = bell_operator_from_angles(f, a, -a, 0.0, b);
        const double numeric = jacobi_eigen_symmetric(w).values[0];
        worst = std::max(worst, std::abs(double_tilted_lambda1(alpha, phi, a, b) - numeric));
        REQUIRE(inner_radicand(alpha, phi, a, b) > -1e-12);
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("candidate ordering: beta_q1 <= beta_q2 with equality only on the axes")
{
    for (std::uint64_t i = 0; i < 400; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(103, i);
        const double alpha = rng.uniform(0.05, 1.95), phi = rng.uniform(0.05, kPi / 2 - 0.01);
        const DoubleTiltedSolution s = double_tilted_solve(DoubleTiltedParams(alpha, phi));
        if (!s.admissible) {
            continue;
        }
        REQUIRE(s.beta_q1 <= s.beta_q2 + 1e-12);
        REQUIRE(s.beta_q2 - s.beta_q1 > 1e-10); // interior of the box: strict
    }
}

TEST_CASE("double-tilted solutions agree with the spectral grid search")
{
    int admissible = 0;
    for (std::uint64_t i = 0; i < 400 && admissible < 40; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(107, i);
        const DoubleTiltedParams p(rng.uniform(0, 2), rng.uniform(0, kPi / 2));
        const DoubleTiltedSolution s = double_tilted_solve(p);
        if (!s.admissible) {
            continue;
        }
        ++admissible;
        const QuantumMaximum qm = maximize_quantum_value(double_tilted_functional(p));
        REQUIRE(s.beta_q == Catch::Approx(qm.beta_max).margin(1e-6));
        REQUIRE(s.realization.has_value());
        // the numeric realisation attains the closed-form value
        const double attained =
            double_tilted_functional(p).value(point_from_realization(*s.realization));
        REQUIRE(attained == Catch::Approx(s.beta_q).margin(1e-9));
    }
    REQUIRE(admissible == 40);
}

TEST_CASE("wolfe-yelin functional coefficients")
{
    CHECK(wolfe_yelin_functional(WolfeYelinParams(0, 0)).coeffs ==
          std::array<double, 8>{0, 0, 0, 0, 1, 1, 1, -1});
    CHECK(wolfe_yelin_functional(WolfeYelinParams(0.5, 1.0)).coeffs ==
          std::array<double, 8>{0.5, 0.5, 1, 0, 1, 1, 1, -1});
    CHECK_THROWS_AS(WolfeYelinParams(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(WolfeYelinParams(0.0, 2.5), std::invalid_argument);
}

TEST_CASE("wolfe-yelin closed form at the stated parameters")
{
    const WolfeYelinSolution base = wolfe_yelin_solve(WolfeYelinParams(0, 0));
    CHECK(base.x_plus == Catch::Approx(std::sqrt(2.0) / 2).margin(1e-14));
    CHECK(base.a_half == Catch::Approx(kPi / 4).margin(1e-12)); // cos a = x+, a = pi/4...

    // (the angle in the point formula is a with cos a = x+, here pi/4; the
    //  full Alice separation is 2a = pi/2)
    CHECK(base.lambda_plus == Catch::Approx(2 * std::sqrt(2.0)).margin(1e-14));
    CHECK(base.admissible);

    const WolfeYelinSolution mid = wolfe_yelin_solve(WolfeYelinParams(0.3, 0.8));
    CHECK(mid.admissible);
    const QuantumMaximum qm =
        maximize_quantum_value(wolfe_yelin_functional(WolfeYelinParams(0.3, 0.8)));
    CHECK(mid.lambda_plus == Catch::Approx(qm.beta_max).margin(1e-6));

    const WolfeYelinSolution boundary = wolfe_yelin_solve(WolfeYelinParams(0.0, 2.0));
    CHECK_FALSE(boundary.admissible); // x+ = 1 and beta_L = lambda+: no advantage
}

TEST_CASE("wolfe-yelin discriminant and radicand are safe on the box")
{
    for (std::uint64_t i = 0; i < 500; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(109, i);
        const double a0 = rng.uniform(-0.999, 0.999), a1 = rng.uniform(0, 2);
        const double disc = 16.0 * (2 - a0 * a0) * (a1 * a1 + 4 * (1 - a0 * a0));
        REQUIRE(disc > 0.0);
        // eigenvalue radicand, nonnegative for every angle we consider
        const double x = std::cos(rng.uniform(0, kPi) / 2);
        const double q = 2 + a1 * a1 + 2 * a0 * a0 + 4 * a0 * a1 * x -
                         2 * (2 * x * x - 1) * (1 - a0 * a0);
        REQUIRE(q > -1e-12);
    }
}

TEST_CASE("wolfe-yelin solutions agree with the spectral grid search")
{
    int admissible = 0;
    for (std::uint64_t i = 0; i < 600 && admissible < 40; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(113, i);
        const WolfeYelinParams p(rng.uniform(-0.999, 0.999), rng.uniform(0, 2));
        const WolfeYelinSolution s = wolfe_yelin_solve(p);
        if (!s.admissible) {
            continue;
        }
        ++admissible;
        const Functional f = wolfe_yelin_functional(p);
        const QuantumMaximum qm = maximize_quantum_value(f);
        REQUIRE(s.lambda_plus == Catch::Approx(qm.beta_max).margin(1e-6));
        REQUIRE(s.point.has_value());
        // the closed-form point attains lambda+ exactly
        REQUIRE(f.value(*s.point) == Catch::Approx(s.lambda_plus).margin(1e-9));
        // and matches the canonical realisation (theta, a, -a, 0, pi/2)
        REQUIRE(s.realization.has_value());
        REQUIRE(max_abs_component_difference(*s.point,
                                             point_from_realization(*s.realization)) <
                1e-12);
    }
    REQUIRE(admissible == 40);
}

TEST_CASE("optimal state matches the cot(theta/2) closed form")
{
    const WolfeYelinParams p(0.3, 0.8);
    const WolfeYelinSolution s = wolfe_yelin_solve(p);
    REQUIRE(s.admissible);
    const QuantumMaximum qm = maximize_quantum_value(wolfe_yelin_functional(p));
    const double cot_numeric = 1.0 / std::tan(qm.realization.theta / 2.0);
    CHECK(cot_numeric == Catch::Approx(s.cot_half_theta).margin(1e-6));
}

TEST_CASE("extended points: consistency inside the admissible region")
{
    const WolfeYelinParams p(0.3, 0.8);
    const WolfeYelinSolution s = wolfe_yelin_solve(p);
    REQUIRE(s.admissible);
    const ProbabilityPoint ext = wolfe_yelin_extended_point(p, s.a_half);
    REQUIRE(max_abs_component_difference(ext, *s.point) < 1e-12);
}

TEST_CASE("extended points populate the extremal region beyond the advantage set")
{
    // orange-region sample: no quantum advantage for the functional, yet the
    // closed-form point is judged extremal by both conjectures
    const WolfeYelinParams orange(-0.6, 0.4);
    const WolfeYelinSolution s = wolfe_yelin_solve(orange);
    REQUIRE_FALSE(s.admissible);
    const ProbabilityPoint ext = wolfe_yelin_extended_point(orange, std::acos(s.x_plus));
    const ReconstructionResult rec = realize_point(ext);
    REQUIRE_FALSE(rec.realizations.empty());
    CHECK(conjecture1_extremal(rec.realizations.front()).extremal);
    CHECK(conjecture2_extremal(rec.realizations.front()).extremal);

    // far outside both regions the point is not extremal
    const WolfeYelinParams outside(0.9, 1.8);
    const WolfeYelinSolution so = wolfe_yelin_solve(outside);
    REQUIRE_FALSE(so.admissible);
    const ProbabilityPoint far = wolfe_yelin_extended_point(outside, std::acos(
        std::clamp(so.x_plus, -1.0, 1.0)));
    const ReconstructionResult rec2 = realize_point(far);
    if (!rec2.realizations.empty()) {
        CHECK_FALSE(conjecture1_extremal(rec2.realizations.front()).extremal);
        CHECK_FALSE(conjecture2_extremal(rec2.realizations.front()).extremal);
    }
}
