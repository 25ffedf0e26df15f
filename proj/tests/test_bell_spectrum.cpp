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

#include "chsh/bell_spectrum.hpp"
#include "chsh/families.hpp"
#include "chsh/scan.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace chsh;

namespace {

const Functional kChsh{{0, 0, 0, 0, 1, 1, 1, -1}};

Functional random_functional(SplitMix64 &rng, bool zero_bob_marginals = false)
{
    Functional f;
    for (auto &c : f.coeffs) {
        c = rng.uniform(-2, 2);
    }
    if (zero_bob_marginals) {
        f.coeffs[2] = f.coeffs[3] = 0.0;
    }
    return f;
}

/// Statistics of a state vector under explicit observable angles.
ProbabilityPoint point_of_state(const Vec4 &psi, double a0, double a1, double b0, double b1)
{
    auto expect = [&psi](const Mat4 &op) { return dot4(psi, mat4_apply(op, psi)); };
    const Mat2 id{{{1, 0}, {0, 1}}};
    const std::array<Mat2, 2> A{observable(a0), observable(a1)};
    const std::array<Mat2, 2> B{observable(b0), observable(b1)};
    std::array<double, 4> m{expect(kron(A[0], id)), expect(kron(A[1], id)),
                            expect(kron(id, B[0])), expect(kron(id, B[1]))};
    std::array<double, 4> c{expect(kron(A[0], B[0])), expect(kron(A[0], B[1])),
                            expect(kron(A[1], B[0])), expect(kron(A[1], B[1]))};
    return ProbabilityPoint::unchecked(m, c);
}

} // namespace

TEST_CASE("CHSH operator at a = b = pi/2 is ZZ + ZX + XZ - XX")
{
    const BellOperator w = build_bell_operator(kChsh, kPi / 2, kPi / 2);
    const Mat2 Z{{{1, 0}, {0, -1}}};
    const Mat2 X{{{0, 1}, {1, 0}}};
    Mat4 expected = mat4_zero();
    const Mat4 zz = kron(Z, Z), zx = kron(Z, X), xz = kron(X, Z), xx = kron(X, X);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            expected[i][j] = zz[i][j] + zx[i][j] + xz[i][j] - xx[i][j];
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            REQUIRE(w.entries[i][j] == Catch::Approx(expected[i][j]).margin(1e-14));
        }
    }
    const auto eig = jacobi_eigen_symmetric(w.entries);
    const double s = 2 * std::sqrt(2.0);
    CHECK(eig.values[0] == Catch::Approx(s).margin(1e-12));
    CHECK(eig.values[1] == Catch::Approx(0).margin(1e-12));
    CHECK(eig.values[2] == Catch::Approx(0).margin(1e-12));
    CHECK(eig.values[3] == Catch::Approx(-s).margin(1e-12));
}

TEST_CASE("commuting observables give a diagonal operator")
{
    SplitMix64 rng(5);
    const Functional f = random_functional(rng);
    const BellOperator w = build_bell_operator(f, 0.0, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (i != j) {
                REQUIRE(w.entries[i][j] == 0.0);
            }
        }
    }
    CHECK_THROWS_AS(build_bell_operator(f, -0.5, 1.0), std::invalid_argument);
}

TEST_CASE("operators are symmetric and eigenpairs have tiny residuals")
{
    for (std::uint64_t i = 0; i < 200; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(17, i);
        const Functional f = random_functional(rng);
        const BellOperator w =
            build_bell_operator(f, rng.uniform(0, kPi), rng.uniform(0, kPi));
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                REQUIRE(std::abs(w.entries[r][c] - w.entries[c][r]) < 1e-14);
            }
        }
        const auto [lam, vec] = top_eigenpair(w);
        const Vec4 wv = mat4_apply(w.entries, vec);
        double resid = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            resid += (wv[k] - lam * vec[k]) * (wv[k] - lam * vec[k]);
        }
        REQUIRE(std::sqrt(resid) < 1e-11);
        REQUIRE(std::abs(norm4(vec) - 1.0) < 1e-12);
    }
    const auto [lam0, vec0] = top_eigenpair(build_bell_operator(Functional{}, 1.0, 2.0));
    CHECK(lam0 == 0.0);
    (void)vec0;
}

TEST_CASE("zero one-side marginal coefficients give a symmetric spectrum")
{
    for (std::uint64_t i = 0; i < 200; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(23, i);
        const Functional f = random_functional(rng, /*zero_bob_marginals=*/true);
        const auto eig = jacobi_eigen_symmetric(
            build_bell_operator(f, rng.uniform(0, kPi), rng.uniform(0, kPi)).entries);
        REQUIRE(std::abs(eig.values[0] + eig.values[3]) < 1e-10);
        REQUIRE(std::abs(eig.values[1] + eig.values[2]) < 1e-10);
    }
}

TEST_CASE("quantum maximization: CHSH and a marginal functional")
{
    const QuantumMaximum qm = maximize_quantum_value(kChsh);
    CHECK(qm.beta_max == Catch::Approx(2 * std::sqrt(2.0)).margin(1e-9));
    // unique interior optimum at a = b = pi/2
    CHECK(std::abs(qm.a_star - kPi / 2) < 1e-6);
    CHECK(std::abs(qm.b_star - kPi / 2) < 1e-6);
    CHECK(qm.unique);
    CHECK_FALSE(qm.boundary);
    // the canonical realisation reproduces the Tsirelson point statistics
    const ProbabilityPoint p = point_from_realization(qm.realization);
    CHECK(chsh_value(p) == Catch::Approx(2 * std::sqrt(2.0)).margin(1e-9));

    const QuantumMaximum marginal = maximize_quantum_value(Functional{{1, 0, 0, 0, 0, 0, 0, 0}});
    CHECK(marginal.beta_max == Catch::Approx(1.0).margin(1e-12));
    CHECK(marginal.boundary);
    CHECK_FALSE(marginal.unique); // flat objective: degenerate everywhere

    CHECK_THROWS_AS(maximize_quantum_value(kChsh, 4), std::invalid_argument);
    CHECK_THROWS_AS(maximize_quantum_value(kChsh, 64, -1.0), std::invalid_argument);
}

TEST_CASE("maximizer sits inside the local/non-signalling sandwich")
{
    for (std::uint64_t i = 0; i < 25; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(31, i);
        const Functional f = random_functional(rng);
        const FunctionalValues v = local_value(f);
        const QuantumMaximum qm = maximize_quantum_value(f, 32);
        REQUIRE(qm.beta_max >= v.beta_l - 1e-9);
        REQUIRE(qm.beta_max <= v.beta_ns + 1e-9);
    }
}

TEST_CASE("canonicalize_realization: product state and Bell state")
{
    const Realization product = canonicalize_realization({1, 0, 0, 0}, 1.3, 0.4);
    CHECK(product.theta == Catch::Approx(0.0).margin(1e-14));

    const double inv = 1.0 / std::sqrt(2.0);
    const Realization bell =
        canonicalize_realization({inv, 0, 0, inv}, kPi / 2, kPi / 2);
    CHECK(bell.theta == Catch::Approx(kPi / 2).margin(1e-12));
    CHECK(bell.a0 == Catch::Approx(0.0).margin(1e-12));
    CHECK(bell.a1 == Catch::Approx(kPi / 2).margin(1e-12));
    CHECK(bell.b0 == Catch::Approx(0.0).margin(1e-12));
    CHECK(bell.b1 == Catch::Approx(kPi / 2).margin(1e-12));

    CHECK_THROWS_AS(canonicalize_realization({0, 0, 0, 0}, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("canonicalization preserves the statistics of top eigenvectors")
{
    for (std::uint64_t i = 0; i < 300; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(37, i);
        const Functional f = random_functional(rng);
        const double a = rng.uniform(0, kPi), b = rng.uniform(0, kPi);
        const auto [lam, psi] = top_eigenpair(build_bell_operator(f, a, b));
        (void)lam;
        const ProbabilityPoint direct = point_of_state(psi, 0.0, a, 0.0, b);
        const Realization canon = canonicalize_realization(psi, a, b);
        REQUIRE(max_abs_component_difference(direct, point_from_realization(canon)) <
                1e-10);
    }
}

TEST_CASE("moment verification: CHSH values and symmetry precondition")
{
    const double s = 2 * std::sqrt(2.0);
    const MomentCheck mc = moment_verify(kChsh, kPi / 2, kPi / 2, s, 0.0);
    CHECK(mc.m2 == Catch::Approx(16.0).margin(1e-12));
    CHECK(mc.m4 == Catch::Approx(128.0).margin(1e-11));
    CHECK(mc.lambda1 == Catch::Approx(s).margin(1e-12));
    CHECK(mc.lambda2 == Catch::Approx(0.0).margin(1e-12));
    CHECK(mc.odd_trace_residual < 1e-10);
    CHECK(mc.passed);

    const MomentCheck zero = moment_verify(Functional{}, 1.0, 2.0, 0.0, 0.0);
    CHECK(zero.m2 == 0.0);
    CHECK(zero.m4 == 0.0);
    CHECK(zero.passed);

    // mirrored symmetry with zero Alice marginals is accepted
    CHECK_NOTHROW(moment_verify(Functional{{0, 0, 0.5, -0.5, 1, 1, 1, -1}}, 1.0, 1.0,
                                0.0, 0.0));
    // both sides carrying marginal weight breaks the +/- symmetry
    CHECK_THROWS_AS(moment_verify(Functional{{1, 0, 1, 0, 1, 1, 1, -1}}, 1.0, 1.0, 0.0, 0.0),
                    std::invalid_argument);

    // a wrong eigenvalue pair fails the even-moment equations
    const MomentCheck wrong = moment_verify(kChsh, kPi / 2, kPi / 2, s, 1.0);
    CHECK_FALSE(wrong.passed);
}
