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

#include "chsh/polytopes.hpp"
#include "chsh/core.hpp"
#include "chsh/scan.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace chsh;

namespace {
const Functional kChsh{{0, 0, 0, 0, 1, 1, 1, -1}};
}

TEST_CASE("sixteen deterministic points in the frozen enumeration order")
{
    const auto &det = deterministic_points();
    for (const double v : det[0].as_vector()) {
        CHECK(v == 1.0);
    }
    const auto last = det[15].as_vector();
    const std::array<double, 8> expected{-1, -1, -1, -1, 1, 1, 1, 1};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(last[i] == expected[i]);
    }
    // products of signs, and all outcome probabilities in {0, 1}
    for (const auto &p : det) {
        CHECK(p.correlator(0, 0) == p.alice(0) * p.bob(0));
        CHECK(p.correlator(1, 1) == p.alice(1) * p.bob(1));
        const ProbabilityTable t = probabilities_from_point(p);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                for (int x = 0; x < 2; ++x) {
                    for (int y = 0; y < 2; ++y) {
                        const double v = t.prob(a, b, x, y);
                        CHECK((v == 0.0 || v == 1.0));
                    }
                }
            }
        }
    }
}

TEST_CASE("eight PR boxes with odd sign product")
{
    const auto &boxes = pr_boxes();
    REQUIRE(boxes.size() == 8);
    bool found_canonical = false;
    for (const auto &b : boxes) {
        for (const double m : b.marginals) {
            CHECK(m == 0.0);
        }
        double prod = 1.0;
        for (const double c : b.correlators) {
            CHECK(std::abs(c) == 1.0);
            prod *= c;
        }
        CHECK(prod == -1.0);
        if (b.correlators == std::array<double, 4>{1, 1, 1, -1}) {
            found_canonical = true;
            CHECK(kChsh.value(b) == 4.0);
        }
    }
    CHECK(found_canonical);
}

TEST_CASE("all 24 vertices are distinct")
{
    std::set<std::array<double, 8>> seen;
    for (const auto &p : deterministic_points()) {
        seen.insert(p.as_vector());
    }
    for (const auto &p : pr_boxes()) {
        seen.insert(p.as_vector());
    }
    CHECK(seen.size() == 24);
}

TEST_CASE("local and non-signalling values of the stated functionals")
{
    const FunctionalValues chsh_vals = local_value(kChsh);
    CHECK(chsh_vals.beta_l == 2.0);
    CHECK(chsh_vals.beta_ns == 4.0);

    // double-tilted at alpha=1, phi=0: beta_L = alpha(cos+sin)(phi/2) + 2 = 3
    const Functional tilted{{1, 0, 0, 0, 1, 1, 1, -1}};
    CHECK(local_value(tilted).beta_l == 3.0);

    // Wolfe-Yelin at alpha0=1/2, alpha1=1
    const Functional wy{{0.5, 0.5, 1, 0, 1, 1, 1, -1}};
    CHECK(local_value(wy).beta_l == 4.0);

    CHECK(nonsignalling_value(Functional{{1, 0, 0, 0, 0, 0, 0, 0}}) == 1.0);
    CHECK(nonsignalling_value(Functional{{0, 0, 0, 0, 1, 1, 1, -1}}) == 4.0);
    CHECK(nonsignalling_value(Functional{{0, 0, 0, 0, 1, 1, 1, -1}}) -
              local_value(kChsh).beta_l ==
          2.0);
}

TEST_CASE("beta_L >= beta_NS never happens; enumeration matches the closed forms")
{
    for (std::uint64_t i = 0; i < 400; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(7, i);

        Functional f;
        for (auto &c : f.coeffs) {
            c = rng.uniform(-2, 2);
        }
        const FunctionalValues v = local_value(f);
        REQUIRE(v.beta_l <= v.beta_ns + 1e-12);

        // Wolfe-Yelin local value: max of the three stated vertex expressions
        const double a0 = rng.uniform(-1, 1), a1 = rng.uniform(0, 2);
        const Functional wy{{a0, a0, a1, 0, 1, 1, 1, -1}};
        const double closed =
            std::max({2 * a0 + a1 + 2, -2 * a0 - a1 + 2, a1 + 2});
        REQUIRE(local_value(wy).beta_l == Catch::Approx(closed).margin(1e-12));

        // double-tilted local value on the reduced box
        const double alpha = rng.uniform(0, 2), phi = rng.uniform(0, kPi / 2);
        const Functional dt{{alpha * std::cos(phi / 2), alpha * std::sin(phi / 2), 0, 0, 1,
                             1, 1, -1}};
        REQUIRE(local_value(dt).beta_l ==
                Catch::Approx(alpha * (std::cos(phi / 2) + std::sin(phi / 2)) + 2.0)
                    .margin(1e-12));
    }
}

TEST_CASE("maximizer indices are reported with ties")
{
    const FunctionalValues v = local_value(kChsh);
    // CHSH attains its local value 2 on eight deterministic points
    CHECK(v.maximizers.size() == 8);
    const FunctionalValues marginal = local_value(Functional{{1, 0, 0, 0, 0, 0, 0, 0}});
    CHECK(marginal.maximizers.size() == 8); // every point with c0 = +1
    for (const int idx : marginal.maximizers) {
        CHECK(idx < 8);
    }
}

TEST_CASE("facet residuals: labels and stated values")
{
    const auto uniform = facet_residuals(ProbabilityPoint({0, 0, 0, 0}, {0, 0, 0, 0}));
    for (const auto &f : uniform) {
        CHECK(f.residual == 1.0);
    }

    const auto pr = facet_residuals(ProbabilityPoint({0, 0, 0, 0}, {1, 1, 1, -1}));
    for (const auto &f : pr) {
        CHECK((f.residual == 0.0 || f.residual == 2.0));
    }

    for (const auto &p : deterministic_points()) {
        for (const auto &f : facet_residuals(p)) {
            const bool ok =
                std::abs(f.residual) < 1e-12 || std::abs(f.residual - 2.0) < 1e-12 ||
                std::abs(f.residual - 4.0) < 1e-12;
            REQUIRE(ok);
        }
    }

    // labels address the right entry
    const ProbabilityPoint p = point_from_realization(Realization(0.3, 1, 2, 3, 4));
    const ProbabilityTable t = probabilities_from_point(p);
    for (const auto &f : facet_residuals(p)) {
        REQUIRE(f.residual == Catch::Approx(4.0 * t.prob(f.a, f.b, f.x, f.y)).margin(1e-13));
    }
}

TEST_CASE("degenerate-facet decomposition witness: stated examples")
{
    auto make_pe = [](double a1, double b1) {
        const double ca = std::cos(a1), cb = std::cos(b1);
        return ProbabilityPoint({1, ca, 1, cb}, {1, cb, ca, 1 - std::abs(ca - cb)});
    };

    const auto trivial = local_decomposition_witness(make_pe(0, 0));
    REQUIRE(trivial.has_value());
    CHECK(trivial->weights[0] == 1.0);
    CHECK(trivial->weights[1] == 0.0);
    CHECK(trivial->weights[2] == 0.0);

    const auto half = local_decomposition_witness(make_pe(kPi / 2, kPi / 2));
    REQUIRE(half.has_value());
    CHECK(half->weights[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(half->weights[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(half->weights[2] == Catch::Approx(0.5).margin(1e-15));

    const auto thirds = local_decomposition_witness(make_pe(kPi / 3, 2 * kPi / 3));
    REQUIRE(thirds.has_value());
    CHECK(thirds->weights[0] == Catch::Approx(0.25).margin(1e-14));
    CHECK(thirds->weights[1] == Catch::Approx(0.5).margin(1e-14));
    CHECK(thirds->weights[2] == Catch::Approx(0.25).margin(1e-14));
    CHECK(thirds->reconstruction_error < 1e-12);

    // not of the required form
    CHECK_FALSE(local_decomposition_witness(
                    ProbabilityPoint({0, 0, 0, 0}, {0.5, 0.5, 0.5, -0.5}))
                    .has_value());
}

TEST_CASE("decomposition weights are a convex combination on random inputs")
{
    for (std::uint64_t i = 0; i < 300; ++i) {
        SplitMix64 rng = SplitMix64::for_sample(13, i);
        const double a1 = rng.uniform(0, kPi), b1 = rng.uniform(0, kPi);
        const double ca = std::cos(a1), cb = std::cos(b1);
        const ProbabilityPoint pe({1, ca, 1, cb}, {1, cb, ca, 1 - std::abs(ca - cb)});
        const auto dec = local_decomposition_witness(pe);
        REQUIRE(dec.has_value());
        double sum = 0.0;
        for (const double w : dec->weights) {
            REQUIRE(w >= -1e-15);
            sum += w;
        }
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(dec->reconstruction_error < 1e-12);
    }
}

TEST_CASE("nonlocality detector agrees with the CHSH bound")
{
    CHECK_FALSE(is_nonlocal(deterministic_points()[3]));
    CHECK(is_nonlocal(pr_boxes()[0]));
    const ProbabilityPoint tsirelson =
        point_from_realization(Realization(kPi / 2, 0.0, kPi / 2, kPi / 4, 7 * kPi / 4));
    CHECK(chsh_value(tsirelson) == Catch::Approx(2 * std::sqrt(2.0)).margin(1e-12));
    CHECK(is_nonlocal(tsirelson));
}
