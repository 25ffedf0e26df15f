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
#include "chsh/expose_lp.hpp"
#include "chsh/extremality.hpp"
#include "chsh/families.hpp"
#include "chsh/polytopes.hpp"

#include <json.hpp>

namespace chsh {

using json = nlohmann::ordered_json;

inline json to_json(const Realization &r)
{
    return json{{"theta", r.theta}, {"a0", r.a0}, {"a1", r.a1}, {"b0", r.b0}, {"b1", r.b1}};
}

inline Realization realization_from_json(const json &j)
{
    return Realization(j.at("theta").get<double>(), j.at("a0").get<double>(),
                       j.at("a1").get<double>(), j.at("b0").get<double>(),
                       j.at("b1").get<double>());
}

inline json to_json(const ProbabilityPoint &p)
{
    return json{{"marginals", p.marginals}, {"correlators", p.correlators}};
}

/// Validating deserialization: rejects points outside the non-signalling set.
inline ProbabilityPoint point_from_json(const json &j)
{
    return ProbabilityPoint(j.at("marginals").get<std::array<double, 4>>(),
                            j.at("correlators").get<std::array<double, 4>>());
}

inline json to_json(const ProbabilityTable &t)
{
    json rows = json::object();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            json cell = json::object();
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    cell["p(" + std::to_string(a) + std::to_string(b) + ")"] = t.p[a][b][x][y];
                }
            }
            rows["xy=" + std::to_string(x) + std::to_string(y)] = cell;
        }
    }
    return rows;
}

inline json to_json(const Functional &f) { return json{{"coeffs", f.coeffs}}; }

inline json to_json(const FunctionalValues &v)
{
    json j{{"beta_l", v.beta_l}, {"beta_ns", v.beta_ns}, {"maximizers", v.maximizers}};
    if (v.beta_q) {
        j["beta_q"] = *v.beta_q;
    }
    return j;
}

inline json to_json(const QuantumMaximum &m)
{
    return json{{"beta_max", m.beta_max},
                {"a_star", m.a_star},
                {"b_star", m.b_star},
                {"eigenvector", m.eigenvector},
                {"realization", to_json(m.realization)},
                {"unique", m.unique},
                {"boundary", m.boundary}};
}

inline json to_json(const MomentCheck &m)
{
    return json{{"m2", m.m2},
                {"m4", m.m4},
                {"lambda1", m.lambda1},
                {"lambda2", m.lambda2},
                {"odd_trace_residual", m.odd_trace_residual},
                {"even_residual", m.even_residual},
                {"passed", m.passed}};
}

inline json to_json(const DoubleTiltedSolution &s)
{
    json j{{"alpha", s.params.alpha},
           {"phi", s.params.phi},
           {"beta_l", s.beta_l},
           {"beta_q", s.beta_q},
           {"cos_b_opt", s.cos_b_opt},
           {"y1", s.y1},
           {"y2", s.y2},
           {"beta_q1", s.beta_q1},
           {"beta_q2", s.beta_q2},
           {"a_opt", s.a_opt},
           {"b_opt", s.b_opt},
           {"admissible", s.admissible},
           {"admissibility_provenance", "numeric"}};
    if (s.realization) {
        j["realization"] = to_json(*s.realization);
        j["point"] = to_json(point_from_realization(*s.realization));
    }
    return j;
}

inline json to_json(const WolfeYelinSolution &s)
{
    json j{{"alpha0", s.params.alpha0},
           {"alpha1", s.params.alpha1},
           {"beta_l", s.beta_l},
           {"beta_q", s.beta_q},
           {"x_plus", s.x_plus},
           {"x_minus", s.x_minus},
           {"lambda_plus", s.lambda_plus},
           {"lambda_minus", s.lambda_minus},
           {"cot_half_theta", s.cot_half_theta},
           {"admissible", s.admissible},
           {"admissibility_provenance", "numeric"}};
    if (s.realization) {
        j["theta"] = s.theta;
        j["a"] = s.a_half;
        j["realization"] = to_json(*s.realization);
    }
    if (s.point) {
        j["point"] = to_json(*s.point);
    }
    return j;
}

inline json to_json(const TlmResult &t)
{
    return json{{"saturated", t.saturated}, {"residual", t.residual}};
}

inline json to_json(const StlmResult &s)
{
    return json{{"saturated", s.saturated},
                {"residuals", s.residuals},
                {"d_a", s.quantities.d_a},
                {"d_b", s.quantities.d_b}};
}

inline json to_json(const ThresholdResult &t)
{
    return json{{"sin_theta_star", t.sin_theta_star},
                {"x", t.x},
                {"y", t.y},
                {"branch", t.branch},
                {"degenerate", t.degenerate}};
}

inline json to_json(const Conjecture1Report &c)
{
    return json{{"extremal", c.extremal},
                {"nonlocal", c.nonlocal},
                {"stlm", to_json(c.stlm)},
                {"z", c.z},
                {"z_plus", c.z_plus},
                {"max_z_deviation", c.max_z_deviation},
                {"z_condition", c.z_condition},
                {"saturation_tolerance", kSaturationTol}};
}

inline json to_json(const Conjecture2Report &c)
{
    return json{{"extremal", c.extremal},
                {"nonlocal", c.nonlocal},
                {"tlm_at_max_entanglement", to_json(c.tlm)},
                {"threshold", to_json(c.threshold)},
                {"sin_theta", c.sin_theta},
                {"saturation_tolerance", kSaturationTol}};
}

inline json to_json(const DecompositionWitness &w)
{
    json vertices = json::array();
    for (const auto &v : w.p_e_vertices) {
        vertices.push_back(to_json(v));
    }
    return json{{"sin_theta_star", w.sin_theta_star},
                {"weights", w.weights},
                {"p_star", to_json(w.p_star)},
                {"p_e", to_json(w.p_e)},
                {"p_theta0", to_json(w.p_theta0)},
                {"p_e_weights", w.p_e_weights},
                {"p_e_vertices", vertices},
                {"reconstruction_error", w.reconstruction_error}};
}

inline json to_json(const ExtremalityReport &r)
{
    json reals = json::array();
    for (const auto &real : r.reconstruction.realizations) {
        reals.push_back(to_json(real));
    }
    json j{{"input", to_json(r.input)},
           {"point", to_json(r.point)},
           {"nonlocal", r.nonlocal},
           {"has_realization", !r.reconstruction.realizations.empty()},
           {"reconstruction_branch", r.reconstruction.branch},
           {"realizations", reals},
           {"conjecture1", to_json(r.conjecture1)},
           {"conjecture2", to_json(r.conjecture2)},
           {"agreement", r.agreement}};
    if (r.witness) {
        j["witness"] = to_json(*r.witness);
    }
    return j;
}

inline json to_json(const ExposeResult &e)
{
    return json{{"functional", e.functional.coeffs},
                {"i_max", e.i_max},
                {"status", to_string(e.status)},
                {"null_dimension", e.null_dimension}};
}

inline json to_json(const ExposeCertificate &c)
{
    json j{{"lp", to_json(c.lp)},
           {"verdict", to_string(c.verdict)},
           {"round_trip_distance", c.round_trip_distance},
           {"unique_maximizer", c.unique_maximizer}};
    if (c.maximum) {
        j["maximum"] = to_json(*c.maximum);
    }
    return j;
}

} // namespace chsh
