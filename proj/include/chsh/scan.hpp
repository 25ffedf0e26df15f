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

#include "chsh/expose_lp.hpp"
#include "chsh/extremality.hpp"
#include "chsh/families.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace chsh {

// ---------------------------------------------------------------------------
// Deterministic randomness and parallel helpers
// ---------------------------------------------------------------------------

/// Counter-based splittable generator: sample i of a run is a pure function
/// of (seed, i), so results do not depend on the thread partition.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi)
    {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t index)
    {
        SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mixer.next();
        return mixer;
    }
};

inline Realization random_realization(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 rng = SplitMix64::for_sample(seed, index);
    const double theta = rng.uniform(0.0, kPi / 2);
    const double a0 = rng.uniform(0.0, kTwoPi);
    const double a1 = rng.uniform(0.0, kTwoPi);
    const double b0 = rng.uniform(0.0, kTwoPi);
    const double b1 = rng.uniform(0.0, kTwoPi);
    return Realization(theta, a0, a1, b0, b1);
}

/// Worker count: explicit request, capped by the CHSH_THREADS environment
/// variable when set, defaulting to the hardware concurrency.
inline unsigned resolve_thread_count(int requested)
{
    unsigned n = requested > 0 ? static_cast<unsigned>(requested)
                               : std::max(1u, std::thread::hardware_concurrency());
    if (const char *cap = std::getenv("CHSH_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0) {
            n = std::min(n, static_cast<unsigned>(v));
        }
    }
    return std::max(1u, n);
}

/// Runs fn(i) for i in [0, n) on a striped thread partition; each index is an
/// independent pure computation, so the output is partition-invariant.
inline void parallel_for(std::size_t n, int requested_threads,
                         const std::function<void(std::size_t)> &fn)
{
    const unsigned workers = std::min<std::size_t>(resolve_thread_count(requested_threads),
                                                   std::max<std::size_t>(n, 1));
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([t, n, workers, &fn] {
            for (std::size_t i = t; i < n; i += workers) {
                fn(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

inline std::string csv_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Region scans
// ---------------------------------------------------------------------------

/// Grid scan configuration.  The per-axis grids are half-open:
/// value_i = min + i (max - min) / steps for i < steps, so a scan emits
/// exactly steps^2 rows and the Double-Tilted default never evaluates the
/// singular alpha = 2 edge.
struct ScanConfig {
    std::string family;     // "double-tilted" or "wolfe-yelin"
    double min1 = 0.0, max1 = 0.0;
    double min2 = 0.0, max2 = 0.0;
    int steps = 100;
    int threads = 0;        // 0: automatic
    std::uint64_t seed = 0; // used by compare runs only

    void validate() const
    {
        if (steps < 2) {
            throw std::invalid_argument("ScanConfig: steps must be >= 2");
        }
        if (!(min1 < max1) || !(min2 < max2)) {
            throw std::invalid_argument("ScanConfig: ranges must be non-empty");
        }
        if (family == "double-tilted") {
            if (min1 < 0.0 || max1 > 2.0 || min2 < 0.0 || max2 > kPi / 2 + 1e-12) {
                throw std::invalid_argument(
                    "ScanConfig: double-tilted box is alpha in [0,2), phi in [0, pi/2]");
            }
        } else if (family == "wolfe-yelin") {
            if (min1 <= -1.0 || max1 >= 1.0 + 1e-12 || min2 < 0.0 || max2 > 2.0 + 1e-12) {
                throw std::invalid_argument(
                    "ScanConfig: wolfe-yelin box is alpha0 in (-1,1), alpha1 in [0,2]");
            }
        } else {
            throw std::invalid_argument("ScanConfig: unknown family '" + family + "'");
        }
    }

    double value1(int i) const { return min1 + i * (max1 - min1) / steps; }
    double value2(int i) const { return min2 + i * (max2 - min2) / steps; }
};

struct DoubleTiltedRow {
    double alpha = 0.0, phi = 0.0;
    double beta_l = 0.0, beta_q = 0.0;
    bool admissible = false;
    bool c1_extremal = false;
    bool c2_extremal = false;
};

inline std::vector<DoubleTiltedRow> scan_double_tilted(const ScanConfig &cfg)
{
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.steps) * cfg.steps;
    std::vector<DoubleTiltedRow> rows(n);
    parallel_for(n, cfg.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / cfg.steps;
        const int j = static_cast<int>(idx) % cfg.steps;
        DoubleTiltedRow row;
        row.alpha = cfg.value1(i);
        row.phi = cfg.value2(j);
        const DoubleTiltedSolution sol =
            double_tilted_solve(DoubleTiltedParams(row.alpha, row.phi));
        row.beta_l = sol.beta_l;
        row.beta_q = sol.beta_q;
        row.admissible = sol.admissible;
        if (sol.realization) {
            row.c1_extremal = conjecture1_extremal(*sol.realization).extremal;
            row.c2_extremal = conjecture2_extremal(*sol.realization).extremal;
        }
        rows[idx] = row;
    });
    return rows;
}

struct WolfeYelinRow {
    double alpha0 = 0.0, alpha1 = 0.0;
    double beta_l = 0.0, beta_q = 0.0;
    bool admissible = false;
    bool c1_extremal = false;
    bool c2_extremal = false;
    bool extended_extremal = false; // the closed-form point judged by both conjectures
};

inline std::vector<WolfeYelinRow> scan_wolfe_yelin(const ScanConfig &cfg)
{
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.steps) * cfg.steps;
    std::vector<WolfeYelinRow> rows(n);
    parallel_for(n, cfg.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / cfg.steps;
        const int j = static_cast<int>(idx) % cfg.steps;
        WolfeYelinRow row;
        row.alpha0 = cfg.value1(i);
        row.alpha1 = cfg.value2(j);
        const WolfeYelinParams params(row.alpha0, row.alpha1);
        const WolfeYelinSolution sol = wolfe_yelin_solve(params);
        row.beta_l = sol.beta_l;
        row.beta_q = sol.beta_q;
        row.admissible = sol.admissible;
        if (sol.realization) {
            row.c1_extremal = conjecture1_extremal(*sol.realization).extremal;
            row.c2_extremal = conjecture2_extremal(*sol.realization).extremal;
        }
        // extended family: same closed form with the advantage condition dropped
        if (std::abs(sol.x_plus) <= 1.0) {
            try {
                const ProbabilityPoint ext =
                    wolfe_yelin_extended_point(params, std::acos(sol.x_plus));
                const ReconstructionResult rec = realize_point(ext);
                if (!rec.realizations.empty()) {
                    const Realization &r = rec.realizations.front();
                    row.extended_extremal = conjecture1_extremal(r).extremal &&
                                            conjecture2_extremal(r).extremal;
                }
            } catch (const std::domain_error &) {
                // cot(theta/2) undefined: no extended point at this cell
            }
        }
        rows[idx] = row;
    });
    return rows;
}

inline void write_csv(std::ostream &os, const std::vector<DoubleTiltedRow> &rows)
{
    os << "alpha,phi,beta_l,beta_q,admissible,c1_extremal,c2_extremal\n";
    for (const auto &r : rows) {
        os << csv_number(r.alpha) << ',' << csv_number(r.phi) << ',' << csv_number(r.beta_l)
           << ',' << csv_number(r.beta_q) << ',' << (r.admissible ? 1 : 0) << ','
           << (r.c1_extremal ? 1 : 0) << ',' << (r.c2_extremal ? 1 : 0) << '\n';
    }
}

inline void write_csv(std::ostream &os, const std::vector<WolfeYelinRow> &rows)
{
    os << "alpha0,alpha1,beta_l,beta_q,admissible,c1_extremal,c2_extremal,extended_extremal\n";
    for (const auto &r : rows) {
        os << csv_number(r.alpha0) << ',' << csv_number(r.alpha1) << ','
           << csv_number(r.beta_l) << ',' << csv_number(r.beta_q) << ','
           << (r.admissible ? 1 : 0) << ',' << (r.c1_extremal ? 1 : 0) << ','
           << (r.c2_extremal ? 1 : 0) << ',' << (r.extended_extremal ? 1 : 0) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Randomized conjecture cross-validation
// ---------------------------------------------------------------------------

struct CompareConfig {
    int samples = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    bool certify = false; // also run the (slow) exposedness round trip
};

struct CompareRow {
    std::uint64_t index = 0;
    Realization realization;
    bool c1 = false;
    bool c2 = false;
    bool agree = true;
    ExposeStatus lp_status = ExposeStatus::Degenerate;
    std::optional<CertificateVerdict> certificate;
};

struct CompareSummary {
    int samples = 0;
    int extremal_both = 0;
    int disagreements = 0;
    double agreement_fraction = 1.0;
    int proven_exposed = 0;
};

struct CompareOutput {
    std::vector<CompareRow> rows;
    CompareSummary summary;
};

inline CompareOutput run_compare(const CompareConfig &cfg)
{
    if (cfg.samples < 0) {
        throw std::invalid_argument("run_compare: samples must be >= 0");
    }
    CompareOutput out;
    out.rows.resize(static_cast<std::size_t>(cfg.samples));
    parallel_for(out.rows.size(), cfg.threads, [&](std::size_t i) {
        CompareRow row;
        row.index = i;
        row.realization = random_realization(cfg.seed, i);
        row.c1 = conjecture1_extremal(row.realization).extremal;
        row.c2 = conjecture2_extremal(row.realization).extremal;
        row.agree = row.c1 == row.c2;
        row.lp_status = solve_expose_lp(build_expose_lp(row.realization)).status;
        if (cfg.certify) {
            row.certificate = certify_exposed(row.realization).verdict;
        }
        out.rows[i] = row;
    });

    out.summary.samples = cfg.samples;
    for (const auto &row : out.rows) {
        out.summary.extremal_both += row.c1 && row.c2 ? 1 : 0;
        out.summary.disagreements += row.agree ? 0 : 1;
        if (row.certificate && *row.certificate == CertificateVerdict::ProvenExposed) {
            ++out.summary.proven_exposed;
        }
    }
    out.summary.agreement_fraction =
        cfg.samples == 0
            ? 1.0
            : 1.0 - static_cast<double>(out.summary.disagreements) / cfg.samples;
    return out;
}

inline void write_csv(std::ostream &os, const CompareOutput &out, bool with_certificates)
{
    os << "index,theta,a0,a1,b0,b1,c1_extremal,c2_extremal,agree,lp_status";
    if (with_certificates) {
        os << ",certificate";
    }
    os << '\n';
    for (const auto &r : out.rows) {
        os << r.index << ',' << csv_number(r.realization.theta) << ','
           << csv_number(r.realization.a0) << ',' << csv_number(r.realization.a1) << ','
           << csv_number(r.realization.b0) << ',' << csv_number(r.realization.b1) << ','
           << (r.c1 ? 1 : 0) << ',' << (r.c2 ? 1 : 0) << ',' << (r.agree ? 1 : 0) << ','
           << to_string(r.lp_status);
        if (with_certificates) {
            os << ',' << (r.certificate ? to_string(*r.certificate) : "");
        }
        os << '\n';
    }
}

} // namespace chsh
