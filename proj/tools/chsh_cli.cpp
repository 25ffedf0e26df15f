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

// Command-line front end: single-point queries, family solvers, region scans
// and randomized conjecture cross-validation.
//
// Exit codes: 0 success / extremal verdict, 2 usage or parameter errors,
// 3 non-extremal verdict, 4 conjecture disagreement, 5 unwritable output.

#include "chsh/scan.hpp"
#include "chsh/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNonExtremal = 3;
constexpr int kExitDisagreement = 4;
constexpr int kExitOutput = 5;

struct AngleArgs {
    double theta = 0.0;
    double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;
};

bool g_degrees = false;

double to_radians(double v) { return g_degrees ? v * chsh::kPi / 180.0 : v; }

chsh::Realization make_realization(const AngleArgs &a)
{
    return chsh::Realization(to_radians(a.theta), to_radians(a.a0), to_radians(a.a1),
                             to_radians(a.b0), to_radians(a.b1));
}

void add_realization_flags(CLI::App *cmd, AngleArgs &args)
{
    cmd->add_option("--theta", args.theta, "Schmidt angle theta in [0, pi/2]")->required();
    cmd->add_option("--a0", args.a0, "Alice observable angle a0")->required();
    cmd->add_option("--a1", args.a1, "Alice observable angle a1")->required();
    cmd->add_option("--b0", args.b0, "Bob observable angle b0")->required();
    cmd->add_option("--b1", args.b1, "Bob observable angle b1")->required();
}

chsh::ProbabilityPoint point_from_values(const std::vector<double> &v)
{
    if (v.size() != 8) {
        throw std::invalid_argument("--point expects 8 comma-separated values");
    }
    return chsh::ProbabilityPoint({v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6], v[7]});
}

chsh::Functional functional_from_values(const std::vector<double> &v)
{
    if (v.size() != 8) {
        throw std::invalid_argument("--coeffs expects 8 comma-separated values");
    }
    chsh::Functional f;
    std::copy(v.begin(), v.end(), f.coeffs.begin());
    return f;
}

void print_json(const chsh::json &j) { std::cout << j.dump(2) << "\n"; }

/// Opens the output sink; "-" means stdout.
int with_output(const std::string &path, const std::function<void(std::ostream &)> &write)
{
    if (path == "-") {
        write(std::cout);
        return std::cout.good() ? kExitOk : kExitOutput;
    }
    std::ofstream os(path);
    if (!os) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return kExitOutput;
    }
    write(os);
    os.flush();
    if (!os) {
        std::cerr << "error: failed writing output file '" << path << "'\n";
        return kExitOutput;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"chsh: quantum-set points, family solvers and extremality "
                 "certification in the CHSH scenario"};
    app.require_subcommand(1);
    app.add_flag("--degrees", g_degrees, "interpret angle arguments as degrees");

    std::function<int()> action;

    // ---- point ----------------------------------------------------------
    auto angles = std::make_shared<AngleArgs>();
    {
        CLI::App *cmd = app.add_subcommand(
            "point", "statistics of a canonical realisation (8-vector + probabilities)");
        add_realization_flags(cmd, *angles);
        cmd->callback([angles, &action] {
            action = [angles] {
                const chsh::Realization r = make_realization(*angles);
                const chsh::ProbabilityPoint p = chsh::point_from_realization(r);
                chsh::json j{{"realization", chsh::to_json(r)},
                             {"point", chsh::to_json(p)},
                             {"probabilities", chsh::to_json(chsh::probabilities_from_point(p))}};
                print_json(j);
                return kExitOk;
            };
        });
    }

    // ---- probabilities ---------------------------------------------------
    auto prob_point = std::make_shared<std::vector<double>>();
    {
        CLI::App *cmd = app.add_subcommand(
            "probabilities", "outcome probability table p(ab|xy) of an 8-vector point");
        cmd->add_option("--point", *prob_point,
                        "8 comma-separated values: 4 marginals then 4 correlators")
            ->required()
            ->delimiter(',');
        cmd->callback([prob_point, &action] {
            action = [prob_point] {
                const chsh::ProbabilityPoint p = point_from_values(*prob_point);
                const chsh::ProbabilityTable t = chsh::probabilities_from_point(p);
                chsh::json j{{"point", chsh::to_json(p)},
                             {"probabilities", chsh::to_json(t)},
                             {"normalization_residual", t.normalization_residual()},
                             {"no_signalling_residual", t.no_signalling_residual()}};
                print_json(j);
                return kExitOk;
            };
        });
    }

    // ---- value -----------------------------------------------------------
    auto coeffs = std::make_shared<std::vector<double>>();
    {
        CLI::App *cmd =
            app.add_subcommand("value", "local and non-signalling values of a functional");
        cmd->add_option("--coeffs", *coeffs, "8 comma-separated functional coefficients")
            ->required()
            ->delimiter(',');
        cmd->callback([coeffs, &action] {
            action = [coeffs] {
                print_json(chsh::to_json(chsh::local_value(functional_from_values(*coeffs))));
                return kExitOk;
            };
        });
    }

    // ---- maximize --------------------------------------------------------
    auto max_coeffs = std::make_shared<std::vector<double>>();
    auto grid_n = std::make_shared<int>(64);
    auto refine_tol = std::make_shared<double>(1e-10);
    {
        CLI::App *cmd = app.add_subcommand(
            "maximize", "quantum value of a functional via the two-angle spectral search");
        cmd->add_option("--coeffs", *max_coeffs, "8 comma-separated functional coefficients")
            ->required()
            ->delimiter(',');
        cmd->add_option("--grid", *grid_n, "grid cells per axis (default 64)");
        cmd->add_option("--tol", *refine_tol, "refinement tolerance (default 1e-10)");
        cmd->callback([max_coeffs, grid_n, refine_tol, &action] {
            action = [max_coeffs, grid_n, refine_tol] {
                const auto qm = chsh::maximize_quantum_value(
                    functional_from_values(*max_coeffs), *grid_n, *refine_tol);
                print_json(chsh::to_json(qm));
                return kExitOk;
            };
        });
    }

    // ---- family ----------------------------------------------------------
    {
        CLI::App *fam = app.add_subcommand("family", "closed-form family solvers");
        fam->require_subcommand(1);

        auto dt_alpha = std::make_shared<double>(0.0);
        auto dt_phi = std::make_shared<double>(0.0);
        CLI::App *dt = fam->add_subcommand("double-tilted", "Double-Tilted CHSH solver");
        dt->add_option("--alpha", *dt_alpha, "tilt magnitude, |alpha| < 2")->required();
        dt->add_option("--phi", *dt_phi, "tilt direction angle")->required();
        dt->callback([dt_alpha, dt_phi, &action] {
            action = [dt_alpha, dt_phi] {
                const chsh::DoubleTiltedParams p(*dt_alpha, to_radians(*dt_phi));
                print_json(chsh::to_json(chsh::double_tilted_solve(p)));
                return kExitOk;
            };
        });

        auto wy_a0 = std::make_shared<double>(0.0);
        auto wy_a1 = std::make_shared<double>(0.0);
        CLI::App *wy = fam->add_subcommand("wolfe-yelin", "Generalised Wolfe-Yelin solver");
        wy->add_option("--alpha0", *wy_a0, "marginal weight, in (-1, 1)")->required();
        wy->add_option("--alpha1", *wy_a1, "Bob marginal weight, in [0, 2]")->required();
        wy->callback([wy_a0, wy_a1, &action] {
            action = [wy_a0, wy_a1] {
                const chsh::WolfeYelinParams p(*wy_a0, *wy_a1);
                print_json(chsh::to_json(chsh::wolfe_yelin_solve(p)));
                return kExitOk;
            };
        });
    }

    // ---- realize ---------------------------------------------------------
    auto realize_point_values = std::make_shared<std::vector<double>>();
    {
        CLI::App *cmd = app.add_subcommand(
            "realize", "canonical two-qubit realisations of an 8-vector point");
        cmd->add_option("--point", *realize_point_values,
                        "8 comma-separated values: 4 marginals then 4 correlators")
            ->required()
            ->delimiter(',');
        cmd->callback([realize_point_values, &action] {
            action = [realize_point_values] {
                const chsh::ProbabilityPoint p = point_from_values(*realize_point_values);
                const chsh::ReconstructionResult rec = chsh::realize_point(p);
                chsh::json reals = chsh::json::array();
                for (const auto &r : rec.realizations) {
                    reals.push_back(chsh::to_json(r));
                }
                print_json(chsh::json{{"branch", rec.branch},
                                      {"count", rec.realizations.size()},
                                      {"realizations", reals}});
                return kExitOk;
            };
        });
    }

    // ---- extremal --------------------------------------------------------
    auto ext_angles = std::make_shared<AngleArgs>();
    auto ext_method = std::make_shared<std::string>("both");
    auto ext_reproducer = std::make_shared<std::string>("chsh-disagreement.json");
    {
        CLI::App *cmd = app.add_subcommand(
            "extremal", "extremality verdict for a canonical realisation");
        add_realization_flags(cmd, *ext_angles);
        cmd->add_option("--method", *ext_method, "ishizaka | conjecture | both (default)")
            ->check(CLI::IsMember({"ishizaka", "conjecture", "both"}));
        cmd->add_option("--reproducer", *ext_reproducer,
                        "file for the reproducer dump on disagreement");
        cmd->callback([ext_angles, ext_method, ext_reproducer, &action] {
            action = [ext_angles, ext_method, ext_reproducer] {
                const chsh::Realization r = make_realization(*ext_angles);
                const chsh::ExtremalityReport rep = chsh::evaluate_extremality(r);
                print_json(chsh::to_json(rep));
                if (*ext_method == "ishizaka") {
                    return rep.conjecture1.extremal ? kExitOk : kExitNonExtremal;
                }
                if (*ext_method == "conjecture") {
                    return rep.conjecture2.extremal ? kExitOk : kExitNonExtremal;
                }
                if (!rep.agreement) {
                    std::ofstream os(*ext_reproducer);
                    os << chsh::to_json(rep).dump(2) << "\n";
                    std::cerr << "conjectures disagree; reproducer written to "
                              << *ext_reproducer << "\n";
                    return kExitDisagreement;
                }
                return rep.conjecture1.extremal ? kExitOk : kExitNonExtremal;
            };
        });
    }

    // ---- expose ----------------------------------------------------------
    auto exp_angles = std::make_shared<AngleArgs>();
    {
        CLI::App *cmd = app.add_subcommand(
            "expose", "exposing-functional linear program for a realisation");
        add_realization_flags(cmd, *exp_angles);
        cmd->callback([exp_angles, &action] {
            action = [exp_angles] {
                const chsh::Realization r = make_realization(*exp_angles);
                print_json(chsh::to_json(chsh::solve_expose_lp(chsh::build_expose_lp(r))));
                return kExitOk;
            };
        });
    }

    // ---- certify ---------------------------------------------------------
    auto cert_angles = std::make_shared<AngleArgs>();
    auto cert_grid = std::make_shared<int>(64);
    {
        CLI::App *cmd = app.add_subcommand(
            "certify", "exposedness certificate: LP + spectral round trip");
        add_realization_flags(cmd, *cert_angles);
        cmd->add_option("--grid", *cert_grid, "grid cells per axis for the round trip");
        cmd->callback([cert_angles, cert_grid, &action] {
            action = [cert_angles, cert_grid] {
                const chsh::Realization r = make_realization(*cert_angles);
                print_json(chsh::to_json(chsh::certify_exposed(r, *cert_grid)));
                return kExitOk;
            };
        });
    }

    // ---- scan ------------------------------------------------------------
    {
        CLI::App *scan = app.add_subcommand("scan", "family region scans to CSV");
        scan->require_subcommand(1);

        auto dt_cfg = std::make_shared<chsh::ScanConfig>();
        dt_cfg->family = "double-tilted";
        dt_cfg->min1 = 0.0;
        dt_cfg->max1 = 2.0;
        dt_cfg->min2 = 0.0;
        dt_cfg->max2 = chsh::kPi / 2;
        auto dt_out = std::make_shared<std::string>();
        CLI::App *dt = scan->add_subcommand("double-tilted",
                                            "scan (alpha, phi) over the admissible box");
        dt->add_option("--alpha-min", dt_cfg->min1, "alpha axis start (default 0)");
        dt->add_option("--alpha-max", dt_cfg->max1, "alpha axis end, half-open (default 2)");
        dt->add_option("--phi-min", dt_cfg->min2, "phi axis start (default 0)");
        dt->add_option("--phi-max", dt_cfg->max2, "phi axis end, half-open (default pi/2)");
        dt->add_option("--steps", dt_cfg->steps, "grid steps per axis (default 100)");
        dt->add_option("--threads", dt_cfg->threads, "worker threads (default: automatic)");
        dt->add_option("--output", *dt_out, "CSV output path ('-' for stdout)")->required();
        dt->callback([dt_cfg, dt_out, &action] {
            action = [dt_cfg, dt_out] {
                const auto rows = chsh::scan_double_tilted(*dt_cfg);
                return with_output(*dt_out, [&rows](std::ostream &os) {
                    chsh::write_csv(os, rows);
                });
            };
        });

        auto wy_cfg = std::make_shared<chsh::ScanConfig>();
        wy_cfg->family = "wolfe-yelin";
        wy_cfg->min1 = -0.99;
        wy_cfg->max1 = 0.99;
        wy_cfg->min2 = 0.0;
        wy_cfg->max2 = 2.0;
        auto wy_out = std::make_shared<std::string>();
        CLI::App *wy = scan->add_subcommand(
            "wolfe-yelin", "scan (alpha0, alpha1) including the extended-point column");
        wy->add_option("--alpha0-min", wy_cfg->min1, "alpha0 axis start (default -0.99)");
        wy->add_option("--alpha0-max", wy_cfg->max1,
                       "alpha0 axis end, half-open (default 0.99)");
        wy->add_option("--alpha1-min", wy_cfg->min2, "alpha1 axis start (default 0)");
        wy->add_option("--alpha1-max", wy_cfg->max2, "alpha1 axis end, half-open (default 2)");
        wy->add_option("--steps", wy_cfg->steps, "grid steps per axis (default 100)");
        wy->add_option("--threads", wy_cfg->threads, "worker threads (default: automatic)");
        wy->add_option("--output", *wy_out, "CSV output path ('-' for stdout)")->required();
        wy->callback([wy_cfg, wy_out, &action] {
            action = [wy_cfg, wy_out] {
                const auto rows = chsh::scan_wolfe_yelin(*wy_cfg);
                return with_output(*wy_out, [&rows](std::ostream &os) {
                    chsh::write_csv(os, rows);
                });
            };
        });
    }

    // ---- compare ---------------------------------------------------------
    auto cmp_cfg = std::make_shared<chsh::CompareConfig>();
    auto cmp_out = std::make_shared<std::string>("-");
    {
        CLI::App *cmd = app.add_subcommand(
            "compare", "randomized cross-validation of the two extremality conjectures");
        cmd->add_option("--samples", cmp_cfg->samples, "number of random realisations")
            ->required();
        cmd->add_option("--seed", cmp_cfg->seed, "random seed")->required();
        cmd->add_option("--threads", cmp_cfg->threads, "worker threads (default: automatic)");
        cmd->add_flag("--certify", cmp_cfg->certify,
                      "also run the exposedness round trip per sample (slow)");
        cmd->add_option("--output", *cmp_out, "CSV output path ('-' for stdout)");
        cmd->callback([cmp_cfg, cmp_out, &action] {
            action = [cmp_cfg, cmp_out] {
                const chsh::CompareOutput out = chsh::run_compare(*cmp_cfg);
                const int rc = with_output(*cmp_out, [&](std::ostream &os) {
                    chsh::write_csv(os, out, cmp_cfg->certify);
                });
                if (rc != kExitOk) {
                    return rc;
                }
                std::cerr << "samples=" << out.summary.samples
                          << " agreement=" << chsh::csv_number(out.summary.agreement_fraction)
                          << " extremal_both=" << out.summary.extremal_both
                          << " disagreements=" << out.summary.disagreements;
                if (cmp_cfg->certify) {
                    std::cerr << " proven_exposed=" << out.summary.proven_exposed;
                }
                std::cerr << "\n";
                if (out.summary.disagreements > 0) {
                    const std::string path = (*cmp_out == "-" ? std::string("compare")
                                                              : *cmp_out) +
                                             ".disagreements.json";
                    chsh::json dumps = chsh::json::array();
                    for (const auto &row : out.rows) {
                        if (!row.agree) {
                            dumps.push_back(chsh::to_json(
                                chsh::evaluate_extremality(row.realization)));
                        }
                    }
                    std::ofstream os(path);
                    os << dumps.dump(2) << "\n";
                    std::cerr << "conjectures disagree on " << out.summary.disagreements
                              << " sample(s); reproducers written to " << path << "\n";
                    return kExitDisagreement;
                }
                return kExitOk;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
