// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "hvi/cli.hpp"
#include "hvi/diagnostics.hpp"
#include "hvi/errors.hpp"
#include "hvi/plot.hpp"
#include "hvi/solver.hpp"
#include "hvi/study.hpp"
#include "manufactured.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hvi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

void run_criterion(int id, const std::string& name, const std::function<Outcome()>& fn) {
    try {
        report(id, name, fn());
    } catch (const std::exception& e) {
        report(id, name, {false, std::string("exception: ") + e.what()});
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CliStudy {
    int code = -1;
    double seconds = 0.0;
    study::ConvergenceTable table;
    std::string csv;
};

CliStudy run_cli_study(const std::string& problem, const std::string& levels, int ref, const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    CliStudy r;
    r.code = cli_main({"study", "--problem", problem, "--levels", levels, "--ref", std::to_string(ref), "--outdir",
                       dir.string()},
                      out, err);
    r.seconds = seconds_since(t0);
    if (r.code != 0) {
        std::fprintf(stderr, "%s", err.str().c_str());
        return r;
    }
    r.csv = read_file(dir / (problem + "_table.csv"));
    r.table = study::parse_table_json(read_file(dir / (problem + "_table.json")));
    return r;
}

Outcome table_gate(const std::string& problem, const std::vector<double>& published_errors,
                   const std::vector<double>& published_orders) {
    const CliStudy s = run_cli_study(problem, "3..7", 9, fs::path("acceptance_out") / problem);
    if (s.code != 0) return {false, "study exited with " + std::to_string(s.code)};
    const auto& rows = s.table.rows;
    if (rows.size() != 5) return {false, "expected 5 rows"};
    bool ok = s.seconds < 15 * 60;
    std::string d = "time " + fmt("%.1f", s.seconds) + " s; orders";
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double o = *rows[k].orders[0];
        ok = ok && std::abs(o - published_orders[k - 1]) <= 0.10;
        d += " " + fmt("%.4f", o) + "/" + fmt("%.4f", published_orders[k - 1]);
    }
    d += "; ratios";
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double ratio = rows[k - 1].errors[0] / rows[k].errors[0];
        ok = ok && rows[k].errors[0] < rows[k - 1].errors[0] && ratio >= 1.7 && ratio <= 2.3;
        d += " " + fmt("%.3f", ratio);
    }
    // Magnitudes are reported against the published errors but not gated.
    d += "; error/published";
    for (std::size_t k = 0; k < rows.size(); ++k) d += " " + fmt("%.3f", rows[k].errors[0] / published_errors[k]);
    return {ok, d};
}

} // namespace

int main() {
    std::printf("acceptance run\n");

    run_criterion(4, "manufactured rates and patch test", [] {
        std::vector<manufactured::Errors> e;
        for (int level = 3; level <= 6; ++level) e.push_back(manufactured::smooth_dirichlet_errors(level));
        bool ok = true;
        std::string d = "H1 orders";
        for (std::size_t k = 0; k + 1 < e.size(); ++k) {
            const double o = std::log2(e[k].h1 / e[k + 1].h1);
            ok = ok && std::abs(o - 1.0) <= 0.05;
            d += " " + fmt("%.4f", o);
        }
        d += "; L2 orders";
        for (std::size_t k = 0; k + 1 < e.size(); ++k) {
            const double o = std::log2(e[k].l2 / e[k + 1].l2);
            ok = ok && std::abs(o - 2.0) <= 0.10;
            d += " " + fmt("%.4f", o);
        }
        double patch = 0.0;
        for (int level = 3; level <= 6; ++level) patch = std::max(patch, manufactured::patch_test_errors(level).h1);
        ok = ok && patch <= 1e-10;
        d += "; patch H1 error " + fmt("%.2e", patch);
        return Outcome{ok, d};
    });

    run_criterion(5, "uniform boundedness", [] {
        bool ok = true;
        std::string d;
        for (const char* name : {"example1", "example2"}) {
            double lo = INFINITY, hi = 0.0;
            for (int level = 3; level <= 7; ++level) {
                const auto m = mesh::build_uniform_mesh(level);
                const auto sol = solver::solve_hvi(m, coeff::get_problem(name));
                const double v = study::discrete_norm(sol.u, study::NormKind::V, m);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ok = ok && hi / lo <= 1.10;
            d += std::string(d.empty() ? "" : "; ") + name + " max/min " + fmt("%.4f", hi / lo);
        }
        return Outcome{ok, d};
    });

    run_criterion(6, "discrete inequality verification", [] {
        bool ok = true;
        std::string d;
        for (const char* name : {"example1", "example2"}) {
            const auto m = mesh::build_uniform_mesh(5);
            const auto spec = coeff::get_problem(name);
            const auto sol = solver::solve_hvi(m, spec);
            const auto r = solver::verify_discrete_hvi(sol, m, spec, 1e-8);
            ok = ok && r.passed && r.worst_violation <= 1e-8;
            d += std::string(d.empty() ? "" : "; ") + name + " worst " + fmt("%.2e", r.worst_violation) + " over " +
                 std::to_string(r.checks) + " checks";
        }
        return Outcome{ok, d};
    });

    run_criterion(7, "multiplier fidelity", [] {
        bool ok = true;
        std::string d;
        const auto e1 = coeff::get_problem("example1");
        ok = ok && e1.boundary_potential.a == 0.5 && e1.boundary_potential.b == 0.5;
        ok = ok && e1.interior_potential.a == 1.0 && e1.interior_potential.b == 1.0;
        for (const char* name : {"example1", "example2"}) {
            const auto m = mesh::build_uniform_mesh(5);
            const auto sol = solver::solve_hvi(m, coeff::get_problem(name));
            for (auto kind : {plot::MultiplierKind::boundary, plot::MultiplierKind::interior}) {
                const auto& p = kind == plot::MultiplierKind::boundary ? sol.boundary_potential : sol.interior_potential;
                plot::PlotReport r;
                (void)plot::multiplier_svg(sol, p, kind, &r);
                // Independent distance check of every scatter point.
                double worst = 0.0;
                for (const auto& pt : plot::multiplier_scatter(sol, kind)) {
                    double dist;
                    if (std::abs(pt.t) <= sol.zero_band) {
                        dist = std::max({0.0, -pt.m, pt.m - (p.a + p.b)});
                    } else {
                        dist = std::abs(pt.m - (pt.t < 0.0 ? 0.0 : p.a * std::exp(-p.a * pt.t) + p.b));
                    }
                    worst = std::max(worst, dist);
                }
                ok = ok && worst <= 1e-6 && r.max_distance <= 1e-6;
                d += std::string(d.empty() ? "" : "; ") + name +
                     (kind == plot::MultiplierKind::boundary ? " lambda " : " mu ") + std::to_string(r.points) +
                     " points, max distance " + fmt("%.1e", worst);
            }
        }
        return Outcome{ok, d};
    });

    run_criterion(8, "diagnostics", [] {
        constexpr double pi2 = std::numbers::pi * std::numbers::pi;
        coeff::ProblemSpec lap = coeff::get_problem("example1");
        auto num = [](double v) { return coeff::Expr::constant(v); };
        lap.tensor = {{{num(1), num(0)}, {num(0), num(1)}}};
        lap.reaction = num(0);
        const double mixed = solver::estimate_lambda_L(mesh::build_uniform_mesh(6), lap);
        const double dir =
            solver::estimate_lambda_L(mesh::build_uniform_mesh(6, mesh::BoundaryLayout::all_dirichlet), lap);
        const double theta = coeff::estimate_theta(coeff::get_problem("example1"));
        const double rel_mixed = std::abs(mixed - 1.25 * pi2) / (1.25 * pi2);
        const double rel_dir = std::abs(dir - 2 * pi2) / (2 * pi2);
        const double theta_err = std::abs(theta - (3 - std::sqrt(5.0)) / 2);
        const bool ok = rel_mixed <= 0.01 && rel_dir <= 0.01 && theta_err <= 1e-9;
        return Outcome{ok, "lambda_L " + fmt("%.5f", mixed) + " (rel " + fmt("%.2e", rel_mixed) + "), Dirichlet " +
                               fmt("%.5f", dir) + " (rel " + fmt("%.2e", rel_dir) + "), theta error " +
                               fmt("%.1e", theta_err)};
    });

    run_criterion(9, "nonsmooth invariants", [] {
        std::mt19937_64 rng(20260417);
        std::uniform_real_distribution<double> U(-5.0, 5.0);
        std::uniform_real_distribution<double> S(0.0, 10.0);
        long bad = 0;
        const nonsmooth::PotentialParams params[] = {{1.0, 1.0}, {0.5, 0.5}};
        for (const auto& base : params) {
            for (auto sel : {nonsmooth::SelectionAtZero::left, nonsmooth::SelectionAtZero::right,
                             nonsmooth::SelectionAtZero::mid}) {
                auto p = base;
                p.selection_at_zero = sel;
                const double alpha = p.a * p.a;
                for (int k = 0; k < 1000; ++k) {
                    // Every fourth sample sits on the kink.
                    const double t = k % 4 == 0 ? 0.0 : U(rng);
                    const double t2 = k % 7 == 0 ? 0.0 : U(rng);
                    const double v = U(rng), w = U(rng), s = S(rng);
                    const double eps = 1e-12 * (1 + std::abs(v) + std::abs(w)) * (p.a + p.b);
                    if (nonsmooth::clarke_j0(t, v + w, p) >
                        nonsmooth::clarke_j0(t, v, p) + nonsmooth::clarke_j0(t, w, p) + eps)
                        ++bad;
                    if (std::abs(nonsmooth::clarke_j0(t, s * v, p) - s * nonsmooth::clarke_j0(t, v, p)) >
                        1e-12 * (1 + s * std::abs(v)) * (p.a + p.b))
                        ++bad;
                    if (nonsmooth::subdiff_selection(t, p) * v > nonsmooth::clarke_j0(t, v, p) + eps) ++bad;
                    const double lhs = nonsmooth::clarke_j0(t, t2 - t, p) + nonsmooth::clarke_j0(t2, t - t2, p);
                    if (lhs > alpha * (t - t2) * (t - t2) + 1e-12 * (1 + std::abs(t - t2))) ++bad;
                }
            }
        }
        return Outcome{bad == 0, "6 x 1000 samples x 4 invariants, " + std::to_string(bad) + " violations"};
    });

    auto smoke_run = [](int run, std::string& csv, double& seconds) {
        std::string d;
        bool ok = true;
        seconds = 0.0;
        for (const char* name : {"example1", "example2"}) {
            const CliStudy s =
                run_cli_study(name, "3..5", 7, fs::path("acceptance_out") / ("smoke" + std::to_string(run)) / name);
            if (s.code != 0) return Outcome{false, std::string(name) + " exited with " + std::to_string(s.code)};
            seconds += s.seconds;
            csv += s.csv;
            d += std::string(name) + " orders";
            for (std::size_t k = 1; k < s.table.rows.size(); ++k) {
                const double o = *s.table.rows[k].orders[0];
                ok = ok && o >= 0.85 && o <= 1.15;
                d += " " + fmt("%.4f", o);
            }
            d += "; ";
        }
        return Outcome{ok, d};
    };

    std::string first_csv;
    run_criterion(3, "desk-scale study", [&] {
        double seconds = 0.0;
        Outcome o = smoke_run(0, first_csv, seconds);
        o.pass = o.pass && seconds < 60.0;
        o.detail += "time " + fmt("%.1f", seconds) + " s";
        return o;
    });

    run_criterion(10, "determinism", [&] {
        std::string second_csv;
        double seconds = 0.0;
        const Outcome o = smoke_run(1, second_csv, seconds);
        if (!o.pass && second_csv.empty()) return o;
        const bool same = !first_csv.empty() && first_csv == second_csv;
        return Outcome{same, same ? "CSV outputs of two sequential runs are byte-identical" : "CSV outputs differ"};
    });

    run_criterion(2, "table reproduction, example2", [] {
        return table_gate("example2", {0.69671, 0.35778, 0.18010, 0.089772, 0.043836},
                          {0.9615, 0.9902, 1.0045, 1.0342});
    });

    run_criterion(1, "table reproduction, example1", [] {
        return table_gate("example1", {2.4346, 1.2693, 0.64350, 0.32560, 0.15850}, {0.9396, 0.9801, 0.9962, 1.0256});
    });

    std::printf("%s: %d criterion check(s) failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
