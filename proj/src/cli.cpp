#include "hvi/cli.hpp"

#include "hvi/config.hpp"
#include "hvi/diagnostics.hpp"
#include "hvi/errors.hpp"
#include "hvi/plot.hpp"
#include "hvi/solution_io.hpp"
#include "hvi/study.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace hvi {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string join(const std::filesystem::path& dir, const std::string& file) { return (dir / file).string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

struct Common {
    std::string problem;
    std::string config;
};

config::ConfigFile load_optional_config(const std::string& path) {
    return path.empty() ? config::ConfigFile{} : config::load_config(path);
}

void write_plots(const solver::HviSolution& sol, const std::string& outdir, const std::string& prefix,
                 std::ostream& out) {
    const auto lam = plot::emit_multiplier_plot(sol, sol.boundary_potential, plot::MultiplierKind::boundary,
                                                join(outdir, prefix + "_lambda.svg"));
    const auto mu = plot::emit_multiplier_plot(sol, sol.interior_potential, plot::MultiplierKind::interior,
                                               join(outdir, prefix + "_mu.svg"));
    plot::emit_solution_plot(sol, join(outdir, prefix + "_solution.svg"));
    out << "wrote " << join(outdir, prefix + "_lambda.svg") << " (" << lam.points
        << " points, max graph distance " << fmt("%.3e", lam.max_distance) << ")\n";
    out << "wrote " << join(outdir, prefix + "_mu.svg") << " (" << mu.points << " points, max graph distance "
        << fmt("%.3e", mu.max_distance) << ")\n";
    out << "wrote " << join(outdir, prefix + "_solution.svg") << "\n";
}

int run_solve(const Common& c, int level, const std::string& out_path, std::ostream& out) {
    const auto file = load_optional_config(c.config);
    const auto registry = config::make_registry(file);
    const auto& spec = registry.get(c.problem);
    solver::SolverParams params;
    config::apply_solver_settings(file.solver, params);
    const mesh::Mesh m = mesh::build_uniform_mesh(level);
    const auto sol = solver::solve_hvi(m, spec, params);
    const std::string path = out_path.empty() ? c.problem + "_level" + std::to_string(level) + ".sol" : out_path;
    io::save_solution(path, m, sol);
    out << "problem " << spec.name << ", level " << level << " (h = 2^-" << level << "), " << m.free_dofs().size()
        << " free dofs\n";
    out << "converged after " << sol.iterations << " outer / " << sol.inner_iterations
        << " inner iterations, last relative change " << fmt("%.3e", sol.history.back()) << "\n";
    out << "|u_h|_V = " << fmt("%.6g", study::discrete_norm(sol.u, study::NormKind::V, m)) << "\n";
    out << "wrote " << path << "\n";
    return 0;
}

int run_study(const Common& c, const std::optional<std::string>& levels, const std::optional<int>& ref,
              const std::optional<std::string>& outdir, const std::optional<std::string>& norms,
              const std::optional<std::string>& emit, std::ostream& out) {
    const auto file = load_optional_config(c.config);
    const auto registry = config::make_registry(file);
    study::StudyConfig cfg;
    config::apply_study_settings(file.study, cfg);
    config::apply_solver_settings(file.solver, cfg.solver);
    std::map<std::string, std::string> overrides;
    if (!c.problem.empty()) overrides["problem"] = c.problem;
    if (levels) overrides["levels"] = *levels;
    if (ref) overrides["ref"] = std::to_string(*ref);
    if (outdir) overrides["outdir"] = *outdir;
    if (norms) overrides["norms"] = *norms;
    if (emit) overrides["emit"] = *emit;
    config::apply_study_settings(overrides, cfg);
    cfg.validate();
    const auto& spec = registry.get(cfg.problem);

    const auto start = std::chrono::steady_clock::now();
    const auto result = study::run_convergence_study(cfg, spec);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ensure_dir(cfg.outdir);
    out << study::format_table_csv(result.table);
    if (cfg.emit_csv) {
        const std::string path = join(cfg.outdir, cfg.problem + "_table.csv");
        study::emit_table(result.table, study::TableFormat::csv, path);
        out << "wrote " << path << "\n";
    }
    if (cfg.emit_json) {
        const std::string path = join(cfg.outdir, cfg.problem + "_table.json");
        study::emit_table(result.table, study::TableFormat::json, path);
        out << "wrote " << path << "\n";
    }
    if (cfg.emit_svg) write_plots(result.finest, cfg.outdir, cfg.problem, out);
    out << "study finished in " << fmt("%.1f", seconds) << " s\n";
    return 0;
}

int run_diagnose(const Common& c, int level, std::ostream& out) {
    const auto file = load_optional_config(c.config);
    const auto registry = config::make_registry(file);
    const auto& spec = registry.get(c.problem);
    const mesh::Mesh m = mesh::build_uniform_mesh(level);
    const auto d = solver::compute_diagnostics(m, spec);
    const auto h1 = nonsmooth::estimate_hj_constants(spec.interior_potential);
    const auto h2 = nonsmooth::estimate_hj_constants(spec.boundary_potential);
    out << "problem " << spec.name << ", level " << level << "\n";
    out << solver::smallness_check(d).text;
    out << "j1 growth: |dj1(t)| <= " << fmt("%.6g", h1.c0_hat) << " + " << fmt("%.6g", h1.c1_hat) << " |t|\n";
    out << "j2 growth: |dj2(t)| <= " << fmt("%.6g", h2.c0_hat) << " + " << fmt("%.6g", h2.c1_hat) << " |t|\n";
    return 0;
}

int run_plot(const std::string& input, const std::string& outdir, const std::string& prefix, std::ostream& out) {
    const auto sol = io::load_solution(input);
    ensure_dir(outdir);
    write_plots(sol, outdir, prefix.empty() ? sol.problem : prefix, out);
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite element solver for elliptic hemivariational inequalities", "hvi"};
    app.require_subcommand(1);

    Common solve_c;
    int solve_level = 5;
    std::string solve_out;
    auto* solve = app.add_subcommand("solve", "Solve one problem on one mesh level and write a solution dump");
    solve->add_option("--problem", solve_c.problem, "Problem name")->required();
    solve->add_option("--level", solve_level, "Refinement level n (h = 2^-n)")->required()->check(CLI::Range(1, 12));
    solve->add_option("--config", solve_c.config, "Config file with [problem], [solver] sections");
    solve->add_option("--out", solve_out, "Output path (default <problem>_level<n>.sol)");

    Common study_c;
    std::optional<std::string> levels, study_outdir, norms, emit;
    std::optional<int> ref;
    auto* study = app.add_subcommand("study", "Run a mesh convergence study against a fine reference solution");
    study->add_option("--problem", study_c.problem, "Problem name");
    study->add_option("--levels", levels, "Ladder levels a..b (default 3..7)");
    study->add_option("--ref", ref, "Reference level (default 9)");
    study->add_option("--outdir", study_outdir, "Output directory (default .)");
    study->add_option("--norms", norms, "Comma list of H1, V, L2, L2_GammaS (default H1)");
    study->add_option("--emit", emit, "Comma list of csv, json, svg (default all)");
    study->add_option("--config", study_c.config, "Config file");

    Common diag_c;
    int diag_level = 5;
    auto* diagnose = app.add_subcommand("diagnose", "Print ellipticity, eigenvalue and smallness diagnostics");
    diagnose->add_option("--problem", diag_c.problem, "Problem name")->required();
    diagnose->add_option("--level", diag_level, "Refinement level (default 5)")->check(CLI::Range(1, 12));
    diagnose->add_option("--config", diag_c.config, "Config file");

    std::string plot_input, plot_outdir = ".", plot_prefix;
    auto* plotcmd = app.add_subcommand("plot", "Regenerate SVG plots from a solution dump");
    plotcmd->add_option("--input", plot_input, "Solution dump written by solve")->required();
    plotcmd->add_option("--outdir", plot_outdir, "Output directory (default .)");
    plotcmd->add_option("--prefix", plot_prefix, "File name prefix (default: problem name)");

    if (args.empty()) {
        out << app.help();
        return 2;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    try {
        if (*solve) return run_solve(solve_c, solve_level, solve_out, out);
        if (*study) return run_study(study_c, levels, ref, study_outdir, norms, emit, out);
        if (*diagnose) return run_diagnose(diag_c, diag_level, out);
        if (*plotcmd) return run_plot(plot_input, plot_outdir, plot_prefix, out);
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, std::cout, std::cerr);
}

} // namespace hvi
