#pragma once

#include "hvi/coefficients.hpp"
#include "hvi/solver.hpp"
#include "hvi/study.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hvi::config {

/// Contents of a line-oriented config file:
///
///   # comment
///   [problem mine]
///   a11 = 1
///   a12 = x*y          (a21 defaults to a12; both default to 0)
///   a22 = 10
///   a0  = 1            (default 0)
///   f0  = sin(pi*x)
///   j1  = 1, 1
///   j2  = 0.5, 0.5
///   [solver]
///   outer_tol = 1e-10
///   [study]
///   levels = 3..7
struct ConfigFile {
    std::vector<coeff::ProblemSpec> problems;
    std::map<std::string, std::string> solver;
    std::map<std::string, std::string> study;
};

/// Throws ParseError (column 1, message naming the line) on malformed input.
ConfigFile parse_config(std::string_view text);
/// Throws IoError if the file cannot be read.
ConfigFile load_config(const std::string& path);

/// Keys: outer_tol, outer_maxit, damping, cg_tol, cg_maxit, selection_at_zero, linear_solver.
void apply_solver_settings(const std::map<std::string, std::string>& kv, solver::SolverParams& params);
/// Keys: problem, levels, ref, norms, outdir, emit (comma list of csv, json, svg).
void apply_study_settings(const std::map<std::string, std::string>& kv, study::StudyConfig& cfg);

/// Built-in problems plus those of `file`.
coeff::ProblemRegistry make_registry(const ConfigFile& file);

} // namespace hvi::config
