#pragma once

#include "hvi/coefficients.hpp"
#include "hvi/mesh.hpp"
#include "hvi/solver.hpp"
#include "hvi/sparse.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hvi::study {

/// H1: full norm; V: H1 seminorm; L2; L2_GammaS: L2 on the semipermeable side.
enum class NormKind { H1, V, L2, L2_GammaS };

[[nodiscard]] std::string to_string(NormKind kind);
/// Throws InvalidArgument for an unknown name.
[[nodiscard]] NormKind parse_norm(std::string_view text);
/// Comma-separated list, e.g. "H1,L2". Throws InvalidArgument when empty.
[[nodiscard]] std::vector<NormKind> parse_norm_list(std::string_view text);

/// Norm operators of one mesh, assembled once.
class NormEvaluator {
public:
    explicit NormEvaluator(const mesh::Mesh& mesh);
    [[nodiscard]] double operator()(const std::vector<double>& values, NormKind kind) const;

private:
    fem::SparseOperator laplace_;
    fem::SparseOperator mass_;
    fem::SparseOperator boundary_mass_;
};

/// Exact for P1 fields.
double discrete_norm(const mesh::DiscreteField& field, NormKind kind, const mesh::Mesh& mesh);

struct StudyConfig {
    std::string problem = "example1";
    int level_min = 3;
    int level_max = 7;
    int ref_level = 9;
    std::vector<NormKind> norms{NormKind::H1};
    std::string outdir = ".";
    bool emit_csv = true;
    bool emit_json = true;
    bool emit_svg = true;
    solver::SolverParams solver;

    /// Throws InvalidArgument unless 1 <= level_min <= level_max < ref_level <= 12 and norms is nonempty.
    void validate() const;
};

/// Parses "a..b" (or a single level "a").
std::pair<int, int> parse_level_range(std::string_view text);

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    std::vector<double> errors;                 ///< one per norm of the table
    std::vector<std::optional<double>> orders;  ///< absent on the first row
};

struct ConvergenceTable {
    std::string problem;
    std::vector<NormKind> norms;
    std::vector<ConvergenceRow> rows;
};

struct StudyResult {
    ConvergenceTable table;
    /// Solution on the finest ladder level.
    solver::HviSolution finest;
    /// |u_h|_V for every ladder level.
    std::vector<double> seminorms;
    std::vector<int> outer_iterations;
};

/// Solves on the reference level and each ladder level, prolongs to the
/// reference mesh and measures the errors there. A failing solve is rethrown
/// as NonConvergenceError naming the level.
StudyResult run_convergence_study(const StudyConfig& cfg, const coeff::ProblemSpec& spec);

/// Rows from given errors (level ascending); orders are log2 ratios.
ConvergenceTable make_table(std::string problem, std::vector<NormKind> norms, const std::vector<int>& levels,
                            const std::vector<std::vector<double>>& errors);

enum class TableFormat { csv, json };

/// Six significant digits in the form 1.26930e0.
[[nodiscard]] std::string format_sig6(double value);
[[nodiscard]] std::string format_table_csv(const ConvergenceTable& table);
/// Array of row objects with full-precision numbers.
[[nodiscard]] std::string format_table_json(const ConvergenceTable& table);
ConvergenceTable parse_table_json(std::string_view text);

/// Throws InvalidArgument for an empty table or norm list and IoError if the file cannot be written.
void emit_table(const ConvergenceTable& table, TableFormat format, const std::string& path);

} // namespace hvi::study
