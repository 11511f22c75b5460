#pragma once

#include "hvi/sparse.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hvi::linalg {

struct CgStats {
    long iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Stops when
/// ||A x - b|| <= tol ||b|| (recursive residual); maxit <= 0 means 10 * dimension.
/// Throws SolverError carrying the last relative residual on failure.
std::vector<double> cg_solve(const fem::SparseOperator& op, const std::vector<double>& rhs, double tol, long maxit,
                             const std::vector<double>* initial_guess = nullptr, CgStats* stats = nullptr);

enum class LinearSolverKind { cholesky, cg };

[[nodiscard]] std::string to_string(LinearSolverKind kind);
/// Accepts "cholesky" or "cg".
[[nodiscard]] LinearSolverKind parse_linear_solver(std::string_view text);

/// Repeated solves with one SPD operator. The Cholesky variant factors once;
/// the CG variant warm-starts from the previous solution.
class SpdSolver {
public:
    SpdSolver(const fem::SparseOperator& op, LinearSolverKind kind, double cg_tol, long cg_maxit);
    ~SpdSolver();
    SpdSolver(SpdSolver&&) noexcept;
    SpdSolver& operator=(SpdSolver&&) noexcept;

    [[nodiscard]] std::vector<double> solve(const std::vector<double>& rhs);
    [[nodiscard]] long total_cg_iterations() const noexcept { return cg_iterations_; }

private:
    struct Factor;
    const fem::SparseOperator* op_;
    LinearSolverKind kind_;
    double cg_tol_;
    long cg_maxit_;
    long cg_iterations_ = 0;
    std::vector<double> last_;
    std::unique_ptr<Factor> factor_;
};

} // namespace hvi::linalg
