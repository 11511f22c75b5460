#include "hvi/linear_solver.hpp"

#include "hvi/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cctype>
#include <cmath>

namespace hvi::linalg {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<double> cg_solve(const fem::SparseOperator& op, const std::vector<double>& rhs, double tol, long maxit,
                             const std::vector<double>* initial_guess, CgStats* stats) {
    const auto n = static_cast<std::size_t>(op.dimension());
    if (rhs.size() != n) throw InvalidArgument("cg_solve: right-hand side length does not match operator");
    if (!(tol > 0.0)) throw InvalidArgument("cg_solve: tolerance must be positive");
    if (maxit <= 0) maxit = 10 * static_cast<long>(n);

    CgStats local;
    CgStats& st = stats ? *stats : local;
    st = {};

    std::vector<double> x(n, 0.0);
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) return x;
    if (initial_guess) {
        if (initial_guess->size() != n) throw InvalidArgument("cg_solve: initial guess has the wrong length");
        x = *initial_guess;
    }

    std::vector<double> inv_diag = op.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw SolverError("cg_solve: operator has a nonpositive diagonal entry", 1.0);
        d = 1.0 / d;
    }

    std::vector<double> r = op.multiply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    double rnorm = std::sqrt(dot(r, r));
    st.relative_residual = rnorm / bnorm;
    if (st.relative_residual <= tol) return x;

    std::vector<double> z(n), p(n), ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    for (long it = 1; it <= maxit; ++it) {
        op.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw SolverError("cg_solve: operator is not positive definite", rnorm / bnorm);
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rnorm = std::sqrt(dot(r, r));
        st.iterations = it;
        st.relative_residual = rnorm / bnorm;
        if (st.relative_residual <= tol) return x;
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg_solve: no convergence in " + std::to_string(maxit) + " iterations", st.relative_residual);
}

std::string to_string(LinearSolverKind kind) { return kind == LinearSolverKind::cholesky ? "cholesky" : "cg"; }

LinearSolverKind parse_linear_solver(std::string_view text) {
    std::string low;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (low == "cholesky") return LinearSolverKind::cholesky;
    if (low == "cg") return LinearSolverKind::cg;
    throw InvalidArgument("unknown linear solver '" + std::string(text) + "' (expected cholesky or cg)");
}

struct SpdSolver::Factor {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
};

SpdSolver::SpdSolver(const fem::SparseOperator& op, LinearSolverKind kind, double cg_tol, long cg_maxit)
    : op_(&op), kind_(kind), cg_tol_(cg_tol), cg_maxit_(cg_maxit) {
    if (kind_ != LinearSolverKind::cholesky) return;
    const int n = op.dimension();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(op.nonzeros());
    const auto& rows = op.row_offsets();
    const auto& cols = op.column_indices();
    const auto& vals = op.values();
    for (int i = 0; i < n; ++i) {
        for (int k = rows[i]; k < rows[i + 1]; ++k) t.emplace_back(i, cols[k], vals[k]);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    factor_ = std::make_unique<Factor>();
    factor_->llt.compute(a);
    if (factor_->llt.info() != Eigen::Success) {
        throw SolverError("sparse Cholesky factorization failed: operator is not positive definite", 1.0);
    }
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

std::vector<double> SpdSolver::solve(const std::vector<double>& rhs) {
    if (rhs.size() != static_cast<std::size_t>(op_->dimension())) {
        throw InvalidArgument("linear solve: right-hand side length does not match operator");
    }
    if (kind_ == LinearSolverKind::cg) {
        CgStats st;
        last_ = cg_solve(*op_, rhs, cg_tol_, cg_maxit_, last_.empty() ? nullptr : &last_, &st);
        cg_iterations_ += st.iterations;
        return last_;
    }
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd x = factor_->llt.solve(b);
    return {x.data(), x.data() + x.size()};
}

} // namespace hvi::linalg
