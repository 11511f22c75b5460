#pragma once

#include "hvi/coefficients.hpp"
#include "hvi/fem.hpp"
#include "hvi/linear_solver.hpp"
#include "hvi/mesh.hpp"
#include "hvi/nonsmooth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hvi::solver {

struct SolverParams {
    /// Relative H1-seminorm change that ends the outer iteration.
    double outer_tol = 1e-10;
    int outer_maxit = 200;
    /// Initial relaxation weight; halved (down to 1/16) when the change grows twice in a row.
    double damping = 1.0;
    double cg_tol = 1e-12;
    /// 0 means 10 * dimension.
    long cg_maxit = 0;
    /// Overrides the selection rule of both potentials when set.
    std::optional<nonsmooth::SelectionAtZero> selection_at_zero;
    linalg::LinearSolverKind linear_solver = linalg::LinearSolverKind::cholesky;
    /// Lower bound of the projected multiplier step length.
    double multiplier_step = 16.0;
    /// Inner tolerance relative to the previous outer change.
    double inner_factor = 1e-5;
    int inner_maxit = 10000;

    /// Throws InvalidArgument on nonpositive values or damping outside (0, 1].
    void validate() const;
};

/// Jacobi-preconditioned CG with tolerance and iteration cap from `params`.
std::vector<double> cg_solve(const fem::SparseOperator& op, const std::vector<double>& rhs,
                             const SolverParams& params);

struct HviSolution {
    std::string problem;
    mesh::DiscreteField u;
    /// Vertices on the semipermeable side (corners included), increasing x.
    std::vector<int> boundary_vertices;
    /// Boundary multiplier at `boundary_vertices`.
    std::vector<double> lambda_nodal;
    /// Interior multiplier at every vertex.
    std::vector<double> mu_nodal;
    /// Multipliers at the quadrature points of build_multiplier_points.
    std::vector<double> interior_multipliers;
    std::vector<double> boundary_multipliers;
    nonsmooth::PotentialParams interior_potential;
    nonsmooth::PotentialParams boundary_potential;
    int iterations = 0;
    long inner_iterations = 0;
    std::vector<double> history;
    bool converged = false;
    /// |u| at or below this value counts as the kink t = 0.
    double zero_band = 0.0;
    double final_damping = 1.0;
    double linear_residual = 0.0;
};

/// Potentials of `spec` with the selection override of `params` applied.
nonsmooth::PotentialParams interior_potential(const coeff::ProblemSpec& spec, const SolverParams& params);
nonsmooth::PotentialParams boundary_potential(const coeff::ProblemSpec& spec, const SolverParams& params);

/// Zero band used for a field: 1e-8 * max |u|.
double zero_band_for(const std::vector<double>& u);

/// Solves the discrete inequality. The outer loop is a fixed point on the
/// smooth factor g(u) = a exp(-a u+) + b of each subdifferential; the jump at
/// u = 0 is carried by a projected multiplier eta in [0,1] (so the multiplier
/// is g(u) eta) that an inner projected Uzawa loop with Barzilai-Borwein steps
/// drives to complementarity. Throws NonConvergenceError after outer_maxit.
HviSolution solve_hvi(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const SolverParams& params = {});

struct VerificationReport {
    double worst_violation = 0.0;
    int worst_dof = -1;
    int worst_sign = 0;
    long checks = 0;
    double tolerance = 1e-8;
    bool passed = true;
};

/// Tests the discrete inequality with v = +-phi_i for every free dof. Each
/// violation is scaled by 1 + sum_j |K_ij| max|u| + |F_i|.
VerificationReport verify_discrete_hvi(const HviSolution& sol, const mesh::Mesh& mesh,
                                       const coeff::ProblemSpec& spec, double tol = 1e-8);

} // namespace hvi::solver
