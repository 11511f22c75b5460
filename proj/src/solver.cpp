#include "hvi/solver.hpp"

#include "hvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hvi::solver {

void SolverParams::validate() const {
    if (!(outer_tol > 0.0)) throw InvalidArgument("outer_tol must be positive");
    if (outer_maxit <= 0) throw InvalidArgument("outer_maxit must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (!(cg_tol > 0.0)) throw InvalidArgument("cg_tol must be positive");
    if (cg_maxit < 0) throw InvalidArgument("cg_maxit must be nonnegative");
    if (!(multiplier_step > 0.0)) throw InvalidArgument("multiplier step must be positive");
    if (!(inner_factor > 0.0)) throw InvalidArgument("inner_factor must be positive");
    if (inner_maxit <= 0) throw InvalidArgument("inner_maxit must be positive");
}

std::vector<double> cg_solve(const fem::SparseOperator& op, const std::vector<double>& rhs,
                             const SolverParams& params) {
    return linalg::cg_solve(op, rhs, params.cg_tol, params.cg_maxit);
}

nonsmooth::PotentialParams interior_potential(const coeff::ProblemSpec& spec, const SolverParams& params) {
    auto p = spec.interior_potential;
    if (params.selection_at_zero) p.selection_at_zero = *params.selection_at_zero;
    return p;
}

nonsmooth::PotentialParams boundary_potential(const coeff::ProblemSpec& spec, const SolverParams& params) {
    auto p = spec.boundary_potential;
    if (params.selection_at_zero) p.selection_at_zero = *params.selection_at_zero;
    return p;
}

double zero_band_for(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return 1e-8 * m;
}

namespace {

double initial_eta(nonsmooth::SelectionAtZero rule) {
    switch (rule) {
    case nonsmooth::SelectionAtZero::left: return 0.0;
    case nonsmooth::SelectionAtZero::right: return 1.0;
    case nonsmooth::SelectionAtZero::mid: return 0.5;
    }
    return 0.0;
}

double weighted_norm(const std::vector<double>& w, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t q = 0; q < v.size(); ++q) s += w[q] * v[q] * v[q];
    return std::sqrt(s);
}

// Residual of the complementarity conditions eta in H(v): eta = 0 needs v <= 0,
// eta = 1 needs v >= 0, and 0 < eta < 1 needs v = 0.
double kkt_residual(const std::vector<double>& w, const std::vector<double>& eta, const std::vector<double>& vq) {
    double s = 0.0;
    for (std::size_t q = 0; q < vq.size(); ++q) {
        double e = vq[q];
        if (eta[q] <= 0.0) {
            e = std::max(vq[q], 0.0);
        } else if (eta[q] >= 1.0) {
            e = std::max(-vq[q], 0.0);
        }
        s += w[q] * e * e;
    }
    return std::sqrt(s);
}

class MultiplierProblem {
public:
    MultiplierProblem(const mesh::Mesh& mesh, const fem::AssembledSystem& sys, const fem::MultiplierPoints& points,
                      linalg::SpdSolver& solver)
        : mesh_(mesh), sys_(sys), points_(points), solver_(solver) {}

    // Solves K v = F - G(g * eta) and returns v on all vertices.
    std::vector<double> solve(const std::vector<double>& eta, const std::vector<double>& g) {
        std::vector<double> c(eta.size());
        for (std::size_t q = 0; q < c.size(); ++q) c[q] = g[q] * eta[q];
        const std::vector<double> gv = points_.scatter(c, mesh_.vertex_count());
        std::vector<double> rhs = sys_.load;
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= gv[sys_.free_to_vertex[k]];
        last_rhs_ = rhs;
        last_free_ = solver_.solve(rhs);
        return fem::expand_to_vertices(mesh_, last_free_);
    }

    [[nodiscard]] double last_residual() const {
        std::vector<double> r = sys_.stiffness.multiply(last_free_);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            num += (r[k] - last_rhs_[k]) * (r[k] - last_rhs_[k]);
            den += last_rhs_[k] * last_rhs_[k];
        }
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    }

private:
    const mesh::Mesh& mesh_;
    const fem::AssembledSystem& sys_;
    const fem::MultiplierPoints& points_;
    linalg::SpdSolver& solver_;
    std::vector<double> last_rhs_;
    std::vector<double> last_free_;
};

double relative_change(const fem::SparseOperator& laplace, const std::vector<double>& next,
                       const std::vector<double>& prev) {
    std::vector<double> d(next.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = next[k] - prev[k];
    const double dn = std::sqrt(std::max(laplace.quadratic_form(d), 0.0));
    const double nn = std::sqrt(std::max(laplace.quadratic_form(next), 0.0));
    if (dn == 0.0) return 0.0;
    return nn > 0.0 ? dn / nn : dn;
}

} // namespace

HviSolution solve_hvi(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const SolverParams& params) {
    params.validate();
    const auto p_int = interior_potential(spec, params);
    const auto p_bnd = boundary_potential(spec, params);
    p_int.validate();
    p_bnd.validate();

    const fem::AssembledSystem sys = fem::assemble(mesh, spec);
    const fem::SparseOperator laplace = fem::assemble_vertex_operator(mesh, fem::VertexOperator::laplace);
    const fem::MultiplierPoints points = fem::build_multiplier_points(mesh);
    linalg::SpdSolver linear(sys.stiffness, params.linear_solver, params.cg_tol, params.cg_maxit);
    MultiplierProblem problem(mesh, sys, points, linear);

    const std::size_t nq = points.size();
    auto potential_of = [&](std::size_t q) -> const nonsmooth::PotentialParams& {
        return points.is_interior(q) ? p_int : p_bnd;
    };

    std::vector<double> eta(nq);
    for (std::size_t q = 0; q < nq; ++q) eta[q] = initial_eta(potential_of(q).selection_at_zero);

    HviSolution sol;
    sol.problem = spec.name;
    sol.interior_potential = p_int;
    sol.boundary_potential = p_bnd;
    std::vector<double> u(mesh.vertex_count(), 0.0);
    std::vector<double> g(nq);
    double omega = params.damping;
    double last_change = 1.0;
    int growth_streak = 0;
    const double step_max = 1e8;

    for (int k = 0; k < params.outer_maxit; ++k) {
        const std::vector<double> uq = points.gather(u);
        for (std::size_t q = 0; q < nq; ++q) g[q] = nonsmooth::smooth_factor(uq[q], potential_of(q));

        const double inner_tol = std::max(params.inner_factor * last_change, 0.1 * params.outer_tol);
        std::vector<double> v = problem.solve(eta, g);
        std::vector<double> vq = points.gather(v);
        double rho = params.multiplier_step;
        std::vector<double> prev_eta;
        std::vector<double> prev_vq;
        for (int it = 0; it < params.inner_maxit; ++it) {
            if (!prev_eta.empty()) {
                double sy = 0.0;
                double ss = 0.0;
                for (std::size_t q = 0; q < nq; ++q) {
                    const double s = eta[q] - prev_eta[q];
                    const double y = prev_vq[q] - vq[q];
                    sy += points.weight[q] * s * y;
                    ss += points.weight[q] * s * s;
                }
                if (sy > 0.0 && ss > 0.0) rho = std::clamp(ss / sy, params.multiplier_step, step_max);
            }
            prev_eta = eta;
            prev_vq = vq;
            for (std::size_t q = 0; q < nq; ++q) eta[q] = std::clamp(eta[q] + rho * vq[q], 0.0, 1.0);
            v = problem.solve(eta, g);
            vq = points.gather(v);
            ++sol.inner_iterations;
            const double scale = weighted_norm(points.weight, vq);
            const double kkt = kkt_residual(points.weight, eta, vq);
            if (kkt <= inner_tol * (scale > 0.0 ? scale : 1.0)) break;
        }

        std::vector<double> next(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) next[i] = (1.0 - omega) * u[i] + omega * v[i];
        last_change = relative_change(laplace, next, u);
        u = std::move(next);
        sol.history.push_back(last_change);
        sol.iterations = k + 1;
        if (last_change <= params.outer_tol) {
            sol.converged = true;
            break;
        }
        const std::size_t n = sol.history.size();
        if (n >= 2 && sol.history[n - 1] > sol.history[n - 2]) {
            if (++growth_streak >= 2 && omega > 1.0 / 16.0) {
                omega = std::max(0.5 * omega, 1.0 / 16.0);
                growth_streak = 0;
            }
        } else {
            growth_streak = 0;
        }
    }
    sol.final_damping = omega;
    if (!sol.converged) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "multiplier iteration did not converge in %d iterations (last change %.3e)",
                      params.outer_maxit, last_change);
        throw NonConvergenceError(buf, sol.history);
    }
    sol.linear_residual = problem.last_residual();
    sol.u = {mesh.level(), u};
    sol.zero_band = zero_band_for(u);

    // Final multipliers at the quadrature points: outside the zero band eta is
    // snapped to the side u selects, so they equal the selection exactly.
    const double tau = sol.zero_band;
    const std::vector<double> uq = points.gather(u);
    std::vector<double> mult(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        const auto& p = potential_of(q);
        double e = eta[q];
        if (uq[q] > tau) e = 1.0;
        if (uq[q] < -tau) e = 0.0;
        mult[q] = std::clamp(nonsmooth::smooth_factor(uq[q], p) * e, 0.0, p.jump());
    }
    const auto ni = static_cast<std::size_t>(points.interior_count);
    sol.interior_multipliers.assign(mult.begin(), mult.begin() + static_cast<std::ptrdiff_t>(ni));
    sol.boundary_multipliers.assign(mult.begin() + static_cast<std::ptrdiff_t>(ni), mult.end());

    // Nodal recovery: the selection away from the kink, otherwise the mean of
    // the quadrature multipliers around the vertex.
    const std::size_t nv = mesh.vertex_count();
    std::vector<double> sum_int(nv, 0.0), sum_bnd(nv, 0.0);
    std::vector<int> cnt_int(nv, 0), cnt_bnd(nv, 0);
    for (std::size_t q = 0; q < nq; ++q) {
        const bool interior = points.is_interior(q);
        const int support = interior ? 3 : 2;
        for (int i = 0; i < support; ++i) {
            const int vtx = points.vertices[q][i];
            (interior ? sum_int : sum_bnd)[vtx] += mult[q];
            ++(interior ? cnt_int : cnt_bnd)[vtx];
        }
    }
    auto nodal = [&](int vtx, const nonsmooth::PotentialParams& p, const std::vector<double>& sum,
                     const std::vector<int>& cnt) {
        const double t = u[vtx];
        if (t > tau || t < -tau) return nonsmooth::subdiff_selection(t, p);
        if (cnt[vtx] == 0) return nonsmooth::subdiff_selection(0.0, p);
        return std::clamp(sum[vtx] / cnt[vtx], 0.0, p.jump());
    };
    sol.mu_nodal.resize(nv);
    for (std::size_t vtx = 0; vtx < nv; ++vtx) sol.mu_nodal[vtx] = nodal(static_cast<int>(vtx), p_int, sum_int, cnt_int);
    sol.boundary_vertices = mesh.semipermeable_vertices();
    for (int vtx : sol.boundary_vertices) sol.lambda_nodal.push_back(nodal(vtx, p_bnd, sum_bnd, cnt_bnd));
    return sol;
}

VerificationReport verify_discrete_hvi(const HviSolution& sol, const mesh::Mesh& mesh, const coeff::ProblemSpec& spec,
                                       double tol) {
    if (sol.u.level != mesh.level() || sol.u.values.size() != mesh.vertex_count()) {
        throw InvalidArgument("solution does not live on this mesh");
    }
    const fem::AssembledSystem sys = fem::assemble(mesh, spec);
    const fem::MultiplierPoints points = fem::build_multiplier_points(mesh);
    const std::vector<double>& u = sol.u.values;
    const std::vector<double> u_free = fem::restrict_to_free(mesh, u);
    std::vector<double> r = sys.stiffness.multiply(u_free);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.load[i];

    const double tau = zero_band_for(u);
    const std::vector<double> uq = points.gather(u);
    const std::size_t dim = r.size();
    std::vector<double> plus(dim, 0.0), minus(dim, 0.0);
    for (std::size_t q = 0; q < points.size(); ++q) {
        const auto& p = points.is_interior(q) ? sol.interior_potential : sol.boundary_potential;
        const double t = std::abs(uq[q]) <= tau ? 0.0 : uq[q];
        for (int i = 0; i < 3; ++i) {
            const double phi = points.basis[q][i];
            if (phi == 0.0) continue;
            const int dof = sys.vertex_to_free[points.vertices[q][i]];
            if (dof < 0) continue;
            plus[dof] += points.weight[q] * nonsmooth::clarke_j0(t, phi, p);
            minus[dof] += points.weight[q] * nonsmooth::clarke_j0(t, -phi, p);
        }
    }

    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    VerificationReport rep;
    rep.tolerance = tol;
    const auto& rows = sys.stiffness.row_offsets();
    const auto& vals = sys.stiffness.values();
    for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (int k = rows[i]; k < rows[i + 1]; ++k) row += std::abs(vals[k]);
        const double scale = 1.0 + row * umax + std::abs(sys.load[i]);
        const double values[2] = {r[i] + plus[i], -r[i] + minus[i]};
        for (int s = 0; s < 2; ++s) {
            ++rep.checks;
            const double violation = std::max(0.0, -values[s] / scale);
            if (violation > rep.worst_violation) {
                rep.worst_violation = violation;
                rep.worst_dof = static_cast<int>(i);
                rep.worst_sign = s == 0 ? 1 : -1;
            }
        }
    }
    rep.passed = rep.worst_violation <= tol;
    return rep;
}

} // namespace hvi::solver
