#include "hvi/diagnostics.hpp"

#include "hvi/errors.hpp"
#include "hvi/fem.hpp"
#include "hvi/linear_solver.hpp"
#include "hvi/nonsmooth.hpp"

#include <cmath>
#include <cstdio>

namespace hvi::solver {

namespace {

void normalize(std::vector<double>& x, const fem::SparseOperator& m) {
    const double n = std::sqrt(m.quadratic_form(x));
    if (!(n > 0.0)) throw DiagnosticsError("eigenvalue iteration collapsed to the null space");
    for (double& v : x) v /= n;
}

// Power iteration for the dominant eigenvalue of K^-1 B, reported through the
// Rayleigh quotient x^T K x / x^T B x.
double smallest_generalized(const fem::SparseOperator& k, const fem::SparseOperator& b, const EigenOptions& opt,
                            const char* what) {
    linalg::SpdSolver solver(k, linalg::LinearSolverKind::cg, opt.cg_tol, 0);
    std::vector<double> x(static_cast<std::size_t>(k.dimension()), 1.0);
    normalize(x, b);
    double previous = 0.0;
    for (int it = 1; it <= opt.maxit; ++it) {
        x = solver.solve(b.multiply(x));
        normalize(x, b);
        const double rq = k.quadratic_form(x);
        if (it > 1 && std::abs(rq - previous) <= opt.tol * std::abs(rq)) return rq;
        previous = rq;
    }
    throw DiagnosticsError(std::string(what) + ": power iteration did not settle in " + std::to_string(opt.maxit) +
                           " steps");
}

} // namespace

double estimate_lambda_L(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt) {
    const fem::AssembledSystem sys = fem::assemble(mesh, spec);
    const int dim = static_cast<int>(mesh.free_dofs().size());
    const fem::SparseOperator m =
        fem::assemble_vertex_operator(mesh, fem::VertexOperator::mass).restrict(mesh.dof_of_vertex(), dim);
    return smallest_generalized(sys.stiffness, m, opt, "lambda_L");
}

double estimate_mu_L(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt) {
    if (mesh.semipermeable_edges().empty()) throw DiagnosticsError("mu_L needs a semipermeable boundary part");
    const fem::AssembledSystem sys = fem::assemble(mesh, spec);
    const int dim = static_cast<int>(mesh.free_dofs().size());
    const fem::SparseOperator mg =
        fem::assemble_vertex_operator(mesh, fem::VertexOperator::boundary_mass).restrict(mesh.dof_of_vertex(), dim);
    return smallest_generalized(sys.stiffness, mg, opt, "mu_L");
}

Diagnostics compute_diagnostics(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt) {
    Diagnostics d;
    d.theta = coeff::estimate_theta(spec);
    d.lambda_L = estimate_lambda_L(mesh, spec, opt);
    d.mu_L = estimate_mu_L(mesh, spec, opt);
    d.alpha1 = nonsmooth::estimate_hj_constants(spec.interior_potential).alpha_hat;
    d.alpha2 = nonsmooth::estimate_hj_constants(spec.boundary_potential).alpha_hat;
    d.smallness_margin = d.theta - d.alpha1 / d.lambda_L - d.alpha2 / d.mu_L;
    return d;
}

SmallnessReport smallness_check(const Diagnostics& d) {
    SmallnessReport rep;
    const double t1 = d.lambda_L > 0.0 ? d.alpha1 / d.lambda_L : (d.alpha1 > 0.0 ? INFINITY : 0.0);
    const double t2 = d.mu_L > 0.0 ? d.alpha2 / d.mu_L : (d.alpha2 > 0.0 ? INFINITY : 0.0);
    rep.margin = d.theta - t1 - t2;
    rep.satisfied = rep.margin > 0.0;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "theta    = %.6g\nlambda_L = %.6g\nmu_L     = %.6g\nalpha1   = %.6g\nalpha2   = %.6g\n"
                  "margin   = %.6g (%s)\n",
                  d.theta, d.lambda_L, d.mu_L, d.alpha1, d.alpha2, rep.margin,
                  rep.satisfied ? "smallness condition satisfied" : "smallness condition violated");
    rep.text = buf;
    return rep;
}

} // namespace hvi::solver
