#include "hvi/errors.hpp"
#include "hvi/solver.hpp"
#include "hvi/study.hpp"

#include <doctest.h>

#include <cmath>

using namespace hvi;
using namespace hvi::solver;

namespace {

coeff::ProblemSpec zero_data_spec() {
    coeff::ProblemSpec s = coeff::get_problem("example1");
    s.name = "zero";
    s.source = coeff::Expr::constant(0.0);
    s.interior_potential = {1.0, 0.0, nonsmooth::SelectionAtZero::left};
    s.boundary_potential = {1.0, 0.0, nonsmooth::SelectionAtZero::left};
    return s;
}

double seminorm_distance(const mesh::Mesh& m, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return study::discrete_norm({m.level(), d}, study::NormKind::V, m);
}

} // namespace

TEST_CASE("cg_solve examples") {
    SolverParams p;
    const auto id = fem::SparseOperator::identity(3);
    const std::vector<double> r{1.5, -2.0, 0.25};
    const auto x = cg_solve(id, r, p);
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(r[i]).epsilon(1e-14));

    const auto a = fem::SparseOperator::from_triplets(2, {{0, 0, 4}, {0, 1, 1}, {1, 0, 1}, {1, 1, 3}});
    const auto y = cg_solve(a, {1.0, 2.0}, p);
    CHECK(y[0] == doctest::Approx(1.0 / 11).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(7.0 / 11).epsilon(1e-12));

    linalg::CgStats stats;
    const auto z = linalg::cg_solve(a, {0.0, 0.0}, 1e-12, 0, nullptr, &stats);
    CHECK(z == std::vector<double>{0.0, 0.0});
    CHECK(stats.iterations == 0);

    // One iteration cannot solve a 2x2 system with distinct preconditioned eigenvalues.
    CHECK_THROWS_AS(linalg::cg_solve(a, {1.0, 2.0}, 1e-14, 1), SolverError);
    try {
        (void)linalg::cg_solve(a, {1.0, 2.0}, 1e-14, 1);
    } catch (const SolverError& e) {
        CHECK(e.residual() > 1e-14);
    }
}

TEST_CASE("solver parameter validation") {
    SolverParams p;
    p.damping = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.damping = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.outer_tol = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.outer_maxit = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CHECK_NOTHROW(SolverParams{}.validate());
}

TEST_CASE("zero data gives the zero solution") {
    const mesh::Mesh m = mesh::build_uniform_mesh(4);
    const auto spec = zero_data_spec();
    const HviSolution sol = solve_hvi(m, spec);
    CHECK(sol.converged);
    for (double v : sol.u.values) CHECK(v == 0.0);
    for (double v : sol.lambda_nodal) CHECK(v == 0.0);
    for (double v : sol.mu_nodal) CHECK(v == 0.0);
    const VerificationReport r = verify_discrete_hvi(sol, m, spec);
    CHECK(r.passed);
    CHECK(r.worst_violation == 0.0);
    CHECK(r.checks == 2 * static_cast<long>(m.free_dofs().size()));
}

TEST_CASE("example1 level 5 surface") {
    const mesh::Mesh m = mesh::build_uniform_mesh(5);
    const HviSolution sol = solve_hvi(m, coeff::get_problem("example1"));
    CHECK(sol.converged);
    // Sign follows -f0: negative where sin(2 pi x) > 0, positive on the right half.
    for (double y : {0.25, 0.5, 0.75}) {
        CHECK(mesh::evaluate_at(sol.u, {0.25, y}) < 0.0);
        CHECK(mesh::evaluate_at(sol.u, {0.75, y}) > 0.0);
    }
    // The e^{2y} factor makes the magnitude grow with y away from the top side.
    for (double x : {0.25, 0.75}) {
        CHECK(std::abs(mesh::evaluate_at(sol.u, {x, 0.25})) < std::abs(mesh::evaluate_at(sol.u, {x, 0.5})));
        CHECK(std::abs(mesh::evaluate_at(sol.u, {x, 0.5})) < std::abs(mesh::evaluate_at(sol.u, {x, 0.75})));
    }
    // Dirichlet values.
    for (int v = 0; v < static_cast<int>(m.vertex_count()); ++v) {
        if (m.is_dirichlet(v)) CHECK(sol.u.values[v] == 0.0);
    }
}

TEST_CASE("damping does not change the limit") {
    const mesh::Mesh m = mesh::build_uniform_mesh(3);
    const auto spec = coeff::get_problem("example1");
    SolverParams p;
    const HviSolution full = solve_hvi(m, spec, p);
    p.damping = 0.5;
    const HviSolution half = solve_hvi(m, spec, p);
    CHECK(full.converged);
    CHECK(half.converged);
    const double scale = study::discrete_norm(full.u, study::NormKind::V, m);
    CHECK(seminorm_distance(m, full.u.values, half.u.values) <= 10 * p.outer_tol * scale);
}

TEST_CASE("discrete inequality verification") {
    const mesh::Mesh m = mesh::build_uniform_mesh(4);
    const auto spec = coeff::get_problem("example1");
    const HviSolution sol = solve_hvi(m, spec);
    const VerificationReport r = verify_discrete_hvi(sol, m, spec);
    CHECK(r.passed);
    CHECK(r.checks == 2 * static_cast<long>(m.free_dofs().size()));
    CHECK(r.worst_violation <= 1e-8);

    HviSolution bad = sol;
    bad.u.values[m.free_dofs()[m.free_dofs().size() / 2]] += 0.1;
    const VerificationReport rb = verify_discrete_hvi(bad, m, spec);
    CHECK_FALSE(rb.passed);
    CHECK(rb.worst_violation > 1e-8);
}

TEST_CASE("history is eventually decreasing") {
    for (const char* name : {"example1", "example2"}) {
        for (int level = 3; level <= 6; ++level) {
            CAPTURE(name);
            CAPTURE(level);
            const HviSolution sol = solve_hvi(mesh::build_uniform_mesh(level), coeff::get_problem(name));
            REQUIRE(sol.history.size() >= 5);
            const std::size_t n = sol.history.size();
            for (std::size_t k = n - 5; k + 1 < n; ++k) CHECK(sol.history[k + 1] < sol.history[k]);
            CHECK(sol.history.back() <= SolverParams{}.outer_tol);
        }
    }
}

TEST_CASE("multiplier range and inclusion") {
    for (const char* name : {"example1", "example2"}) {
        const mesh::Mesh m = mesh::build_uniform_mesh(5);
        const auto spec = coeff::get_problem(name);
        const HviSolution sol = solve_hvi(m, spec);
        const auto& pi = sol.interior_potential;
        const auto& pb = sol.boundary_potential;
        for (double v : sol.mu_nodal) {
            CHECK(v >= 0.0);
            CHECK(v <= pi.jump());
        }
        for (double v : sol.lambda_nodal) {
            CHECK(v >= 0.0);
            CHECK(v <= pb.jump());
        }
        // Away from the kink each multiplier is the selection of the final u;
        // inside the zero band it may be any element of [0, a+b].
        const auto pts = fem::build_multiplier_points(m);
        const auto uq = pts.gather(sol.u.values);
        REQUIRE(sol.interior_multipliers.size() == static_cast<std::size_t>(pts.interior_count));
        REQUIRE(sol.boundary_multipliers.size() == pts.size() - pts.interior_count);
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const bool interior = pts.is_interior(q);
            const auto& p = interior ? pi : pb;
            const double c = interior ? sol.interior_multipliers[q] : sol.boundary_multipliers[q - pts.interior_count];
            if (std::abs(uq[q]) > sol.zero_band) {
                CHECK(std::abs(c - nonsmooth::subdiff_selection(uq[q], p)) <= 1e-12);
            } else {
                CHECK(c >= 0.0);
                CHECK(c <= p.jump());
            }
        }
    }
}

TEST_CASE("determinism and linear solver agreement") {
    const mesh::Mesh m = mesh::build_uniform_mesh(4);
    const auto spec = coeff::get_problem("example2");
    const HviSolution a = solve_hvi(m, spec);
    const HviSolution b = solve_hvi(m, spec);
    CHECK(a.u.values == b.u.values);
    CHECK(a.history == b.history);

    SolverParams p;
    p.linear_solver = linalg::LinearSolverKind::cg;
    const HviSolution c = solve_hvi(m, spec, p);
    CHECK(c.converged);
    const double scale = study::discrete_norm(a.u, study::NormKind::V, m);
    CHECK(seminorm_distance(m, a.u.values, c.u.values) <= 1e-8 * scale);
}

TEST_CASE("non-convergence carries the history") {
    SolverParams p;
    p.outer_maxit = 2;
    const mesh::Mesh m = mesh::build_uniform_mesh(3);
    try {
        (void)solve_hvi(m, coeff::get_problem("example1"), p);
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.history().size() == 2);
    }
}

TEST_CASE("selection override") {
    SolverParams p;
    p.selection_at_zero = nonsmooth::SelectionAtZero::right;
    const auto spec = coeff::get_problem("example1");
    CHECK(interior_potential(spec, p).selection_at_zero == nonsmooth::SelectionAtZero::right);
    CHECK(boundary_potential(spec, p).selection_at_zero == nonsmooth::SelectionAtZero::right);
    CHECK(interior_potential(spec, {}).selection_at_zero == spec.interior_potential.selection_at_zero);
    CHECK(zero_band_for({-3.0, 1.0}) == doctest::Approx(3e-8));
}
