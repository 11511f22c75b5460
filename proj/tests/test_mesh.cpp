#include "hvi/errors.hpp"
#include "hvi/mesh.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace hvi::mesh;

TEST_CASE("vertex and triangle counts") {
    const Mesh m1 = build_uniform_mesh(1);
    CHECK(m1.vertex_count() == 9);
    CHECK(m1.triangle_count() == 8);

    const Mesh m3 = build_uniform_mesh(3);
    CHECK(m3.h() == 0.125);
    CHECK(m3.vertex_count() == 81);
    CHECK(m3.triangle_count() == 128);
}

TEST_CASE("level out of range") {
    CHECK_THROWS_AS(build_uniform_mesh(0), hvi::InvalidArgument);
    CHECK_THROWS_AS(build_uniform_mesh(13), hvi::InvalidArgument);
}

TEST_CASE("boundary tags follow the corner rule") {
    for (int level = 1; level <= 6; ++level) {
        const Mesh m = build_uniform_mesh(level);
        const auto semi = m.semipermeable_edges();
        CHECK(static_cast<int>(semi.size()) == (1 << level));
        for (const auto& e : semi) {
            CHECK(m.vertices()[e.vertices[0]].y == 0.0);
            CHECK(m.vertices()[e.vertices[1]].y == 0.0);
        }
        CHECK(m.boundary_edges().size() == 4u * (1u << level));
        CHECK(m.is_dirichlet(m.vertex_index(0, 0)));
        CHECK(m.is_dirichlet(m.vertex_index(m.cells_per_side(), 0)));
    }
    CHECK(build_uniform_mesh(2).semipermeable_edges().size() == 4);

    const Mesh d = build_uniform_mesh(3, BoundaryLayout::all_dirichlet);
    CHECK(d.semipermeable_edges().empty());
    CHECK(d.free_dofs().size() == 49);
}

TEST_CASE("free dofs are the non-Dirichlet vertices") {
    const Mesh m = build_uniform_mesh(2);
    // Independent count by coordinates: 0 < x < 1 and y < 1.
    std::size_t expected = 0;
    for (const auto& v : m.vertices()) expected += (v.x > 0.0 && v.x < 1.0 && v.y < 1.0) ? 1 : 0;
    CHECK(expected == 12);
    CHECK(m.free_dofs().size() == expected);
    for (std::size_t k = 0; k < m.free_dofs().size(); ++k) {
        CHECK(m.dof_of_vertex()[m.free_dofs()[k]] == static_cast<int>(k));
    }
}

TEST_CASE("triangle areas") {
    for (int level = 1; level <= 6; ++level) {
        const Mesh m = build_uniform_mesh(level);
        double total = 0.0;
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const double a = m.signed_area(static_cast<int>(t));
            CHECK(a == doctest::Approx(0.5 * m.h() * m.h()).epsilon(1e-14));
            total += a;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("interpolate zeroes Dirichlet vertices") {
    const Mesh m = build_uniform_mesh(3);
    const auto f = interpolate(m, [](double, double) { return 1.0; });
    for (std::size_t v = 0; v < m.vertex_count(); ++v) {
        CHECK(f.values[v] == (m.is_dirichlet(static_cast<int>(v)) ? 0.0 : 1.0));
    }
}

TEST_CASE("prolong reproduces constants and linears") {
    const Mesh m2 = build_uniform_mesh(2);
    const auto one = prolong(sample(m2, [](double, double) { return 1.0; }), 5);
    CHECK(one.level == 5);
    for (double v : one.values) CHECK(v == 1.0);

    const auto lin = prolong(sample(m2, [](double x, double) { return x; }), 4);
    const Mesh m4 = build_uniform_mesh(4);
    for (std::size_t v = 0; v < m4.vertex_count(); ++v) CHECK(lin.values[v] == doctest::Approx(m4.vertices()[v].x));

    const auto same = prolong(lin, 4);
    CHECK(same.values == lin.values);
    CHECK_THROWS_AS(prolong(lin, 3), hvi::InvalidArgument);
}

TEST_CASE("prolong of a random field matches brute-force point location") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const Mesh coarse = build_uniform_mesh(3);
    const Mesh fine = build_uniform_mesh(5);
    DiscreteField f{3, std::vector<double>(coarse.vertex_count())};
    for (double& v : f.values) v = U(rng) * 2.0 - 1.0;
    const auto g = prolong(f, 5);
    for (int k = 0; k < 20; ++k) {
        const Point p{U(rng), U(rng)};
        const double ref = oracle::brute_force_eval(coarse, f.values, p);
        CHECK(std::abs(evaluate_at(f, p) - ref) <= 1e-13);
        CHECK(std::abs(evaluate_at(g, p) - ref) <= 1e-13);
        CHECK(std::abs(oracle::brute_force_eval(fine, g.values, p) - ref) <= 1e-13);
    }
    for (int k = 0; k < 100; ++k) {
        const Point p{U(rng), U(rng)};
        CHECK(std::abs(evaluate_at(g, p) - evaluate_at(f, p)) <= 1e-12);
    }
}

TEST_CASE("evaluate_at") {
    const Mesh m = build_uniform_mesh(3);
    const auto f = sample(m, [](double x, double y) { return x + y; });
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Point p{U(rng), U(rng)};
        CHECK(std::abs(evaluate_at(f, p) - (p.x + p.y)) <= 1e-14);
    }
    CHECK(evaluate_at(f, {1.0, 1.0}) == f.values[m.vertex_index(8, 8)]);

    const Mesh m1 = build_uniform_mesh(1);
    const auto xy = sample(m1, [](double x, double y) { return x * y; });
    CHECK(evaluate_at(xy, {0.25, 0.25}) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(oracle::brute_force_eval(m1, xy.values, {0.25, 0.25}) == doctest::Approx(0.125).epsilon(1e-15));
    // Off the diagonal the two triangles of a cell differ; compare with the oracle.
    CHECK(evaluate_at(xy, {0.3, 0.1}) == doctest::Approx(oracle::brute_force_eval(m1, xy.values, {0.3, 0.1})));
    CHECK(evaluate_at(xy, {0.1, 0.3}) == doctest::Approx(oracle::brute_force_eval(m1, xy.values, {0.1, 0.3})));

    CHECK_THROWS_AS(evaluate_at(f, {1.5, 0.5}), hvi::OutOfDomain);
    CHECK_THROWS_AS(evaluate_at(f, {0.5, -1e-9}), hvi::OutOfDomain);
    CHECK_THROWS_AS(evaluate_at(DiscreteField{3, {1.0}}, {0.5, 0.5}), hvi::InvalidArgument);
}

TEST_CASE("mesh dump") {
    const Mesh m = build_uniform_mesh(1);
    std::ostringstream os;
    write_mesh(os, m);
    const std::string s = os.str();
    CHECK(s.rfind("mesh level=1\n", 0) == 0);
    std::istringstream is(s);
    std::string line;
    int v = 0, t = 0, e = 0, semi = 0;
    while (std::getline(is, line)) {
        v += line.rfind("v ", 0) == 0;
        t += line.rfind("t ", 0) == 0;
        e += line.rfind("e ", 0) == 0;
        semi += line.find("SEMIPERMEABLE") != std::string::npos;
    }
    CHECK(v == 9);
    CHECK(t == 8);
    CHECK(e == 8);
    CHECK(semi == 2);
    CHECK(std::string(Mesh::diagonal) == "lower-left to upper-right");
}
