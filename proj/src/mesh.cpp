#include "hvi/mesh.hpp"

#include "hvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hvi::mesh {

Mesh build_uniform_mesh(int level, BoundaryLayout layout) {
    if (level < 1 || level > Mesh::max_level) {
        throw InvalidArgument("mesh level must lie in [1, " + std::to_string(Mesh::max_level) +
                              "], got " + std::to_string(level));
    }
    Mesh mesh;
    mesh.level_ = level;
    mesh.n_ = 1 << level;
    mesh.h_ = std::ldexp(1.0, -level);
    mesh.layout_ = layout;

    const int n = mesh.n_;
    const int m = n + 1;
    mesh.vertices_.reserve(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) mesh.vertices_.push_back({i * mesh.h_, j * mesh.h_});
    }

    mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int ll = mesh.vertex_index(i, j);
            const int lr = mesh.vertex_index(i + 1, j);
            const int ur = mesh.vertex_index(i + 1, j + 1);
            const int ul = mesh.vertex_index(i, j + 1);
            mesh.triangles_.push_back({ll, lr, ur});
            mesh.triangles_.push_back({ll, ur, ul});
        }
    }

    const BoundaryTag bottom =
        layout == BoundaryLayout::bottom_semipermeable ? BoundaryTag::semipermeable : BoundaryTag::dirichlet;
    for (int i = 0; i < n; ++i) {
        mesh.boundary_edges_.push_back({{mesh.vertex_index(i, 0), mesh.vertex_index(i + 1, 0)}, bottom});
    }
    for (int j = 0; j < n; ++j) {
        mesh.boundary_edges_.push_back(
            {{mesh.vertex_index(n, j), mesh.vertex_index(n, j + 1)}, BoundaryTag::dirichlet});
    }
    for (int i = n; i > 0; --i) {
        mesh.boundary_edges_.push_back(
            {{mesh.vertex_index(i, n), mesh.vertex_index(i - 1, n)}, BoundaryTag::dirichlet});
    }
    for (int j = n; j > 0; --j) {
        mesh.boundary_edges_.push_back(
            {{mesh.vertex_index(0, j), mesh.vertex_index(0, j - 1)}, BoundaryTag::dirichlet});
    }

    // Gamma_D is closed: the corners (0,0) and (1,0) are Dirichlet even though
    // their bottom edges are semipermeable.
    mesh.dof_of_vertex_.assign(mesh.vertices_.size(), -1);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const bool on_dirichlet = i == 0 || i == n || j == n ||
                                      (j == 0 && layout == BoundaryLayout::all_dirichlet);
            if (!on_dirichlet) {
                const int v = mesh.vertex_index(i, j);
                mesh.dof_of_vertex_[v] = static_cast<int>(mesh.free_dofs_.size());
                mesh.free_dofs_.push_back(v);
            }
        }
    }
    return mesh;
}

std::vector<BoundaryEdge> Mesh::semipermeable_edges() const {
    std::vector<BoundaryEdge> out;
    for (const auto& e : boundary_edges_) {
        if (e.tag == BoundaryTag::semipermeable) out.push_back(e);
    }
    return out;
}

std::vector<int> Mesh::semipermeable_vertices() const {
    std::vector<int> out;
    for (const auto& e : boundary_edges_) {
        if (e.tag != BoundaryTag::semipermeable) continue;
        if (out.empty() || out.back() != e.vertices[0]) out.push_back(e.vertices[0]);
        out.push_back(e.vertices[1]);
    }
    return out;
}

double Mesh::signed_area(int triangle) const {
    const auto& t = triangles_[triangle];
    const Point& a = vertices_[t[0]];
    const Point& b = vertices_[t[1]];
    const Point& c = vertices_[t[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

namespace {

void check_field(const DiscreteField& field) {
    if (field.level < 1 || field.level > Mesh::max_level) {
        throw InvalidArgument("field level out of range: " + std::to_string(field.level));
    }
    const std::size_t m = (std::size_t{1} << field.level) + 1;
    if (field.values.size() != m * m) {
        throw InvalidArgument("field has " + std::to_string(field.values.size()) +
                              " values, level " + std::to_string(field.level) + " needs " +
                              std::to_string(m * m));
    }
}

// One nested refinement step. New vertices are edge midpoints of the coarse
// triangles, so the fine values are averages of two coarse values.
std::vector<double> refine_once(const std::vector<double>& coarse, int coarse_level) {
    const int mc = (1 << coarse_level) + 1;
    const int mf = 2 * mc - 1;
    std::vector<double> fine(static_cast<std::size_t>(mf) * mf);
    auto c = [&](int i, int j) { return coarse[static_cast<std::size_t>(j) * mc + i]; };
    for (int j = 0; j < mf; ++j) {
        const int jc = j / 2;
        for (int i = 0; i < mf; ++i) {
            const int ic = i / 2;
            double v;
            if (i % 2 == 0 && j % 2 == 0) {
                v = c(ic, jc);
            } else if (j % 2 == 0) {
                v = 0.5 * (c(ic, jc) + c(ic + 1, jc));
            } else if (i % 2 == 0) {
                v = 0.5 * (c(ic, jc) + c(ic, jc + 1));
            } else {
                v = 0.5 * (c(ic, jc) + c(ic + 1, jc + 1));
            }
            fine[static_cast<std::size_t>(j) * mf + i] = v;
        }
    }
    return fine;
}

} // namespace

DiscreteField prolong(const DiscreteField& field, int target_level) {
    check_field(field);
    if (target_level < field.level || target_level > Mesh::max_level) {
        throw InvalidArgument("cannot prolong a level-" + std::to_string(field.level) +
                              " field to level " + std::to_string(target_level));
    }
    DiscreteField out = field;
    while (out.level < target_level) {
        out.values = refine_once(out.values, out.level);
        ++out.level;
    }
    return out;
}

double evaluate_at(const DiscreteField& field, Point p) {
    check_field(field);
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "point (%.17g, %.17g) lies outside the unit square", p.x, p.y);
        throw OutOfDomain(buf);
    }
    const int n = 1 << field.level;
    const int m = n + 1;
    const double sx = p.x * n;
    const double sy = p.y * n;
    const int i = std::min(static_cast<int>(sx), n - 1);
    const int j = std::min(static_cast<int>(sy), n - 1);
    const double xi = sx - i;
    const double eta = sy - j;
    const auto& u = field.values;
    const double u00 = u[static_cast<std::size_t>(j) * m + i];
    const double u10 = u[static_cast<std::size_t>(j) * m + i + 1];
    const double u11 = u[static_cast<std::size_t>(j + 1) * m + i + 1];
    const double u01 = u[static_cast<std::size_t>(j + 1) * m + i];
    if (xi >= eta) return u00 + xi * (u10 - u00) + eta * (u11 - u10);
    return u00 + eta * (u01 - u00) + xi * (u11 - u01);
}

std::string to_string(BoundaryTag tag) {
    return tag == BoundaryTag::dirichlet ? "DIRICHLET" : "SEMIPERMEABLE";
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
    char buf[128];
    os << "mesh level=" << mesh.level() << '\n';
    for (const auto& v : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", v.x, v.y);
        os << buf;
    }
    for (const auto& t : mesh.triangles()) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& e : mesh.boundary_edges()) {
        os << "e " << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.tag) << '\n';
    }
}

} // namespace hvi::mesh
