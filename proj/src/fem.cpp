#include "hvi/fem.hpp"

#include "hvi/errors.hpp"

#include <cmath>
#include <cstdio>

namespace hvi::fem {

namespace {

mesh::Point map_point(const TrianglePoints& tri, const std::array<double, 3>& bary) {
    return {bary[0] * tri[0].x + bary[1] * tri[1].x + bary[2] * tri[2].x,
            bary[0] * tri[0].y + bary[1] * tri[1].y + bary[2] * tri[2].y};
}

QuadratureCoefficients sample_coefficients(const TrianglePoints& tri, const coeff::ProblemSpec& spec,
                                           const TriangleRule& rule) {
    if (rule.points.size() != 3) throw InvalidArgument("coefficient cache expects a three-point rule");
    QuadratureCoefficients c{};
    for (std::size_t q = 0; q < 3; ++q) {
        const mesh::Point x = map_point(tri, rule.points[q]);
        c.a11[q] = spec.tensor[0][0].eval(x.x, x.y);
        c.a12[q] = spec.tensor[0][1].eval(x.x, x.y);
        c.a21[q] = spec.tensor[1][0].eval(x.x, x.y);
        c.a22[q] = spec.tensor[1][1].eval(x.x, x.y);
        c.a0[q] = spec.reaction.eval(x.x, x.y);
        c.f0[q] = spec.source.eval(x.x, x.y);
    }
    return c;
}

Matrix3 element_matrix(const P1Gradients& g, const QuadratureCoefficients& c, const TriangleRule& rule) {
    Matrix3 k{};
    const double area = std::abs(g.area);
    for (std::size_t q = 0; q < 3; ++q) {
        const double w = rule.weights[q] * area;
        for (int i = 0; i < 3; ++i) {
            const double agx = c.a11[q] * g.grad[i][0] + c.a12[q] * g.grad[i][1];
            const double agy = c.a21[q] * g.grad[i][0] + c.a22[q] * g.grad[i][1];
            for (int j = 0; j < 3; ++j) {
                k[i][j] += w * (agx * g.grad[j][0] + agy * g.grad[j][1] +
                                c.a0[q] * rule.points[q][i] * rule.points[q][j]);
            }
        }
    }
    return k;
}

TrianglePoints triangle_points(const mesh::Mesh& mesh, int t) {
    const auto& tri = mesh.triangles()[t];
    const auto& v = mesh.vertices();
    return {v[tri[0]], v[tri[1]], v[tri[2]]};
}

void check_field(const mesh::Mesh& mesh, const mesh::DiscreteField& u) {
    if (u.level != mesh.level() || u.values.size() != mesh.vertex_count()) {
        throw InvalidArgument("field does not live on this mesh");
    }
}

} // namespace

P1Gradients p1_gradients(const TrianglePoints& t) {
    const double det = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y);
    if (std::abs(0.5 * det) < 1e-14) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "degenerate triangle (%g,%g) (%g,%g) (%g,%g)", t[0].x, t[0].y, t[1].x, t[1].y,
                      t[2].x, t[2].y);
        throw GeometryError(buf);
    }
    P1Gradients g{};
    g.area = 0.5 * det;
    g.grad[0] = {(t[1].y - t[2].y) / det, (t[2].x - t[1].x) / det};
    g.grad[1] = {(t[2].y - t[0].y) / det, (t[0].x - t[2].x) / det};
    g.grad[2] = {(t[0].y - t[1].y) / det, (t[1].x - t[0].x) / det};
    return g;
}

Matrix3 local_stiffness(const TrianglePoints& tri, const coeff::ProblemSpec& spec, const TriangleRule& rule) {
    const P1Gradients g = p1_gradients(tri);
    Matrix3 k{};
    const double area = std::abs(g.area);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const mesh::Point x = map_point(tri, rule.points[q]);
        const auto a = spec.tensor_at(x.x, x.y);
        const double a0 = spec.reaction.eval(x.x, x.y);
        const double w = rule.weights[q] * area;
        for (int i = 0; i < 3; ++i) {
            const double agx = a[0][0] * g.grad[i][0] + a[0][1] * g.grad[i][1];
            const double agy = a[1][0] * g.grad[i][0] + a[1][1] * g.grad[i][1];
            for (int j = 0; j < 3; ++j) {
                k[i][j] += w * (agx * g.grad[j][0] + agy * g.grad[j][1] + a0 * rule.points[q][i] * rule.points[q][j]);
            }
        }
    }
    return k;
}

namespace {

struct VertexAssembly {
    std::vector<Triplet> stiffness;
    std::vector<double> load;
    std::vector<QuadratureCoefficients> coefficients;
};

VertexAssembly assemble_vertices(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec) {
    (void)coeff::estimate_theta(spec, 33);
    const TriangleRule& rule = default_triangle_rule();
    VertexAssembly out;
    out.load.assign(mesh.vertex_count(), 0.0);
    out.stiffness.reserve(9 * mesh.triangle_count());
    out.coefficients.reserve(mesh.triangle_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const TrianglePoints pts = triangle_points(mesh, static_cast<int>(t));
        const P1Gradients g = p1_gradients(pts);
        const QuadratureCoefficients c = sample_coefficients(pts, spec, rule);
        const Matrix3 k = element_matrix(g, c, rule);
        const auto& tri = mesh.triangles()[t];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) out.stiffness.push_back({tri[i], tri[j], k[i][j]});
            double f = 0.0;
            for (std::size_t q = 0; q < 3; ++q) f += rule.weights[q] * c.f0[q] * rule.points[q][i];
            out.load[tri[i]] += std::abs(g.area) * f;
        }
        out.coefficients.push_back(c);
    }
    return out;
}

} // namespace

AssembledSystem assemble(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec) {
    VertexAssembly full = assemble_vertices(mesh, spec);
    AssembledSystem sys;
    sys.free_to_vertex = mesh.free_dofs();
    sys.vertex_to_free = mesh.dof_of_vertex();
    const int dim = static_cast<int>(sys.free_to_vertex.size());
    // Only free-free entries survive; zero Dirichlet data needs no load correction.
    std::vector<Triplet> kept;
    kept.reserve(full.stiffness.size());
    for (const auto& t : full.stiffness) {
        const int r = sys.vertex_to_free[t.row];
        const int c = sys.vertex_to_free[t.col];
        if (r >= 0 && c >= 0) kept.push_back({r, c, t.value});
    }
    sys.stiffness = SparseOperator::from_triplets(dim, kept);
    sys.load = restrict_to_free(mesh, full.load);
    sys.coefficients = std::move(full.coefficients);
    return sys;
}

FullSystem assemble_full(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec) {
    VertexAssembly full = assemble_vertices(mesh, spec);
    return {SparseOperator::from_triplets(static_cast<int>(mesh.vertex_count()), full.stiffness),
            std::move(full.load)};
}

SparseOperator assemble_vertex_operator(const mesh::Mesh& mesh, VertexOperator kind) {
    std::vector<Triplet> entries;
    if (kind == VertexOperator::boundary_mass) {
        const EdgeRule& rule = default_edge_rule();
        for (const auto& e : mesh.semipermeable_edges()) {
            const auto& a = mesh.vertices()[e.vertices[0]];
            const auto& b = mesh.vertices()[e.vertices[1]];
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const std::array<double, 2> phi{1.0 - rule.points[q], rule.points[q]};
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        entries.push_back({e.vertices[i], e.vertices[j], rule.weights[q] * len * phi[i] * phi[j]});
                    }
                }
            }
        }
    } else {
        const TriangleRule& rule = default_triangle_rule();
        entries.reserve(9 * mesh.triangle_count());
        for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
            const P1Gradients g = p1_gradients(triangle_points(mesh, static_cast<int>(t)));
            const double area = std::abs(g.area);
            const auto& tri = mesh.triangles()[t];
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    double v = 0.0;
                    if (kind == VertexOperator::laplace) {
                        v = area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
                    } else {
                        for (std::size_t q = 0; q < rule.points.size(); ++q) {
                            v += rule.weights[q] * area * rule.points[q][i] * rule.points[q][j];
                        }
                    }
                    entries.push_back({tri[i], tri[j], v});
                }
            }
        }
    }
    return SparseOperator::from_triplets(static_cast<int>(mesh.vertex_count()), entries);
}

std::vector<double> expand_to_vertices(const mesh::Mesh& mesh, const std::vector<double>& free_values) {
    const auto& free = mesh.free_dofs();
    if (free_values.size() != free.size()) throw InvalidArgument("free-dof vector has the wrong length");
    std::vector<double> out(mesh.vertex_count(), 0.0);
    for (std::size_t k = 0; k < free.size(); ++k) out[free[k]] = free_values[k];
    return out;
}

std::vector<double> restrict_to_free(const mesh::Mesh& mesh, const std::vector<double>& vertex_values) {
    if (vertex_values.size() != mesh.vertex_count()) throw InvalidArgument("vertex vector has the wrong length");
    const auto& free = mesh.free_dofs();
    std::vector<double> out(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) out[k] = vertex_values[free[k]];
    return out;
}

std::vector<double> MultiplierPoints::gather(const std::vector<double>& u) const {
    std::vector<double> out(size());
    for (std::size_t q = 0; q < size(); ++q) {
        const auto& v = vertices[q];
        const auto& phi = basis[q];
        out[q] = phi[0] * u[v[0]] + phi[1] * u[v[1]] + phi[2] * u[v[2]];
    }
    return out;
}

std::vector<double> MultiplierPoints::scatter(const std::vector<double>& c, std::size_t vertex_count) const {
    if (c.size() != size()) throw InvalidArgument("multiplier vector has the wrong length");
    std::vector<double> out(vertex_count, 0.0);
    for (std::size_t q = 0; q < size(); ++q) {
        const double wc = weight[q] * c[q];
        for (int i = 0; i < 3; ++i) out[vertices[q][i]] += wc * basis[q][i];
    }
    return out;
}

MultiplierPoints build_multiplier_points(const mesh::Mesh& mesh) {
    const TriangleRule& trule = default_triangle_rule();
    const EdgeRule& erule = default_edge_rule();
    const auto edges = mesh.semipermeable_edges();
    MultiplierPoints mp;
    const std::size_t total = mesh.triangle_count() * trule.points.size() + edges.size() * erule.points.size();
    mp.weight.reserve(total);
    mp.vertices.reserve(total);
    mp.basis.reserve(total);
    mp.location.reserve(total);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const TrianglePoints pts = triangle_points(mesh, static_cast<int>(t));
        const double area = std::abs(mesh.signed_area(static_cast<int>(t)));
        for (std::size_t q = 0; q < trule.points.size(); ++q) {
            mp.weight.push_back(trule.weights[q] * area);
            mp.vertices.push_back(mesh.triangles()[t]);
            mp.basis.push_back(trule.points[q]);
            mp.location.push_back(map_point(pts, trule.points[q]));
        }
    }
    mp.interior_count = static_cast<int>(mp.weight.size());
    for (const auto& e : edges) {
        const auto& a = mesh.vertices()[e.vertices[0]];
        const auto& b = mesh.vertices()[e.vertices[1]];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        for (std::size_t q = 0; q < erule.points.size(); ++q) {
            const double s = erule.points[q];
            mp.weight.push_back(erule.weights[q] * len);
            mp.vertices.push_back({e.vertices[0], e.vertices[1], e.vertices[0]});
            mp.basis.push_back({1.0 - s, s, 0.0});
            mp.location.push_back({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
        }
    }
    return mp;
}

namespace {

std::vector<double> functional(const mesh::Mesh& mesh, const mesh::DiscreteField& u,
                               const nonsmooth::PotentialParams& p, bool interior) {
    check_field(mesh, u);
    p.validate();
    const MultiplierPoints mp = build_multiplier_points(mesh);
    const std::vector<double> uq = mp.gather(u.values);
    std::vector<double> c(mp.size(), 0.0);
    for (std::size_t q = 0; q < mp.size(); ++q) {
        if (mp.is_interior(q) == interior) c[q] = nonsmooth::subdiff_selection(uq[q], p);
    }
    return mp.scatter(c, mesh.vertex_count());
}

} // namespace

std::vector<double> boundary_functional(const mesh::Mesh& mesh, const mesh::DiscreteField& u,
                                        const nonsmooth::PotentialParams& p) {
    return functional(mesh, u, p, false);
}

std::vector<double> interior_functional(const mesh::Mesh& mesh, const mesh::DiscreteField& u,
                                        const nonsmooth::PotentialParams& p) {
    return functional(mesh, u, p, true);
}

} // namespace hvi::fem
