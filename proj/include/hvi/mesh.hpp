#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hvi::mesh {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class BoundaryTag : std::uint8_t { dirichlet, semipermeable };

/// Which sides of the square carry the semipermeability condition.
/// `bottom_semipermeable` is the production layout (Gamma_S = (0,1) x {0});
/// `all_dirichlet` exists for eigenvalue and manufactured-solution checks.
enum class BoundaryLayout : std::uint8_t { bottom_semipermeable, all_dirichlet };

struct BoundaryEdge {
    std::array<int, 2> vertices;
    BoundaryTag tag;
};

/// Uniform triangulation of the unit square with 2^level cells per side.
///
/// Vertices are numbered row-major (by y, then x): vertex (i, j) sits at
/// (i h, j h) and has index j (2^level + 1) + i. Every cell is split along
/// its lower-left to upper-right diagonal; cell (i, j) owns triangles
/// 2 (j N + i) (lower-right) and 2 (j N + i) + 1 (upper-left), both
/// counterclockwise. Immutable after construction.
class Mesh {
public:
    static constexpr int max_level = 12;
    static constexpr const char* diagonal = "lower-left to upper-right";

    [[nodiscard]] int level() const noexcept { return level_; }
    [[nodiscard]] int cells_per_side() const noexcept { return n_; }
    [[nodiscard]] int vertices_per_side() const noexcept { return n_ + 1; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] BoundaryLayout layout() const noexcept { return layout_; }

    [[nodiscard]] int vertex_index(int i, int j) const noexcept { return j * (n_ + 1) + i; }

    [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_edges_; }

    [[nodiscard]] std::size_t vertex_count() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t triangle_count() const noexcept { return triangles_.size(); }

    /// Vertex -> free dof index, or -1 for Dirichlet vertices.
    [[nodiscard]] const std::vector<int>& dof_of_vertex() const noexcept { return dof_of_vertex_; }
    /// Free dof -> vertex index.
    [[nodiscard]] const std::vector<int>& free_dofs() const noexcept { return free_dofs_; }
    [[nodiscard]] bool is_dirichlet(int vertex) const { return dof_of_vertex_[vertex] < 0; }

    /// Edges tagged SEMIPERMEABLE, in order of increasing x.
    [[nodiscard]] std::vector<BoundaryEdge> semipermeable_edges() const;
    /// Vertices lying on a SEMIPERMEABLE edge, in order of increasing x.
    [[nodiscard]] std::vector<int> semipermeable_vertices() const;

    [[nodiscard]] double signed_area(int triangle) const;

    friend Mesh build_uniform_mesh(int level, BoundaryLayout layout);

private:
    Mesh() = default;

    int level_ = 0;
    int n_ = 0;
    double h_ = 0.0;
    BoundaryLayout layout_ = BoundaryLayout::bottom_semipermeable;
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<int> dof_of_vertex_;
    std::vector<int> free_dofs_;
};

/// Builds the level-n mesh (h = 2^-n). Throws InvalidArgument unless 1 <= level <= 12.
Mesh build_uniform_mesh(int level, BoundaryLayout layout = BoundaryLayout::bottom_semipermeable);

/// Nodal values of a P1 function, one per vertex of the mesh at `level`.
struct DiscreteField {
    int level = 0;
    std::vector<double> values;
};

/// Nodal interpolant of `fn` on `mesh`; Dirichlet vertices are set to 0.
template <class Fn>
DiscreteField interpolate(const Mesh& mesh, Fn&& fn) {
    DiscreteField field{mesh.level(), std::vector<double>(mesh.vertex_count(), 0.0)};
    const auto& verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (!mesh.is_dirichlet(static_cast<int>(v))) field.values[v] = fn(verts[v].x, verts[v].y);
    }
    return field;
}

/// Nodal samples of `fn` at every vertex, Dirichlet or not.
template <class Fn>
DiscreteField sample(const Mesh& mesh, Fn&& fn) {
    DiscreteField field{mesh.level(), std::vector<double>(mesh.vertex_count(), 0.0)};
    const auto& verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) field.values[v] = fn(verts[v].x, verts[v].y);
    return field;
}

/// Exact representation of the same piecewise-linear function on a finer nested mesh.
DiscreteField prolong(const DiscreteField& field, int target_level);

/// Value of the P1 function at `p`, located by index arithmetic on the grid.
/// Throws OutOfDomain if p lies outside the closed unit square.
double evaluate_at(const DiscreteField& field, Point p);

/// Debug dump: `mesh level=<n>`, then `v x y`, `t i j k`, `e i j TAG` lines.
void write_mesh(std::ostream& os, const Mesh& mesh);

[[nodiscard]] std::string to_string(BoundaryTag tag);

} // namespace hvi::mesh
