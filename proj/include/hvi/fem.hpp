#pragma once

#include "hvi/coefficients.hpp"
#include "hvi/mesh.hpp"
#include "hvi/nonsmooth.hpp"
#include "hvi/quadrature.hpp"
#include "hvi/sparse.hpp"

#include <array>
#include <vector>

namespace hvi::fem {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using TrianglePoints = std::array<mesh::Point, 3>;

/// Constant gradients of the three P1 basis functions and the signed area.
struct P1Gradients {
    std::array<std::array<double, 2>, 3> grad;
    double area;
};

/// Throws GeometryError when |area| < 1e-14.
P1Gradients p1_gradients(const TrianglePoints& tri);

/// Element matrix of a(u,v) = int A grad u . grad v + a0 u v.
Matrix3 local_stiffness(const TrianglePoints& tri, const coeff::ProblemSpec& spec,
                        const TriangleRule& rule = default_triangle_rule());

/// Coefficient values at the physical quadrature points of one triangle.
struct QuadratureCoefficients {
    std::array<double, 3> a11, a12, a21, a22, a0, f0;
};

/// Global system on the free dofs. Dirichlet rows and columns are eliminated.
struct AssembledSystem {
    SparseOperator stiffness;
    std::vector<double> load;
    std::vector<int> free_to_vertex;
    std::vector<int> vertex_to_free;
    std::vector<QuadratureCoefficients> coefficients;
};

/// Uses the default triangle rule; the mesh's triangles must all use it.
AssembledSystem assemble(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec);

/// Stiffness and load over all vertices, without boundary elimination.
struct FullSystem {
    SparseOperator stiffness;
    std::vector<double> load;
};
FullSystem assemble_full(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec);

/// Coefficient-free operators over all vertices.
enum class VertexOperator { laplace, mass, boundary_mass };
SparseOperator assemble_vertex_operator(const mesh::Mesh& mesh, VertexOperator kind);

/// Gathers free-dof vectors into vertex vectors (Dirichlet entries 0) and back.
std::vector<double> expand_to_vertices(const mesh::Mesh& mesh, const std::vector<double>& free_values);
std::vector<double> restrict_to_free(const mesh::Mesh& mesh, const std::vector<double>& vertex_values);

/// Quadrature points carrying the nonsmooth terms: three per triangle
/// (interior) followed by two per SEMIPERMEABLE edge (boundary).
struct MultiplierPoints {
    int interior_count = 0;
    std::vector<double> weight;                 ///< w_q |T| or w_q |e|
    std::vector<std::array<int, 3>> vertices;   ///< support vertices
    std::vector<std::array<double, 3>> basis;   ///< phi values of those vertices
    std::vector<mesh::Point> location;

    [[nodiscard]] std::size_t size() const noexcept { return weight.size(); }
    [[nodiscard]] bool is_interior(std::size_t q) const noexcept { return static_cast<int>(q) < interior_count; }

    /// u_h at every point.
    [[nodiscard]] std::vector<double> gather(const std::vector<double>& vertex_values) const;
    /// Vertex vector with entries sum_q weight_q c_q phi_i(x_q).
    [[nodiscard]] std::vector<double> scatter(const std::vector<double>& c, std::size_t vertex_count) const;
};

MultiplierPoints build_multiplier_points(const mesh::Mesh& mesh);

/// int_{Gamma_S} s(u_h) phi_i ds for every vertex i, s = subdiff_selection.
std::vector<double> boundary_functional(const mesh::Mesh& mesh, const mesh::DiscreteField& u,
                                        const nonsmooth::PotentialParams& p);
/// int_Omega s(u_h) phi_i dx for every vertex i.
std::vector<double> interior_functional(const mesh::Mesh& mesh, const mesh::DiscreteField& u,
                                        const nonsmooth::PotentialParams& p);

} // namespace hvi::fem
