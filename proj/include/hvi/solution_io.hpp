#pragma once

#include "hvi/mesh.hpp"
#include "hvi/solver.hpp"

#include <iosfwd>
#include <string>

namespace hvi::io {

/// Writes the mesh text format followed by
///   solution problem=<name> level=<n> converged=<0|1> iterations=<k> zero_band=<tau>
///   potential interior|boundary <a> <b> <LEFT|RIGHT|MID>
///   history <c1> <c2> ...
///   u <vertex> <value>        (every vertex)
///   lambda <vertex> <value>   (semipermeable vertices)
///   mu <vertex> <value>       (every vertex)
/// Values use 17 significant digits, so reading back is exact.
void write_solution(std::ostream& os, const mesh::Mesh& mesh, const solver::HviSolution& sol);
void save_solution(const std::string& path, const mesh::Mesh& mesh, const solver::HviSolution& sol);

/// Quadrature-point multipliers are not stored and come back empty.
/// Throws IoError on malformed input.
solver::HviSolution read_solution(std::istream& is);
solver::HviSolution load_solution(const std::string& path);

} // namespace hvi::io
