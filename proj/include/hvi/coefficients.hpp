#pragma once

#include "hvi/expr.hpp"
#include "hvi/nonsmooth.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace hvi::coeff {

/// Coefficients and potentials of one boundary value problem
///     -div(A grad u) + a0 u + f1 = f0 in the unit square,
/// with -f1 in dj1(u) inside and the co-normal flux in -dj2(u) on the bottom side.
struct ProblemSpec {
    std::string name;
    std::array<std::array<Expr, 2>, 2> tensor;
    Expr reaction;
    Expr source;
    nonsmooth::PotentialParams interior_potential;
    nonsmooth::PotentialParams boundary_potential;

    /// Tensor entries at (x, y).
    [[nodiscard]] std::array<std::array<double, 2>, 2> tensor_at(double x, double y) const;
};

/// Minimum over a grid x grid sample of [0,1]^2 of the smaller eigenvalue of
/// the symmetrized tensor. Throws EllipticityError if the minimum is <= 0.
double estimate_theta(const ProblemSpec& spec, int grid = 129);

/// Checks totality, symmetry (1e-14), a0 >= 0 and theta > 0 on a 33 x 33 grid
/// and the potential parameters. Throws the matching error on failure.
void validate_problem(const ProblemSpec& spec);

/// Named problems. The built-in entries are "example1" and "example2".
class ProblemRegistry {
public:
    ProblemRegistry();

    /// Validates and stores `spec`, replacing any problem with the same name.
    void add(ProblemSpec spec);
    /// Throws LookupError listing the registered names.
    [[nodiscard]] const ProblemSpec& get(const std::string& name) const;
    [[nodiscard]] bool contains(const std::string& name) const { return problems_.count(name) != 0; }
    [[nodiscard]] std::vector<std::string> names() const;

private:
    std::map<std::string, ProblemSpec> problems_;
};

/// Registry holding only the built-in problems.
const ProblemRegistry& builtin_problems();

/// Looks `name` up among the built-in problems.
ProblemSpec get_problem(const std::string& name);

ProblemSpec make_example1();
ProblemSpec make_example2();

} // namespace hvi::coeff
