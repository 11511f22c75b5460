#pragma once

#include "hvi/coefficients.hpp"
#include "hvi/mesh.hpp"

#include <string>

namespace hvi::solver {

struct EigenOptions {
    double tol = 1e-8;
    int maxit = 2000;
    double cg_tol = 1e-12;
};

/// Smallest eigenvalue of K v = lambda M v on the free dofs (inverse power
/// iteration, one CG solve per step). Throws DiagnosticsError on stagnation.
double estimate_lambda_L(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt = {});

/// Smallest eigenvalue of K v = mu M_Gamma v, i.e. the reciprocal of the
/// dominant eigenvalue of K^-1 M_Gamma. Throws DiagnosticsError when the mesh
/// has no semipermeable side or the iteration stagnates.
double estimate_mu_L(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt = {});

struct Diagnostics {
    double lambda_L = 0.0;
    double mu_L = 0.0;
    double theta = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double smallness_margin = 0.0;
};

Diagnostics compute_diagnostics(const mesh::Mesh& mesh, const coeff::ProblemSpec& spec, const EigenOptions& opt = {});

struct SmallnessReport {
    double margin = 0.0;
    bool satisfied = false;
    std::string text;
};

/// margin = theta - alpha1 / lambda_L - alpha2 / mu_L.
SmallnessReport smallness_check(const Diagnostics& d);

} // namespace hvi::solver
