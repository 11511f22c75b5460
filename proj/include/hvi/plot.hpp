#pragma once

#include "hvi/nonsmooth.hpp"
#include "hvi/solver.hpp"

#include <string>
#include <vector>

namespace hvi::plot {

enum class MultiplierKind { boundary, interior };

struct ScatterPoint {
    double t;  ///< u_h at the vertex
    double m;  ///< multiplier at the vertex
};

/// (u_h, lambda_h) over the semipermeable vertices or (u_h, mu_h) over all vertices.
std::vector<ScatterPoint> multiplier_scatter(const solver::HviSolution& sol, MultiplierKind kind);

/// Vertical distance from (t, m) to the graph of dj. Points with |t| <= zero_band
/// are measured against the vertical segment {0} x [0, a+b].
double graph_distance(double t, double m, const nonsmooth::PotentialParams& p, double zero_band = 0.0);

struct PlotReport {
    std::size_t points = 0;
    double max_distance = 0.0;
};

/// 800 x 600 SVG scatter over the graph of dj. Refuses (InvalidArgument) a
/// non-converged solution; IoError if the file cannot be written.
PlotReport emit_multiplier_plot(const solver::HviSolution& sol, const nonsmooth::PotentialParams& p,
                                MultiplierKind kind, const std::string& path);
std::string multiplier_svg(const solver::HviSolution& sol, const nonsmooth::PotentialParams& p, MultiplierKind kind,
                           PlotReport* report = nullptr);

/// Flat-shaded raster of u_h on a display mesh of at most 2^6 cells per side.
void emit_solution_plot(const solver::HviSolution& sol, const std::string& path);
std::string solution_svg(const solver::HviSolution& sol);

} // namespace hvi::plot
