#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace hvi::fem {

/// Rule on a triangle in barycentric coordinates. Weights are normalized to
/// sum to 1, so the integral over T is |T| * sum_q w_q f(x_q).
struct TriangleRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

/// Rule on an edge parametrized by s in [0,1]. Weights sum to 1, so the
/// integral over e is |e| * sum_q w_q f(s_q).
struct EdgeRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Edge-midpoint rule, exact for total degree <= 2.
inline const TriangleRule& default_triangle_rule() {
    static const TriangleRule rule{
        {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
    };
    return rule;
}

/// Two-point Gauss rule, exact for degree <= 3.
inline const EdgeRule& default_edge_rule() {
    static const EdgeRule rule{
        {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)},
        {0.5, 0.5},
    };
    return rule;
}

} // namespace hvi::fem
