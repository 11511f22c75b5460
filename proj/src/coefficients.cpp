#include "hvi/coefficients.hpp"

#include "hvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hvi::coeff {

std::array<std::array<double, 2>, 2> ProblemSpec::tensor_at(double x, double y) const {
    return {{{tensor[0][0].eval(x, y), tensor[0][1].eval(x, y)}, {tensor[1][0].eval(x, y), tensor[1][1].eval(x, y)}}};
}

double estimate_theta(const ProblemSpec& spec, int grid) {
    if (grid < 2) throw InvalidArgument("estimate_theta needs a grid of at least 2 x 2 points");
    double theta = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid; ++j) {
        const double y = static_cast<double>(j) / (grid - 1);
        for (int i = 0; i < grid; ++i) {
            const double x = static_cast<double>(i) / (grid - 1);
            const auto a = spec.tensor_at(x, y);
            const double off = 0.5 * (a[0][1] + a[1][0]);
            const double tr = a[0][0] + a[1][1];
            const double det = a[0][0] * a[1][1] - off * off;
            const double lo = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
            theta = std::min(theta, lo);
        }
    }
    if (!(theta > 0.0)) {
        throw EllipticityError("problem '" + spec.name + "' is not uniformly elliptic (theta estimate " +
                               std::to_string(theta) + ")");
    }
    return theta;
}

void validate_problem(const ProblemSpec& spec) {
    if (spec.name.empty()) throw InvalidArgument("problem name must not be empty");
    for (const auto& row : spec.tensor) {
        for (const auto& e : row) {
            if (e.empty()) throw InvalidArgument("problem '" + spec.name + "' has an empty tensor entry");
        }
    }
    if (spec.reaction.empty() || spec.source.empty()) {
        throw InvalidArgument("problem '" + spec.name + "' needs both a0 and f0");
    }
    spec.interior_potential.validate();
    spec.boundary_potential.validate();

    constexpr int grid = 33;
    for (int j = 0; j < grid; ++j) {
        const double y = static_cast<double>(j) / (grid - 1);
        for (int i = 0; i < grid; ++i) {
            const double x = static_cast<double>(i) / (grid - 1);
            const auto a = spec.tensor_at(x, y);
            if (std::abs(a[0][1] - a[1][0]) > 1e-14) {
                throw InvalidArgument("problem '" + spec.name + "': a12 and a21 differ at (" + std::to_string(x) +
                                      ", " + std::to_string(y) + ")");
            }
            if (spec.reaction.eval(x, y) < 0.0) {
                throw InvalidArgument("problem '" + spec.name + "': a0 is negative at (" + std::to_string(x) + ", " +
                                      std::to_string(y) + ")");
            }
            (void)spec.source.eval(x, y);
        }
    }
    (void)estimate_theta(spec, grid);
}

ProblemSpec make_example1() {
    ProblemSpec s;
    s.name = "example1";
    s.tensor = {{{parse_expr("2"), parse_expr("1")}, {parse_expr("1"), parse_expr("1")}}};
    s.reaction = parse_expr("0");
    s.source = parse_expr("-40*sin(2*pi*x)*exp(2*y)");
    s.interior_potential = {1.0, 1.0, nonsmooth::SelectionAtZero::left};
    s.boundary_potential = {0.5, 0.5, nonsmooth::SelectionAtZero::left};
    return s;
}

ProblemSpec make_example2() {
    ProblemSpec s = make_example1();
    s.name = "example2";
    s.tensor = {{{parse_expr("1"), parse_expr("x*y")}, {parse_expr("x*y"), parse_expr("10")}}};
    s.reaction = parse_expr("1");
    s.source = parse_expr("(12*pi^2*sin(2*pi*y) + sin(2*pi*y) - 2*pi*y*cos(2*pi*y))*sin(2*pi*x)"
                          " - (2*pi*x*sin(2*pi*y) + 8*pi^2*x*y*cos(2*pi*y))*cos(2*pi*x)");
    return s;
}

ProblemRegistry::ProblemRegistry() {
    add(make_example1());
    add(make_example2());
}

void ProblemRegistry::add(ProblemSpec spec) {
    validate_problem(spec);
    const std::string name = spec.name;
    problems_.insert_or_assign(name, std::move(spec));
}

const ProblemSpec& ProblemRegistry::get(const std::string& name) const {
    const auto it = problems_.find(name);
    if (it == problems_.end()) {
        std::string known;
        for (const auto& [n, _] : problems_) known += (known.empty() ? "" : ", ") + n;
        throw LookupError("unknown problem '" + name + "'; registered problems: " + known);
    }
    return it->second;
}

std::vector<std::string> ProblemRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [n, _] : problems_) out.push_back(n);
    return out;
}

const ProblemRegistry& builtin_problems() {
    static const ProblemRegistry registry;
    return registry;
}

ProblemSpec get_problem(const std::string& name) { return builtin_problems().get(name); }

} // namespace hvi::coeff
