#include "hvi/plot.hpp"

#include "hvi/errors.hpp"
#include "hvi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hvi::plot {

namespace {

constexpr int width = 800;
constexpr int height = 600;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string num(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') {
            out += "&lt;";
        } else if (c == '>') {
            out += "&gt;";
        } else if (c == '&') {
            out += "&amp;";
        } else {
            out += c;
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

struct Frame {
    double x0, x1, y0, y1;
    double left = 80, right = 770, top = 50, bottom = 540;
    [[nodiscard]] double px(double x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
    [[nodiscard]] double py(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel, const std::string& title) {
    std::string s;
    s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.right - f.left) +
         "\" height=\"" + num(f.bottom - f.top) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = f.x0 + (f.x1 - f.x0) * k / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * k / 5.0;
        s += "<line x1=\"" + num(f.px(xv)) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.px(xv)) + "\" y2=\"" +
             num(f.bottom + 6) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(f.bottom + 22) +
             "\" font-size=\"12\" text-anchor=\"middle\">" + fmt("%.3g", xv) + "</text>\n";
        s += "<line x1=\"" + num(f.left - 6) + "\" y1=\"" + num(f.py(yv)) + "\" x2=\"" + num(f.left) + "\" y2=\"" +
             num(f.py(yv)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(f.left - 10) + "\" y=\"" + num(f.py(yv) + 4) +
             "\" font-size=\"12\" text-anchor=\"end\">" + fmt("%.3g", yv) + "</text>\n";
    }
    s += "<text x=\"" + num(0.5 * (f.left + f.right)) + "\" y=\"" + num(height - 12.0) +
         "\" font-size=\"14\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"20\" y=\"" + num(0.5 * (f.top + f.bottom)) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + num(0.5 * (f.top + f.bottom)) +
         ")\">" + escape(ylabel) + "</text>\n";
    s += "<text x=\"" + num(width / 2.0) + "\" y=\"30\" font-size=\"16\" text-anchor=\"middle\">" + escape(title) +
         "</text>\n";
    return s;
}

std::string svg_open() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

} // namespace

std::vector<ScatterPoint> multiplier_scatter(const solver::HviSolution& sol, MultiplierKind kind) {
    std::vector<ScatterPoint> out;
    const auto& u = sol.u.values;
    if (kind == MultiplierKind::boundary) {
        if (sol.lambda_nodal.size() != sol.boundary_vertices.size()) {
            throw InvalidArgument("boundary multipliers do not match the boundary vertices");
        }
        for (std::size_t k = 0; k < sol.boundary_vertices.size(); ++k) {
            out.push_back({u.at(static_cast<std::size_t>(sol.boundary_vertices[k])), sol.lambda_nodal[k]});
        }
    } else {
        if (sol.mu_nodal.size() != u.size()) throw InvalidArgument("interior multipliers do not match the vertices");
        for (std::size_t k = 0; k < u.size(); ++k) out.push_back({u[k], sol.mu_nodal[k]});
    }
    return out;
}

double graph_distance(double t, double m, const nonsmooth::PotentialParams& p, double zero_band) {
    if (std::abs(t) <= zero_band) {
        if (m < 0.0) return -m;
        if (m > p.jump()) return m - p.jump();
        return 0.0;
    }
    return std::abs(m - nonsmooth::subdiff_selection(t, p));
}

std::string multiplier_svg(const solver::HviSolution& sol, const nonsmooth::PotentialParams& p, MultiplierKind kind,
                           PlotReport* report) {
    if (!sol.converged) throw InvalidArgument("refusing to plot the multipliers of a non-converged solution");
    const auto pts = multiplier_scatter(sol, kind);
    PlotReport rep;
    rep.points = pts.size();
    double tmin = 0.0;
    double tmax = 0.0;
    double mmax = p.jump();
    for (const auto& q : pts) {
        rep.max_distance = std::max(rep.max_distance, graph_distance(q.t, q.m, p, sol.zero_band));
        tmin = std::min(tmin, q.t);
        tmax = std::max(tmax, q.t);
        mmax = std::max(mmax, q.m);
    }
    if (tmax - tmin < 1e-12) {
        tmin -= 1.0;
        tmax += 1.0;
    }
    const double padx = 0.05 * (tmax - tmin);
    Frame f{tmin - padx, tmax + padx, -0.05 * mmax, 1.08 * mmax};

    const bool boundary = kind == MultiplierKind::boundary;
    std::string s = svg_open();
    s += axes(f, "u_h", boundary ? "lambda_h" : "mu_h",
              std::string(boundary ? "Boundary" : "Interior") + " multiplier of " + sol.problem + " (a=" +
                  fmt("%g", p.a) + ", b=" + fmt("%g", p.b) + ")");

    // Graph of dj: zero branch, vertical segment at the kink, decaying branch.
    std::string path = "M" + num(f.px(f.x0)) + "," + num(f.py(0.0)) + " L" + num(f.px(0.0)) + "," + num(f.py(0.0)) +
                       " L" + num(f.px(0.0)) + "," + num(f.py(p.jump()));
    if (f.x1 > 0.0) {
        constexpr int samples = 200;
        for (int k = 1; k <= samples; ++k) {
            const double t = f.x1 * k / samples;
            path += " L" + num(f.px(t)) + "," + num(f.py(nonsmooth::subdiff_selection(t, p)));
        }
    }
    s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>\n";
    for (const auto& q : pts) {
        s += "<circle cx=\"" + num(f.px(q.t)) + "\" cy=\"" + num(f.py(q.m)) +
             "\" r=\"3\" fill=\"#d62728\" fill-opacity=\"0.6\"/>\n";
    }
    s += "</svg>\n";
    if (report) *report = rep;
    return s;
}

PlotReport emit_multiplier_plot(const solver::HviSolution& sol, const nonsmooth::PotentialParams& p,
                                MultiplierKind kind, const std::string& path) {
    PlotReport rep;
    const std::string text = multiplier_svg(sol, p, kind, &rep);
    write_file(path, text);
    return rep;
}

std::string solution_svg(const solver::HviSolution& sol) {
    const int level = std::min(sol.u.level, 6);
    const mesh::Mesh display = mesh::build_uniform_mesh(level);
    double umax = 0.0;
    for (double v : sol.u.values) umax = std::max(umax, std::abs(v));
    if (umax == 0.0) umax = 1.0;

    auto color = [&](double v) {
        // Diverging blue-white-red scale symmetric about 0.
        const double s = std::clamp(v / umax, -1.0, 1.0);
        int r = 255;
        int g = 255;
        int b = 255;
        if (s < 0.0) {
            r = g = static_cast<int>(std::lround(255 * (1.0 + s)));
        } else {
            g = b = static_cast<int>(std::lround(255 * (1.0 - s)));
        }
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };

    Frame f{0.0, 1.0, 0.0, 1.0};
    f.left = 80;
    f.right = 570;
    f.top = 50;
    f.bottom = 540;
    std::string s = svg_open();
    s += axes(f, "x", "y", "Discrete solution of " + sol.problem + " (h = 2^-" + std::to_string(sol.u.level) + ")");
    for (std::size_t t = 0; t < display.triangle_count(); ++t) {
        const auto& tri = display.triangles()[t];
        const auto& v = display.vertices();
        const mesh::Point c{(v[tri[0]].x + v[tri[1]].x + v[tri[2]].x) / 3.0,
                            (v[tri[0]].y + v[tri[1]].y + v[tri[2]].y) / 3.0};
        const std::string col = color(mesh::evaluate_at(sol.u, c));
        s += "<polygon points=\"";
        for (int i = 0; i < 3; ++i) s += num(f.px(v[tri[i]].x)) + "," + num(f.py(v[tri[i]].y)) + " ";
        s += "\" fill=\"" + col + "\" stroke=\"" + col + "\" stroke-width=\"0.5\"/>\n";
    }
    // Colour bar.
    constexpr int steps = 50;
    for (int k = 0; k < steps; ++k) {
        const double v = umax * (1.0 - 2.0 * (k + 0.5) / steps);
        const double y = f.top + (f.bottom - f.top) * k / steps;
        s += "<rect x=\"640\" y=\"" + num(y) + "\" width=\"30\" height=\"" + num((f.bottom - f.top) / steps + 0.5) +
             "\" fill=\"" + color(v) + "\"/>\n";
    }
    s += "<text x=\"680\" y=\"" + num(f.top + 10) + "\" font-size=\"12\">" + fmt("%.4g", umax) + "</text>\n";
    s += "<text x=\"680\" y=\"" + num(0.5 * (f.top + f.bottom) + 4) + "\" font-size=\"12\">0</text>\n";
    s += "<text x=\"680\" y=\"" + num(f.bottom) + "\" font-size=\"12\">" + fmt("%.4g", -umax) + "</text>\n";
    s += "</svg>\n";
    return s;
}

void emit_solution_plot(const solver::HviSolution& sol, const std::string& path) { write_file(path, solution_svg(sol)); }

} // namespace hvi::plot
