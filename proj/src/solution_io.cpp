#include "hvi/solution_io.hpp"

#include "hvi/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hvi::io {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_potential(std::ostream& os, const char* which, const nonsmooth::PotentialParams& p) {
    os << "potential " << which << ' ' << g17(p.a) << ' ' << g17(p.b) << ' ' << nonsmooth::to_string(p.selection_at_zero)
       << '\n';
}

} // namespace

void write_solution(std::ostream& os, const mesh::Mesh& mesh, const solver::HviSolution& sol) {
    if (sol.u.level != mesh.level() || sol.u.values.size() != mesh.vertex_count()) {
        throw InvalidArgument("solution does not live on this mesh");
    }
    mesh::write_mesh(os, mesh);
    os << "solution problem=" << sol.problem << " level=" << mesh.level() << " converged=" << (sol.converged ? 1 : 0)
       << " iterations=" << sol.iterations << " zero_band=" << g17(sol.zero_band) << '\n';
    write_potential(os, "interior", sol.interior_potential);
    write_potential(os, "boundary", sol.boundary_potential);
    os << "history";
    for (double h : sol.history) os << ' ' << g17(h);
    os << '\n';
    for (std::size_t i = 0; i < sol.u.values.size(); ++i) os << "u " << i << ' ' << g17(sol.u.values[i]) << '\n';
    for (std::size_t k = 0; k < sol.boundary_vertices.size(); ++k) {
        os << "lambda " << sol.boundary_vertices[k] << ' ' << g17(sol.lambda_nodal[k]) << '\n';
    }
    for (std::size_t i = 0; i < sol.mu_nodal.size(); ++i) os << "mu " << i << ' ' << g17(sol.mu_nodal[i]) << '\n';
}

void save_solution(const std::string& path, const mesh::Mesh& mesh, const solver::HviSolution& sol) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_solution(os, mesh, sol);
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

solver::HviSolution read_solution(std::istream& is) {
    solver::HviSolution sol;
    std::string line;
    long line_no = 0;
    int level = -1;
    bool have_header = false;
    std::size_t vertex_count = 0;
    auto fail = [&](const std::string& what) -> void {
        throw IoError("solution file line " + std::to_string(line_no) + ": " + what);
    };
    auto read_potential = [&](std::istringstream& ss, nonsmooth::PotentialParams& p) {
        std::string sel;
        if (!(ss >> p.a >> p.b >> sel)) fail("malformed potential line");
        try {
            p.selection_at_zero = nonsmooth::parse_selection(sel);
            p.validate();
        } catch (const InvalidArgument& e) {
            fail(e.what());
        }
    };
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            std::istringstream ss(line);
            std::string tag;
            ss >> tag;
            if (tag == "mesh") {
                std::string kv;
                ss >> kv;
                if (kv.rfind("level=", 0) != 0) fail("expected mesh level=<n>");
                level = std::stoi(kv.substr(6));
                if (level < 1 || level > mesh::Mesh::max_level) fail("mesh level out of range");
                const std::size_t m = (std::size_t{1} << level) + 1;
                vertex_count = m * m;
            } else if (tag == "v" || tag == "t" || tag == "e") {
                continue;
            } else if (tag == "solution") {
                std::string kv;
                while (ss >> kv) {
                    const std::size_t eq = kv.find('=');
                    if (eq == std::string::npos) fail("expected key=value in solution header");
                    const std::string key = kv.substr(0, eq);
                    const std::string val = kv.substr(eq + 1);
                    if (key == "problem") {
                        sol.problem = val;
                    } else if (key == "level") {
                        if (std::stoi(val) != level) fail("solution level differs from mesh level");
                    } else if (key == "converged") {
                        sol.converged = val == "1";
                    } else if (key == "iterations") {
                        sol.iterations = std::stoi(val);
                    } else if (key == "zero_band") {
                        sol.zero_band = std::stod(val);
                    }
                }
                have_header = true;
                sol.u = {level, std::vector<double>(vertex_count, 0.0)};
                sol.mu_nodal.assign(vertex_count, 0.0);
            } else if (tag == "potential") {
                std::string which;
                ss >> which;
                if (which == "interior") {
                    read_potential(ss, sol.interior_potential);
                } else if (which == "boundary") {
                    read_potential(ss, sol.boundary_potential);
                } else {
                    fail("unknown potential '" + which + "'");
                }
            } else if (tag == "history") {
                double v = 0.0;
                while (ss >> v) sol.history.push_back(v);
            } else if (tag == "u" || tag == "lambda" || tag == "mu") {
                if (!have_header) fail("nodal values before the solution header");
                std::size_t idx = 0;
                double v = 0.0;
                if (!(ss >> idx >> v) || idx >= vertex_count) fail("malformed nodal value");
                if (tag == "u") {
                    sol.u.values[idx] = v;
                } else if (tag == "mu") {
                    sol.mu_nodal[idx] = v;
                } else {
                    sol.boundary_vertices.push_back(static_cast<int>(idx));
                    sol.lambda_nodal.push_back(v);
                }
            } else {
                fail("unknown record '" + tag + "'");
            }
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
    }
    if (!have_header) throw IoError("solution file has no solution header");
    return sol;
}

solver::HviSolution load_solution(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    return read_solution(is);
}

} // namespace hvi::io
