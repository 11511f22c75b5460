#include "hvi/config.hpp"

#include "hvi/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hvi::config {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || end != value.data() + value.size() || value.empty()) {
        throw InvalidArgument("setting '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

long to_long(const std::string& key, const std::string& value) {
    long v = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || end != value.data() + value.size() || value.empty()) {
        throw InvalidArgument("setting '" + key + "' expects an integer, got '" + value + "'");
    }
    return v;
}

nonsmooth::PotentialParams to_potential(const std::string& key, const std::string& value) {
    const std::size_t comma = value.find(',');
    if (comma == std::string::npos) throw InvalidArgument("'" + key + "' expects '<a>,<b>'");
    nonsmooth::PotentialParams p;
    p.a = to_double(key, trim(value.substr(0, comma)));
    p.b = to_double(key, trim(value.substr(comma + 1)));
    p.validate();
    return p;
}

struct ProblemDraft {
    std::string name;
    long line = 0;
    std::map<std::string, std::string> kv;
};

coeff::ProblemSpec finish(const ProblemDraft& d) {
    auto need = [&](const char* key) -> const std::string& {
        const auto it = d.kv.find(key);
        if (it == d.kv.end()) {
            throw InvalidArgument("problem '" + d.name + "' (line " + std::to_string(d.line) + ") is missing '" + key +
                                  "'");
        }
        return it->second;
    };
    auto get = [&](const char* key, const std::string& fallback) {
        const auto it = d.kv.find(key);
        return it == d.kv.end() ? fallback : it->second;
    };
    for (const auto& [key, _] : d.kv) {
        static const char* known[] = {"a11", "a12", "a21", "a22", "a0", "f0", "j1", "j2"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw InvalidArgument("problem '" + d.name + "': unknown key '" + key + "'");
    }
    coeff::ProblemSpec s;
    s.name = d.name;
    const std::string a12 = get("a12", get("a21", "0"));
    const std::string a21 = get("a21", a12);
    s.tensor = {{{coeff::parse_expr(need("a11")), coeff::parse_expr(a12)},
                 {coeff::parse_expr(a21), coeff::parse_expr(need("a22"))}}};
    s.reaction = coeff::parse_expr(get("a0", "0"));
    s.source = coeff::parse_expr(need("f0"));
    s.interior_potential = to_potential("j1", need("j1"));
    s.boundary_potential = to_potential("j2", need("j2"));
    coeff::validate_problem(s);
    return s;
}

} // namespace

ConfigFile parse_config(std::string_view text) {
    ConfigFile out;
    enum class Section { none, problem, solver, study } section = Section::none;
    ProblemDraft draft;
    auto flush = [&] {
        if (section == Section::problem) out.problems.push_back(finish(draft));
    };
    std::istringstream is{std::string(text)};
    std::string raw;
    long line_no = 0;
    try {
        while (std::getline(is, raw)) {
            ++line_no;
            std::string line = raw;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw InvalidArgument("unterminated section header");
                const std::string head = trim(line.substr(1, line.size() - 2));
                flush();
                if (head == "solver") {
                    section = Section::solver;
                } else if (head == "study") {
                    section = Section::study;
                } else if (head.rfind("problem", 0) == 0 && head.size() > 7 &&
                           std::isspace(static_cast<unsigned char>(head[7]))) {
                    section = Section::problem;
                    draft = {trim(head.substr(7)), line_no, {}};
                } else {
                    throw InvalidArgument("unknown section [" + head + "]");
                }
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) throw InvalidArgument("expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw InvalidArgument("empty key");
            switch (section) {
            case Section::none: throw InvalidArgument("setting outside of a section");
            case Section::problem: draft.kv[key] = value; break;
            case Section::solver: out.solver[key] = value; break;
            case Section::study: out.study[key] = value; break;
            }
        }
        flush();
    } catch (const ParseError& e) {
        throw ParseError("config line " + std::to_string(line_no) + ": " + e.what(), e.column());
    } catch (const Error& e) {
        throw ParseError("config line " + std::to_string(line_no) + ": " + e.what(), 1);
    }
    // Validate the sections eagerly so typos surface at load time.
    solver::SolverParams sp;
    apply_solver_settings(out.solver, sp);
    study::StudyConfig sc;
    apply_study_settings(out.study, sc);
    return out;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

void apply_solver_settings(const std::map<std::string, std::string>& kv, solver::SolverParams& params) {
    for (const auto& [key, value] : kv) {
        if (key == "outer_tol") {
            params.outer_tol = to_double(key, value);
        } else if (key == "outer_maxit") {
            params.outer_maxit = static_cast<int>(to_long(key, value));
        } else if (key == "damping") {
            params.damping = to_double(key, value);
        } else if (key == "cg_tol") {
            params.cg_tol = to_double(key, value);
        } else if (key == "cg_maxit") {
            params.cg_maxit = to_long(key, value);
        } else if (key == "selection_at_zero") {
            params.selection_at_zero = nonsmooth::parse_selection(value);
        } else if (key == "linear_solver") {
            params.linear_solver = linalg::parse_linear_solver(value);
        } else {
            throw InvalidArgument("unknown [solver] key '" + key + "'");
        }
    }
    params.validate();
}

void apply_study_settings(const std::map<std::string, std::string>& kv, study::StudyConfig& cfg) {
    for (const auto& [key, value] : kv) {
        if (key == "problem") {
            cfg.problem = value;
        } else if (key == "levels") {
            const auto [lo, hi] = study::parse_level_range(value);
            cfg.level_min = lo;
            cfg.level_max = hi;
        } else if (key == "ref") {
            cfg.ref_level = static_cast<int>(to_long(key, value));
        } else if (key == "norms") {
            cfg.norms = study::parse_norm_list(value);
        } else if (key == "outdir") {
            cfg.outdir = value;
        } else if (key == "emit") {
            cfg.emit_csv = cfg.emit_json = cfg.emit_svg = false;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item == "csv") {
                    cfg.emit_csv = true;
                } else if (item == "json") {
                    cfg.emit_json = true;
                } else if (item == "svg") {
                    cfg.emit_svg = true;
                } else if (!item.empty()) {
                    throw InvalidArgument("unknown emit target '" + item + "' (expected csv, json, svg)");
                }
            }
        } else {
            throw InvalidArgument("unknown [study] key '" + key + "'");
        }
    }
}

coeff::ProblemRegistry make_registry(const ConfigFile& file) {
    coeff::ProblemRegistry reg;
    for (const auto& p : file.problems) reg.add(p);
    return reg;
}

} // namespace hvi::config
