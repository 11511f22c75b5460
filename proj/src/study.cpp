#include "hvi/study.hpp"

#include "hvi/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hvi::study {

std::string to_string(NormKind kind) {
    switch (kind) {
    case NormKind::H1: return "H1";
    case NormKind::V: return "V";
    case NormKind::L2: return "L2";
    case NormKind::L2_GammaS: return "L2_GammaS";
    }
    return "H1";
}

NormKind parse_norm(std::string_view text) {
    std::string t;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    }
    if (t == "H1") return NormKind::H1;
    if (t == "V") return NormKind::V;
    if (t == "L2") return NormKind::L2;
    if (t == "L2_GammaS") return NormKind::L2_GammaS;
    throw InvalidArgument("unknown norm '" + std::string(text) + "' (expected H1, V, L2 or L2_GammaS)");
}

std::vector<NormKind> parse_norm_list(std::string_view text) {
    std::vector<NormKind> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        bool blank = true;
        for (char c : item) blank = blank && std::isspace(static_cast<unsigned char>(c));
        if (!blank) out.push_back(parse_norm(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw InvalidArgument("the norm selection is empty");
    return out;
}

NormEvaluator::NormEvaluator(const mesh::Mesh& mesh)
    : laplace_(fem::assemble_vertex_operator(mesh, fem::VertexOperator::laplace)),
      mass_(fem::assemble_vertex_operator(mesh, fem::VertexOperator::mass)),
      boundary_mass_(fem::assemble_vertex_operator(mesh, fem::VertexOperator::boundary_mass)) {}

double NormEvaluator::operator()(const std::vector<double>& v, NormKind kind) const {
    auto q = [&](const fem::SparseOperator& op) { return std::max(op.quadratic_form(v), 0.0); };
    switch (kind) {
    case NormKind::H1: return std::sqrt(q(laplace_) + q(mass_));
    case NormKind::V: return std::sqrt(q(laplace_));
    case NormKind::L2: return std::sqrt(q(mass_));
    case NormKind::L2_GammaS: return std::sqrt(q(boundary_mass_));
    }
    throw InvalidArgument("unknown norm kind");
}

double discrete_norm(const mesh::DiscreteField& field, NormKind kind, const mesh::Mesh& mesh) {
    if (field.level != mesh.level() || field.values.size() != mesh.vertex_count()) {
        throw InvalidArgument("field does not live on this mesh");
    }
    return NormEvaluator(mesh)(field.values, kind);
}

void StudyConfig::validate() const {
    if (problem.empty()) throw InvalidArgument("study needs a problem name");
    if (level_min < 1 || level_min > level_max) throw InvalidArgument("study levels must satisfy 1 <= min <= max");
    if (ref_level <= level_max) throw InvalidArgument("reference level must exceed the finest ladder level");
    if (ref_level > mesh::Mesh::max_level) {
        throw InvalidArgument("reference level must not exceed " + std::to_string(mesh::Mesh::max_level));
    }
    if (norms.empty()) throw InvalidArgument("the norm selection is empty");
    solver.validate();
}

std::pair<int, int> parse_level_range(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
            throw InvalidArgument("malformed level range '" + std::string(text) + "' (expected a..b)");
        }
        return v;
    };
    const std::size_t dots = text.find("..");
    if (dots == std::string_view::npos) {
        const int v = parse_int(text);
        return {v, v};
    }
    return {parse_int(text.substr(0, dots)), parse_int(text.substr(dots + 2))};
}

ConvergenceTable make_table(std::string problem, std::vector<NormKind> norms, const std::vector<int>& levels,
                            const std::vector<std::vector<double>>& errors) {
    if (levels.size() != errors.size()) throw InvalidArgument("one error list per level is required");
    ConvergenceTable table{std::move(problem), std::move(norms), {}};
    for (std::size_t r = 0; r < levels.size(); ++r) {
        if (errors[r].size() != table.norms.size()) throw InvalidArgument("one error per norm is required");
        ConvergenceRow row;
        row.level = levels[r];
        row.h = std::ldexp(1.0, -levels[r]);
        row.errors = errors[r];
        for (std::size_t k = 0; k < table.norms.size(); ++k) {
            if (r == 0) {
                row.orders.emplace_back();
            } else {
                row.orders.emplace_back(std::log2(errors[r - 1][k] / errors[r][k]) / (levels[r] - levels[r - 1]));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

StudyResult run_convergence_study(const StudyConfig& cfg, const coeff::ProblemSpec& spec) {
    cfg.validate();
    auto solve_level = [&](int level) {
        const mesh::Mesh m = mesh::build_uniform_mesh(level);
        try {
            return solver::solve_hvi(m, spec, cfg.solver);
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError("level " + std::to_string(level) + ": " + e.what(), e.history());
        }
    };

    const mesh::Mesh ref_mesh = mesh::build_uniform_mesh(cfg.ref_level);
    const solver::HviSolution ref = solve_level(cfg.ref_level);
    const NormEvaluator ref_norms(ref_mesh);

    StudyResult result;
    std::vector<int> levels;
    std::vector<std::vector<double>> errors;
    for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
        solver::HviSolution sol = solve_level(level);
        const mesh::DiscreteField fine = mesh::prolong(sol.u, cfg.ref_level);
        std::vector<double> e(fine.values.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = fine.values[i] - ref.u.values[i];
        std::vector<double> row;
        for (NormKind k : cfg.norms) row.push_back(ref_norms(e, k));
        levels.push_back(level);
        errors.push_back(std::move(row));
        result.seminorms.push_back(discrete_norm(sol.u, NormKind::V, mesh::build_uniform_mesh(level)));
        result.outer_iterations.push_back(sol.iterations);
        if (level == cfg.level_max) result.finest = std::move(sol);
    }
    result.table = make_table(spec.name, cfg.norms, levels, errors);
    return result;
}

std::string format_sig6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", value);
    std::string s(buf);
    const std::size_t e = s.find('e');
    if (e == std::string::npos) return s;
    const int exponent = std::stoi(s.substr(e + 1));
    return s.substr(0, e + 1) + std::to_string(exponent);
}

namespace {

std::string format_order(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string h_label(int level) { return "2^-" + std::to_string(level); }

void check_table(const ConvergenceTable& table) {
    if (table.norms.empty()) throw InvalidArgument("the norm selection is empty");
    if (table.rows.empty()) throw InvalidArgument("cannot emit an empty table");
}

} // namespace

std::string format_table_csv(const ConvergenceTable& table) {
    check_table(table);
    const bool single = table.norms.size() == 1;
    std::string out = "h";
    for (NormKind k : table.norms) {
        out += ",error_" + to_string(k);
        out += single ? ",order" : ",order_" + to_string(k);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        out += h_label(row.level);
        for (std::size_t k = 0; k < table.norms.size(); ++k) {
            out += ',' + format_sig6(row.errors[k]) + ',';
            if (row.orders[k]) out += format_order(*row.orders[k]);
        }
        out += '\n';
    }
    return out;
}

std::string format_table_json(const ConvergenceTable& table) {
    check_table(table);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        obj["problem"] = table.problem;
        obj["h"] = h_label(row.level);
        obj["level"] = row.level;
        obj["h_value"] = row.h;
        for (std::size_t k = 0; k < table.norms.size(); ++k) {
            const std::string name = to_string(table.norms[k]);
            obj["error_" + name] = row.errors[k];
            obj["order_" + name] = row.orders[k] ? nlohmann::ordered_json(*row.orders[k]) : nlohmann::ordered_json();
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

ConvergenceTable parse_table_json(std::string_view text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed table JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty()) throw InvalidArgument("table JSON must be a nonempty array of rows");
    ConvergenceTable table;
    try {
        table.problem = doc.front().value("problem", "");
        for (const auto& [key, _] : doc.front().items()) {
            if (key.rfind("error_", 0) == 0) table.norms.push_back(parse_norm(key.substr(6)));
        }
        for (const auto& obj : doc) {
            ConvergenceRow row;
            row.level = obj.at("level").get<int>();
            row.h = obj.at("h_value").get<double>();
            for (NormKind k : table.norms) {
                const std::string name = to_string(k);
                row.errors.push_back(obj.at("error_" + name).get<double>());
                const auto& o = obj.at("order_" + name);
                row.orders.push_back(o.is_null() ? std::nullopt : std::optional<double>(o.get<double>()));
            }
            table.rows.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed table JSON: ") + e.what());
    }
    return table;
}

void emit_table(const ConvergenceTable& table, TableFormat format, const std::string& path) {
    const std::string text = format == TableFormat::csv ? format_table_csv(table) : format_table_json(table);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << text;
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

} // namespace hvi::study
