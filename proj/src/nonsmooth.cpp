#include "hvi/nonsmooth.hpp"

#include "hvi/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>
#include <vector>

namespace hvi::nonsmooth {

void PotentialParams::validate() const {
    if (!(std::isfinite(a) && a > 0.0)) throw InvalidArgument("potential parameter a must be > 0");
    if (!(std::isfinite(b) && b >= 0.0)) throw InvalidArgument("potential parameter b must be >= 0");
}

double potential(double t, const PotentialParams& p) {
    if (t < 0.0) return 0.0;
    return -std::exp(-p.a * t) + p.b * t + 1.0;
}

double smooth_factor(double t, const PotentialParams& p) {
    return p.a * std::exp(-p.a * std::max(t, 0.0)) + p.b;
}

double subdiff_selection(double t, const PotentialParams& p) {
    if (t < 0.0) return 0.0;
    if (t > 0.0) return p.a * std::exp(-p.a * t) + p.b;
    switch (p.selection_at_zero) {
    case SelectionAtZero::left: return 0.0;
    case SelectionAtZero::right: return p.jump();
    case SelectionAtZero::mid: return 0.5 * p.jump();
    }
    return 0.0;
}

double subdiff_max(double t, const PotentialParams& p) {
    if (t < 0.0) return 0.0;
    if (t > 0.0) return p.a * std::exp(-p.a * t) + p.b;
    return p.jump();
}

double subdiff_min(double t, const PotentialParams& p) {
    if (t <= 0.0) return 0.0;
    return p.a * std::exp(-p.a * t) + p.b;
}

double clarke_j0(double t, double v, const PotentialParams& p) {
    if (t < 0.0) return 0.0;
    if (t > 0.0) return (p.a * std::exp(-p.a * t) + p.b) * v;
    return p.jump() * std::max(v, 0.0);
}

namespace {

// Supporting line of the upper concave hull of (r, m) at abscissa r_mid,
// returned as (intercept, slope).
std::pair<double, double> envelope_line(std::vector<std::pair<double, double>> pts, double r_mid) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> unique;
    for (const auto& q : pts) {
        if (!unique.empty() && unique.back().first == q.first) {
            unique.back().second = std::max(unique.back().second, q.second);
        } else {
            unique.push_back(q);
        }
    }
    std::vector<std::pair<double, double>> hull;
    for (const auto& q : unique) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const double cross = (a.first - o.first) * (q.second - o.second) - (a.second - o.second) * (q.first - o.first);
            if (cross >= 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(q);
    }
    if (hull.size() == 1) return {hull.front().second, 0.0};
    std::size_t k = 0;
    while (k + 2 < hull.size() && hull[k + 1].first < r_mid) ++k;
    const auto& lo = hull[k];
    const auto& hi = hull[k + 1];
    const double slope = (hi.second - lo.second) / (hi.first - lo.first);
    return {lo.second - slope * lo.first, slope};
}

} // namespace

HjDiagnostics estimate_hj_constants(const PotentialParams& p, double t_min, double t_max, long samples) {
    p.validate();
    if (samples < 100) throw InvalidArgument("estimate_hj_constants needs at least 100 samples");
    if (!(t_min < t_max)) throw InvalidArgument("estimate_hj_constants needs t_min < t_max");

    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(samples) + 1);
    const double step = (t_max - t_min) / static_cast<double>(samples - 1);
    for (long k = 0; k < samples; ++k) ts.push_back(k + 1 == samples ? t_max : t_min + step * k);
    if (t_min < 0.0 && t_max > 0.0) ts.push_back(0.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    HjDiagnostics out;
    out.sample_count = static_cast<long>(ts.size());

    // Over all pairs t1 < t2 the relaxed-monotonicity quotient equals
    // (max dj(t1) - min dj(t2)) / (t2 - t1); this is a chord slope, so its
    // maximum over the grid is attained on neighbouring samples.
    double alpha = 0.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double q = (subdiff_max(ts[k], p) - subdiff_min(ts[k + 1], p)) / (ts[k + 1] - ts[k]);
        alpha = std::max(alpha, q);
    }
    out.alpha_hat = alpha;

    std::vector<std::pair<double, double>> growth;
    growth.reserve(ts.size());
    double r_max = 0.0;
    double m_max = 0.0;
    for (double t : ts) {
        const double m = std::max(std::abs(subdiff_max(t, p)), std::abs(subdiff_min(t, p)));
        growth.emplace_back(std::abs(t), m);
        r_max = std::max(r_max, std::abs(t));
        m_max = std::max(m_max, m);
    }
    const auto [intercept, slope] = envelope_line(std::move(growth), 0.5 * r_max);
    if (slope <= 0.0) {
        out.c0_hat = m_max;
        out.c1_hat = 0.0;
    } else {
        out.c0_hat = std::max(intercept, 0.0);
        out.c1_hat = slope;
    }
    return out;
}

std::string to_string(SelectionAtZero rule) {
    switch (rule) {
    case SelectionAtZero::left: return "LEFT";
    case SelectionAtZero::right: return "RIGHT";
    case SelectionAtZero::mid: return "MID";
    }
    return "LEFT";
}

SelectionAtZero parse_selection(std::string_view text) {
    std::string up;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (up == "LEFT") return SelectionAtZero::left;
    if (up == "RIGHT") return SelectionAtZero::right;
    if (up == "MID") return SelectionAtZero::mid;
    throw InvalidArgument("unknown selection rule '" + std::string(text) + "' (expected LEFT, RIGHT or MID)");
}

} // namespace hvi::nonsmooth
