#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hvi::nonsmooth {

/// Element of the set-valued subdifferential used where it is a whole interval (t = 0).
enum class SelectionAtZero : std::uint8_t { left, right, mid };

/// Parameters of the two-branch potential
///     j(t) = 0                     for t < 0,
///     j(t) = -exp(-a t) + b t + 1  for t >= 0,
/// whose Clarke subdifferential is {0} for t < 0, [0, a + b] at 0 and
/// {a exp(-a t) + b} for t > 0.
struct PotentialParams {
    double a = 1.0;
    double b = 1.0;
    SelectionAtZero selection_at_zero = SelectionAtZero::left;

    /// Throws InvalidArgument unless a > 0 and b >= 0 (both finite).
    void validate() const;
    /// Upper end a + b of the subdifferential range.
    [[nodiscard]] double jump() const noexcept { return a + b; }
};

[[nodiscard]] double potential(double t, const PotentialParams& p);

/// Single-valued selection of dj(t).
[[nodiscard]] double subdiff_selection(double t, const PotentialParams& p);

/// Clarke generalized directional derivative j0(t; v).
[[nodiscard]] double clarke_j0(double t, double v, const PotentialParams& p);

/// max / min of the subdifferential at t.
[[nodiscard]] double subdiff_max(double t, const PotentialParams& p);
[[nodiscard]] double subdiff_min(double t, const PotentialParams& p);

/// Smooth factor g(t) = a exp(-a max(t,0)) + b, so that dj(t) = g(t) * H(t) with
/// H the Heaviside graph ({0}, [0,1], {1}).
[[nodiscard]] double smooth_factor(double t, const PotentialParams& p);

/// Sampled estimates of the growth and relaxed-monotonicity constants:
///   |dj(t)| <= c0_hat + c1_hat |t|,
///   j0(t1; t2 - t1) + j0(t2; t1 - t2) <= alpha_hat (t1 - t2)^2.
struct HjDiagnostics {
    double c0_hat = 0.0;
    double c1_hat = 0.0;
    double alpha_hat = 0.0;
    long sample_count = 0;
};

/// Samples `samples` equispaced points of [t_min, t_max] (plus t = 0 when it
/// lies inside). Throws InvalidArgument for samples < 100 or an empty range.
HjDiagnostics estimate_hj_constants(const PotentialParams& p, double t_min = -10.0, double t_max = 10.0,
                                    long samples = 100000);

[[nodiscard]] std::string to_string(SelectionAtZero rule);
/// Accepts LEFT/RIGHT/MID in any case.
[[nodiscard]] SelectionAtZero parse_selection(std::string_view text);

} // namespace hvi::nonsmooth
