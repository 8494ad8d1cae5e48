#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spreadlab/grid.hpp"

namespace spreadlab {

/// One linear piece u(y) = v0 + (v1 - v0) (y - x0) / (x1 - x0) on [x0, x1].
struct LinearPiece {
    double x0, x1;
    double v0, v1;
};

/// Continuous piecewise-linear function on the real line with values in
/// [0, 1]. Constant on (-inf, b_0] and on [b_last, +inf), unless a period
/// L is given: then the cell [b_last - L, b_last] repeats to the right of
/// b_last.
class PiecewiseLinear {
public:
    /// Throws InvalidArgument on empty input, size mismatch, non-increasing
    /// breakpoints, values outside [0, 1], or an inconsistent period (cell
    /// must fit inside [b_0, b_last] and match at both ends).
    PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values,
                    std::optional<double> period = std::nullopt);

    static PiecewiseLinear constant(double value);

    double operator()(double x) const noexcept { return eval(x); }
    double eval(double x) const noexcept;

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double left_value() const noexcept { return values_.front(); }
    /// Constant far-right value; meaningless when periodic.
    double right_value() const noexcept { return values_.back(); }
    std::optional<double> period() const noexcept { return period_; }
    bool is_periodic() const noexcept { return period_.has_value(); }

    double min_value() const noexcept;
    double max_value() const noexcept;

    /// Linear pieces covering [a, b] (a < b), periodic repetitions expanded.
    /// Constant stretches appear as pieces with v0 == v1.
    std::vector<LinearPiece> pieces(double a, double b) const;

    /// Exact integral over [a, b] from trapezoid areas.
    double integral(double a, double b) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    std::optional<double> period_;
};

/// Positions x_0 = 1 < x_1 < ... with gaps >= 3 and plateau levels
/// 0 <= alpha < beta.
struct PlateauSequence {
    std::vector<double> x;
    double alpha = 0.0;
    double beta = 0.0;

    /// Throws InvalidArgument if x_0 != 1, a gap is below 3, fewer than two
    /// terms are given, or not 0 <= alpha < beta.
    void validate() const;

    /// Geometric midpoint sqrt(x_n x_{n+1}).
    double z(std::size_t n) const;
};

/// x_0 = 1, x_{n+1} = max(ratio x_n, x_n + 3).
std::vector<double> build_sequence_geometric(double ratio, int count);

/// 1 on (-inf, 0], linear down to alpha on [0, 2], then alternating
/// plateaus alpha / beta separated by width-2 ramps centred on x_1, x_2, ...
/// The last plateau extends to +inf.
PiecewiseLinear build_oscillatory(const PlateauSequence& seq, double theta);

/// 1 on (-inf, 0], linear to gamma on [0, 2], gamma beyond.
PiecewiseLinear build_front_like(double gamma, double theta);

/// Front-like ramp 1 -> mean(w0) on [0, 2], constant up to splice_x, linear
/// bridge on [splice_x, splice_x + 1], then w0 itself.
PiecewiseLinear build_asym_periodic(const PiecewiseLinear& w0, double splice_x, double theta);

/// Average of a periodic function over one period.
double mean_periodic(const PiecewiseLinear& w0);

/// Exact nodal samples.
Field sample_to_grid(const PiecewiseLinear& pl, const Grid& grid);

/// Two-column text format: `left = v`, `right = v | periodic`,
/// optional `period = L`, then one `x v` pair per line.
std::string serialize(const PiecewiseLinear& pl);
PiecewiseLinear parse_piecewise_linear(std::string_view text);

}  // namespace spreadlab
