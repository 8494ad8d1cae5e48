#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spreadlab {

/// Uniform node set x_i = x_left + i h, i = 0 .. n-1.
class Grid {
public:
    /// Throws InvalidArgument unless h > 0 and n >= 16.
    Grid(double x_left, double h, std::size_t n);

    /// Smallest grid starting at x_left with spacing h whose right end is at
    /// least x_right.
    static Grid covering(double x_left, double x_right, double h);

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x(n_ - 1); }
    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return n_; }
    double x(std::size_t i) const noexcept { return x_left_ + static_cast<double>(i) * h_; }

    /// Grid with spacing h/2 over the same interval; every node of *this is
    /// a node of the result at index 2i.
    Grid refined() const;

private:
    double x_left_;
    double h_;
    std::size_t n_;
};

/// Grid function u(t, x_i) at one time level.
struct Field {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    Field(Grid g, std::vector<double> v, double t = 0.0);

    std::span<const double> view() const noexcept { return values; }

    /// Linear interpolation between nodes; throws InvalidArgument outside
    /// [x_left, x_right].
    double interpolate(double x) const;
};

/// Scheme overshoot guard for the range invariant of Field values.
inline constexpr double kRangeGuard = 1e-8;

}  // namespace spreadlab
