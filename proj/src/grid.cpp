#include "spreadlab/grid.hpp"

#include <cmath>
#include <string>

#include "spreadlab/error.hpp"

namespace spreadlab {

Grid::Grid(double x_left, double h, std::size_t n) : x_left_(x_left), h_(h), n_(n) {
    if (!std::isfinite(x_left) || !std::isfinite(h) || !(h > 0.0)) {
        throw InvalidArgument("grid spacing must be positive and finite");
    }
    if (n < 16) throw InvalidArgument("grid needs at least 16 nodes, got " + std::to_string(n));
}

Grid Grid::covering(double x_left, double x_right, double h) {
    if (!(x_right > x_left)) throw InvalidArgument("grid requires x_right > x_left");
    if (!(h > 0.0)) throw InvalidArgument("grid spacing must be positive");
    const double cells = std::ceil((x_right - x_left) / h - 1e-9);
    return {x_left, h, static_cast<std::size_t>(cells) + 1};
}

Grid Grid::refined() const { return {x_left_, 0.5 * h_, 2 * n_ - 1}; }

Field::Field(Grid g, std::vector<double> v, double t)
    : grid(g), values(std::move(v)), time(t) {
    if (values.size() != grid.size()) throw InvalidArgument("field size does not match grid");
}

double Field::interpolate(double x) const {
    const double s = (x - grid.x_left()) / grid.h();
    if (!(s >= 0.0) || s > static_cast<double>(grid.size() - 1)) {
        throw InvalidArgument("interpolation point outside the grid");
    }
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= grid.size() - 1) i = grid.size() - 2;
    const double w = s - static_cast<double>(i);
    return values[i] + w * (values[i + 1] - values[i]);
}

}  // namespace spreadlab
