#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spreadlab/profiles.hpp"

namespace spreadlab {

/// Exact solution of v_t = v_xx, v(0, .) = pl, at (t, x).
///
/// Each linear piece m y + b on [y0, y1] contributes
///   (m x + b) [erf(z1) - erf(z0)] / 2 + m sqrt(t) [e^{-z0^2} - e^{-z1^2}] / sqrt(pi)
/// with z = (y - x) / (2 sqrt(t)); the constant tails contribute erfc terms.
/// Periodic far fields are expanded up to x + 12 sqrt(t) + one period and
/// replaced by their mean beyond (kernel mass there is below 1e-30).
double heat_eval(const PiecewiseLinear& pl, double t, double x);

/// heat_eval at many positions; the piece list is built once.
std::vector<double> heat_eval(const PiecewiseLinear& pl, double t, std::span<const double> xs);

/// Probe for the finite-scale surrogate of liminf / limsup as x -> +inf.
struct HeatProbe {
    double t;
    double x0;
    double x1;

    void validate() const;
};

/// Infimum and supremum of v(t, .) over [x0, x1] sampled with spacing <= 0.1.
std::pair<double, double> alpha_min_max(const PiecewiseLinear& pl, const HeatProbe& probe);

/// Integral of v(t, .) over the support padded by 12 sqrt(t), by composite
/// Gauss-Legendre quadrature. Requires zero tails.
double mass_conservation(const PiecewiseLinear& pl_compact, double t);

/// sup_x |v(t, x)| for each t, from dense sampling plus Brent refinement.
std::vector<double> sup_decay(const PiecewiseLinear& pl_compact, std::span<const double> times);

}  // namespace spreadlab
