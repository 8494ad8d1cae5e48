#include "spreadlab/heat.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "spreadlab/error.hpp"

namespace spreadlab {

namespace {

// erf(b) - erf(a) without cancellation when both arguments share a tail.
double erf_diff(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::erfc(a) - std::erfc(b);
    if (a < 0.0 && b < 0.0) return std::erfc(-b) - std::erfc(-a);
    return std::erf(b) - std::erf(a);
}

struct PieceSet {
    double left_value;
    double left_end;
    std::vector<LinearPiece> pieces;
    double right_value;
    double right_start;
};

PieceSet expand(const PiecewiseLinear& pl, double horizon) {
    const auto& bp = pl.breakpoints();
    PieceSet set{pl.left_value(), bp.front(), {}, pl.right_value(), bp.back()};
    if (pl.is_periodic()) {
        const double end = std::max(horizon, bp.back());
        set.pieces = pl.pieces(bp.front(), end);
        set.right_value = mean_periodic(pl);
        set.right_start = end;
    } else if (bp.size() > 1) {
        set.pieces = pl.pieces(bp.front(), bp.back());
    }
    return set;
}

double eval_set(const PieceSet& set, double t, double x) {
    const double s = 2.0 * std::sqrt(t);
    constexpr double cutoff = 9.0;
    double total = set.left_value * 0.5 * std::erfc(-(set.left_end - x) / s);
    total += set.right_value * 0.5 * std::erfc((set.right_start - x) / s);
    for (const auto& p : set.pieces) {
        const double z0 = (p.x0 - x) / s;
        const double z1 = (p.x1 - x) / s;
        if ((z0 > cutoff && z1 > cutoff) || (z0 < -cutoff && z1 < -cutoff)) continue;
        const double m = (p.v1 - p.v0) / (p.x1 - p.x0);
        const double at_x = p.v0 + m * (x - p.x0);
        total += at_x * 0.5 * erf_diff(z0, z1);
        if (m != 0.0) {
            total += m * s * 0.5 * std::numbers::inv_sqrtpi *
                     (std::exp(-z0 * z0) - std::exp(-z1 * z1));
        }
    }
    return total;
}

double horizon_for(const PiecewiseLinear& pl, double t, double x_max) {
    const double L = pl.period().value_or(0.0);
    return x_max + 12.0 * std::sqrt(t) + L;
}

void require_compact(const PiecewiseLinear& pl) {
    if (pl.is_periodic() || pl.left_value() != 0.0 || pl.right_value() != 0.0) {
        throw InvalidArgument("compactly supported data (zero tails) required");
    }
}

}  // namespace

double heat_eval(const PiecewiseLinear& pl, double t, double x) {
    if (!(t >= 0.0)) throw InvalidArgument("heat_eval needs t >= 0");
    if (t == 0.0) return pl(x);
    return eval_set(expand(pl, horizon_for(pl, t, x)), t, x);
}

std::vector<double> heat_eval(const PiecewiseLinear& pl, double t, std::span<const double> xs) {
    if (!(t >= 0.0)) throw InvalidArgument("heat_eval needs t >= 0");
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    if (t == 0.0) {
        std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) { return pl(x); });
        return out;
    }
    const double x_max = *std::max_element(xs.begin(), xs.end());
    const auto set = expand(pl, horizon_for(pl, t, x_max));
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_set(set, t, xs[i]);
    return out;
}

void HeatProbe::validate() const {
    if (!(t > 0.0)) throw InvalidArgument("heat probe needs t > 0");
    if (!(x0 < x1)) throw InvalidArgument("heat probe window needs x0 < x1");
}

std::pair<double, double> alpha_min_max(const PiecewiseLinear& pl, const HeatProbe& probe) {
    probe.validate();
    const auto n = static_cast<std::size_t>(std::ceil((probe.x1 - probe.x0) / 0.1)) + 1;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = probe.x0 + (probe.x1 - probe.x0) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    const auto v = heat_eval(pl, probe.t, xs);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*lo, *hi};
}

double mass_conservation(const PiecewiseLinear& pl_compact, double t) {
    require_compact(pl_compact);
    if (!(t >= 0.0)) throw InvalidArgument("mass_conservation needs t >= 0");
    const auto& bp = pl_compact.breakpoints();
    if (t == 0.0) return pl_compact.integral(bp.front(), bp.back());
    const double pad = 12.0 * std::sqrt(t);
    const double a = bp.front() - pad;
    const double b = bp.back() + pad;
    const double panel = 0.5 * std::sqrt(t);
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / panel));
    const auto set = expand(pl_compact, b);
    const auto v = [&](double x) { return eval_set(set, t, x); };
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
        const double hi = a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(panels);
        total += boost::math::quadrature::gauss<double, 10>::integrate(v, lo, hi);
    }
    return total;
}

std::vector<double> sup_decay(const PiecewiseLinear& pl_compact, std::span<const double> times) {
    require_compact(pl_compact);
    const auto& bp = pl_compact.breakpoints();
    std::vector<double> sups;
    sups.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw InvalidArgument("sup_decay needs t >= 0");
        if (t == 0.0) {
            double m = 0.0;
            for (double value : pl_compact.values()) m = std::max(m, std::abs(value));
            sups.push_back(m);
            continue;
        }
        const double pad = 6.0 * std::sqrt(t);
        const double a = bp.front() - pad;
        const double b = bp.back() + pad;
        const auto set = expand(pl_compact, b);
        const auto absv = [&](double x) { return std::abs(eval_set(set, t, x)); };
        constexpr std::size_t samples = 2001;
        const double dx = (b - a) / static_cast<double>(samples - 1);
        std::size_t best = 0;
        double best_value = -1.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const double value = absv(a + dx * static_cast<double>(i));
            if (value > best_value) {
                best_value = value;
                best = i;
            }
        }
        const double lo = a + dx * (static_cast<double>(best) - 1.0);
        const double hi = a + dx * (static_cast<double>(best) + 1.0);
        const auto [x_star, neg] = boost::math::tools::brent_find_minima(
            [&](double x) { return -absv(x); }, lo, hi, 52);
        sups.push_back(std::max(best_value, -neg));
        (void)x_star;
    }
    return sups;
}

}  // namespace spreadlab
