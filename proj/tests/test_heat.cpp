#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "spreadlab/error.hpp"
#include "spreadlab/heat.hpp"
#include "spreadlab/profiles.hpp"

using namespace spreadlab;

namespace {

// Direct kernel quadrature: integral of G(t, x - y) u0(y) dy over x +- 16 sqrt(2t),
// split at the breakpoints of u0 (and their periodic images) so every
// subinterval has a smooth integrand.
double kernel_quadrature(const PiecewiseLinear& u0, double t, double x) {
    using boost::math::quadrature::gauss_kronrod;
    const double half = 16.0 * std::sqrt(2.0 * t);
    const double a = x - half, b = x + half;
    std::vector<double> cuts{a, b};
    for (const auto& piece : u0.pieces(a, b)) {
        cuts.push_back(piece.x0);
        cuts.push_back(piece.x1);
    }
    std::sort(cuts.begin(), cuts.end());
    const auto kernel = [&](double y) {
        const double d = x - y;
        return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t) * u0(y);
    };
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double lo = std::max(cuts[i - 1], a), hi = std::min(cuts[i], b);
        if (hi > lo) total += gauss_kronrod<double, 61>::integrate(kernel, lo, hi, 15, 1e-14);
    }
    return total;
}

// Mass of a compactly supported profile by the trapezoid rule on its own
// breakpoints, which is exact for piecewise-linear data.
double trapezoid_mass(const PiecewiseLinear& pl) {
    const auto& b = pl.breakpoints();
    const auto& v = pl.values();
    double m = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) m += 0.5 * (v[i] + v[i - 1]) * (b[i] - b[i - 1]);
    return m;
}

PiecewiseLinear oscillatory_1_5_25_125(double alpha = 0.0, double beta = 0.25) {
    return build_oscillatory({{1.0, 5.0, 25.0, 125.0}, alpha, beta}, 0.5);
}

}  // namespace

TEST(HeatEval, ConstantDataStaysConstant) {
    const auto c = PiecewiseLinear::constant(0.37);
    for (double t : {0.01, 1.0, 100.0}) {
        for (double x : {-50.0, 0.0, 3.3}) EXPECT_NEAR(heat_eval(c, t, x), 0.37, 1e-15);
    }
}

TEST(HeatEval, SymmetricStepHasHalfAtCentre) {
    const PiecewiseLinear ramp({-1.0, 1.0}, {1.0, 0.0});
    for (double t : {0.1, 1.0, 10.0, 1000.0}) EXPECT_NEAR(heat_eval(ramp, t, 0.0), 0.5, 1e-14);
    EXPECT_NEAR(heat_eval(ramp, 1.0, 0.7) + heat_eval(ramp, 1.0, -0.7), 1.0, 1e-14);
}

TEST(HeatEval, MatchesKernelQuadratureOnOscillatoryData) {
    const auto u0 = oscillatory_1_5_25_125();
    EXPECT_NEAR(heat_eval(u0, 4.0, 15.0), kernel_quadrature(u0, 4.0, 15.0), 1e-9);
    for (double x : {-3.0, 1.0, 5.5, 24.0, 60.0, 130.0}) {
        for (double t : {0.5, 4.0, 30.0}) {
            EXPECT_NEAR(heat_eval(u0, t, x), kernel_quadrature(u0, t, x), 1e-9)
                << "t=" << t << " x=" << x;
        }
    }
}

TEST(HeatEval, MatchesKernelQuadratureOnPeriodicData) {
    const PiecewiseLinear w0({0.0, 2.0, 4.0}, {0.1, 0.3, 0.1}, 4.0);
    const auto u0 = build_asym_periodic(w0, 10.0, 0.5);
    for (double x : {5.0, 11.0, 40.0, 401.0}) {
        EXPECT_NEAR(heat_eval(u0, 3.0, x), kernel_quadrature(u0, 3.0, x), 1e-9) << x;
    }
    const std::vector<double> xs{5.0, 11.0, 40.0};
    const auto batch = heat_eval(u0, 3.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(batch[i], heat_eval(u0, 3.0, xs[i]));
}

TEST(HeatEval, TimeZeroAndNegativeTime) {
    const auto u0 = oscillatory_1_5_25_125();
    for (double x : {-1.0, 0.5, 3.0, 20.0}) EXPECT_EQ(heat_eval(u0, 0.0, x), u0(x));
    EXPECT_THROW(heat_eval(u0, -1.0, 0.0), InvalidArgument);
}

TEST(HeatEval, MaximumPrincipleRandomized) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> v_d(0.0, 1.0), gap_d(0.1, 3.0), x_d(-20.0, 40.0),
        t_d(0.01, 50.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> b{0.0}, v{v_d(rng)};
        for (int k = 0; k < 8; ++k) {
            b.push_back(b.back() + gap_d(rng));
            v.push_back(v_d(rng));
        }
        const PiecewiseLinear pl(b, v);
        for (int k = 0; k < 10; ++k) {
            const double u = heat_eval(pl, t_d(rng), x_d(rng));
            EXPECT_GE(u, pl.min_value() - 1e-14);
            EXPECT_LE(u, pl.max_value() + 1e-14);
        }
    }
}

TEST(HeatEval, SemigroupAgainstQuadratureOfEarlierSolution) {
    // v(t1 + t2, x) = int G(t2, x - y) v(t1, y) dy.
    using boost::math::quadrature::gauss_kronrod;
    const PiecewiseLinear bump({-1.0, 0.0, 2.0}, {0.0, 1.0, 0.0});
    const double t1 = 0.5, t2 = 1.5, x = 0.8;
    const auto integrand = [&](double y) {
        const double d = x - y;
        return std::exp(-d * d / (4.0 * t2)) / std::sqrt(4.0 * std::numbers::pi * t2) *
               heat_eval(bump, t1, y);
    };
    const double composed = gauss_kronrod<double, 61>::integrate(integrand, -30.0, 30.0, 15, 1e-13);
    EXPECT_NEAR(heat_eval(bump, t1 + t2, x), composed, 1e-10);
}

TEST(AlphaMinMax, OscillatoryWindow) {
    const auto u0 = oscillatory_1_5_25_125();
    const auto [lo, hi] = alpha_min_max(u0, {1.0, 6.0, 120.0});
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(lo, 1e-6);
    EXPECT_LE(hi, 0.25);
    EXPECT_GT(hi, 0.25 - 1e-6);
    EXPECT_THROW(alpha_min_max(u0, {1.0, 5.0, 5.0}), InvalidArgument);
    EXPECT_THROW(alpha_min_max(u0, {-1.0, 0.0, 5.0}), InvalidArgument);
}

TEST(AlphaMinMax, PeriodicRangeShrinksWithTime) {
    const PiecewiseLinear w0({0.0, 2.0, 4.0}, {0.1, 0.3, 0.1}, 4.0);
    const auto u0 = build_asym_periodic(w0, 10.0, 0.5);
    double prev_lo = 0.0, prev_hi = 1.0;
    for (double t : {0.1, 1.0, 5.0, 20.0}) {
        const auto [lo, hi] = alpha_min_max(u0, {t, 200.0, 400.0});
        EXPECT_GE(lo, prev_lo - 1e-14);
        EXPECT_LE(hi, prev_hi + 1e-14);
        prev_lo = lo;
        prev_hi = hi;
    }
    EXPECT_NEAR(prev_lo, 0.2, 1e-3);
    EXPECT_NEAR(prev_hi, 0.2, 1e-3);
}

TEST(Mass, ConservedForCompactData) {
    const PiecewiseLinear tri({0.0, 1.0, 3.0, 4.0}, {0.0, 0.8, 0.2, 0.0});
    const double m0 = trapezoid_mass(tri);
    for (double t : {0.0, 0.1, 1.0, 10.0, 100.0}) {
        EXPECT_NEAR(mass_conservation(tri, t), m0, 1e-8) << t;
    }
    const PiecewiseLinear unit({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    EXPECT_NEAR(mass_conservation(unit, 7.0), 1.0, 1e-8);
    EXPECT_EQ(mass_conservation(PiecewiseLinear({0.0, 1.0}, {0.0, 0.0}), 5.0), 0.0);
    EXPECT_THROW(mass_conservation(oscillatory_1_5_25_125(), 1.0), InvalidArgument);
}

TEST(SupDecay, ApproachesPointMassPrediction) {
    const PiecewiseLinear unit({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    const std::vector<double> times{1.0, 2.0, 100.0, 400.0};
    const auto sups = sup_decay(unit, times);
    ASSERT_EQ(sups.size(), times.size());
    EXPECT_GE(sups[0], sups[1]);
    EXPECT_GE(sups[1], sups[2]);
    const auto point_mass = [](double t) { return 1.0 / std::sqrt(4.0 * std::numbers::pi * t); };
    EXPECT_NEAR(sups[2] / point_mass(100.0), 1.0, 0.10);
    EXPECT_NEAR(sups[3] / point_mass(400.0), 1.0, 0.05);
    EXPECT_NEAR(sups[2] / sups[3], 2.0, 0.02);
    // The symmetric bump peaks at its centre, where the closed form is known.
    EXPECT_NEAR(sups[1], heat_eval(unit, 2.0, 0.0), 1e-12);
}
