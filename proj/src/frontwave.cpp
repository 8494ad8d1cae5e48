#include "spreadlab/frontwave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "spreadlab/error.hpp"

namespace spreadlab {

namespace {

// The phase-plane ODE dp/dphi = c - f(phi)/p is integrated in the energy
// variable q = p^2 / 2, for which dq/dphi = c p - f(phi). Same trajectories,
// but the right-hand side stays bounded as p -> 0, so an undershoot is a
// transversal zero crossing of q instead of a blow-up.
struct PhaseNode {
    double phi;
    double q;
    double x;
};

struct ShotOptions {
    int resolution = 2000;
    bool track_x = false;
    double x_stop = -std::numeric_limits<double>::infinity();
    double psi_stop = 0.0;   // stop once U - phi < psi_stop (profile mode)
    double max_dx = 0.05;    // cap on x-increment per step (profile mode)
};

struct ShotResult {
    ShootOutcome outcome;
    std::vector<PhaseNode> nodes;
};

// Fehlberg 4(5) tableau; the 4th-order solution is propagated.
constexpr std::array<double, 6> kC{0.0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 1.0 / 2};
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 4, 0, 0, 0, 0},
    {3.0 / 32, 9.0 / 32, 0, 0, 0},
    {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
    {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104, 0},
    {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
};
constexpr std::array<double, 6> kB4{25.0 / 216, 0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0};
constexpr std::array<double, 6> kB5{16.0 / 135,        0,          6656.0 / 12825,
                                    28561.0 / 56430, -9.0 / 50, 2.0 / 55};

ShotResult shoot(double c, double gamma, const IgnitionNonlinearity& nl,
                 const ShotOptions& opt) {
    const double theta = nl.theta();
    const double top = nl.effective_upper();
    const double span = top - theta;
    const double p0 = c * (theta - gamma);
    const double q0 = 0.5 * p0 * p0;
    const double p_guard = 1e-12 * p0;
    const double q_guard = 0.5 * p_guard * p_guard;
    const double theta_plus = std::nextafter(theta, std::numeric_limits<double>::infinity());

    struct Deriv {
        double dq, dx;
    };
    const auto rhs = [&](double phi, double q) -> Deriv {
        // One-sided value at theta, so a discontinuous f is seen from above.
        const double at = phi <= theta ? theta_plus : phi;
        const double p = std::sqrt(2.0 * std::max(q, 0.0));
        const double dx = opt.track_x ? -1.0 / std::max(p, p_guard) : 0.0;
        return {c * p - nl.eval(at), dx};
    };

    constexpr double rtol = 1e-11;
    const double atol_q = 1e-13 * q0;
    constexpr double atol_x = 1e-11;
    const double h_max = span / opt.resolution;
    const double h_min = 1e-15 * span;

    ShotResult result{{ShootOutcome::Tag::Overshoot, std::nullopt, std::nullopt}, {}};
    double phi = theta;
    double q = q0;
    double x = 0.0;
    if (opt.track_x) result.nodes.push_back({phi, q, x});
    double h = h_max;

    while (phi < top) {
        if (opt.track_x) {
            if (x < opt.x_stop || top - phi < opt.psi_stop) break;
            const double p = std::sqrt(2.0 * std::max(q, 0.0));
            h = std::min(h, std::max(opt.max_dx * p, h_min));
        }
        h = std::min({h, h_max, top - phi});
        std::array<Deriv, 6> k{};
        for (int s = 0; s < 6; ++s) {
            double qs = q;
            for (int j = 0; j < s; ++j) qs += h * kA[s][j] * k[j].dq;
            k[s] = rhs(phi + kC[s] * h, qs);
        }
        double q4 = q, q5 = q, x4 = x, x5 = x;
        for (int s = 0; s < 6; ++s) {
            q4 += h * kB4[s] * k[s].dq;
            q5 += h * kB5[s] * k[s].dq;
            x4 += h * kB4[s] * k[s].dx;
            x5 += h * kB5[s] * k[s].dx;
        }
        double err = std::abs(q5 - q4) / (atol_q + rtol * std::max(std::abs(q), std::abs(q4)));
        if (opt.track_x) {
            err = std::max(err, std::abs(x5 - x4) / (atol_x + rtol * std::abs(x4)));
        }
        if (!std::isfinite(err)) err = 1e10;
        if (err > 1.0 && h > h_min) {
            h = std::max(h * std::max(0.2, 0.9 * std::pow(err, -0.2)), h_min);
            continue;
        }
        const double phi_new = (h == top - phi) ? top : phi + h;
        if (q4 < q_guard && phi_new < top) {
            // p vanished inside (phi, phi_new]; locate the root linearly in q.
            const double root = q4 < 0.0 ? phi + h * q / (q - q4) : phi_new;
            result.outcome = {ShootOutcome::Tag::Undershoot, root, std::nullopt};
            if (opt.track_x) result.nodes.push_back({root, 0.0, x4});
            return result;
        }
        phi = phi_new;
        q = q4;
        x = x4;
        if (opt.track_x) result.nodes.push_back({phi, q, x});
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }
    if (phi < top) {
        // Profile mode stopped early; classification is not meaningful.
        result.outcome = {ShootOutcome::Tag::Overshoot, std::nullopt,
                          std::sqrt(2.0 * std::max(q, 0.0))};
        return result;
    }
    if (q < q_guard) {
        result.outcome = {ShootOutcome::Tag::Undershoot, top, std::nullopt};
    } else {
        result.outcome = {ShootOutcome::Tag::Overshoot, std::nullopt, std::sqrt(2.0 * q)};
    }
    return result;
}

void check_shoot_args(double c, double gamma, const IgnitionNonlinearity& nl) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("candidate speed must be positive");
    if (!(gamma < nl.theta())) throw InvalidArgument("lower state gamma must be below theta");
}

// Decay rate of U - phi as x -> -inf from the linearisation at U.
double upper_rate(double c, const IgnitionNonlinearity& nl) {
    const double top = nl.effective_upper();
    double k = 0.0;
    if (nl.kind() == ReactionKind::PiecewiseLinearTest) {
        k = 1.0;
    } else {
        const double d = top - nl.theta();
        k = nl.amplitude() * d * d;
    }
    return 0.5 * (-c + std::sqrt(c * c + 4.0 * k));
}

}  // namespace

ShootOutcome integrate_phase(double c, double gamma, const IgnitionNonlinearity& nl,
                             int resolution) {
    check_shoot_args(c, gamma, nl);
    if (resolution < 1) throw InvalidArgument("resolution must be positive");
    ShotOptions opt;
    opt.resolution = resolution;
    return shoot(c, gamma, nl, opt).outcome;
}

double solve_speed(double gamma, const IgnitionNonlinearity& nl, double rel_tol,
                   int resolution) {
    if (!(gamma < nl.theta())) throw InvalidArgument("lower state gamma must be below theta");
    if (!(rel_tol > 1e-12 && rel_tol < 1e-2)) {
        throw InvalidArgument("rel_tol must lie in (1e-12, 1e-2)");
    }
    const auto under = [&](double c) { return integrate_phase(c, gamma, nl, resolution).undershoot(); };

    const double c0 = 2.0 * std::sqrt(lipschitz_bound(nl));
    double lo = 0.0;
    double hi = 0.0;
    if (under(c0)) {
        lo = c0;
        hi = c0;
        for (int i = 0;; ++i) {
            if (i == 60) throw NumericalError("front speed bracketing failed after 60 doublings");
            hi *= 2.0;
            if (!under(hi)) break;
            lo = hi;
        }
    } else {
        hi = c0;
        lo = c0;
        for (int i = 0;; ++i) {
            if (i == 60) throw NumericalError("front speed bracketing failed after 60 halvings");
            lo *= 0.5;
            if (under(lo)) break;
            hi = lo;
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((hi - lo) <= rel_tol * mid) return mid;
        if (under(mid)) lo = mid;
        else hi = mid;
    }
    throw NumericalError("front speed bisection did not converge in 200 steps");
}

FrontSolution profile(double speed, double gamma, const IgnitionNonlinearity& nl, double window,
                      double h, double consistency_band, int resolution) {
    check_shoot_args(speed, gamma, nl);
    if (!(window > 0.0) || !(h > 0.0) || h > window) {
        throw InvalidArgument("profile needs 0 < h <= window");
    }
    const bool below = integrate_phase(speed * (1.0 - consistency_band), gamma, nl, resolution)
                           .undershoot();
    const bool above = integrate_phase(speed * (1.0 + consistency_band), gamma, nl, resolution)
                           .undershoot();
    if (!below || above) {
        throw NumericalError("speed " + std::to_string(speed) +
                             " is inconsistent with the nonlinearity (classifier does not flip)");
    }

    const double theta = nl.theta();
    const double top = nl.effective_upper();
    ShotOptions opt;
    opt.resolution = resolution;
    opt.track_x = true;
    opt.x_stop = -window - 1.0;
    opt.psi_stop = 1e-7 * (top - theta);
    opt.max_dx = std::min(0.05, 0.5 * h);
    const auto nodes = shoot(speed, gamma, nl, opt).nodes;

    FrontSolution sol;
    sol.gamma = gamma;
    sol.upper_state = top;
    sol.theta = theta;
    sol.speed = speed;
    sol.tail_rate = speed;
    const double mu = upper_rate(speed, nl);

    const auto n_half = static_cast<long>(std::llround(window / h));
    sol.x.reserve(2 * n_half + 1);
    sol.phi.reserve(2 * n_half + 1);
    std::size_t j = 0;  // moves toward more negative x as k decreases
    std::vector<double> left;
    for (long k = 0; k >= -n_half; --k) {
        const double xk = window * static_cast<double>(k) / static_cast<double>(n_half);
        if (k == 0) {
            left.push_back(theta);
            continue;
        }
        while (j + 1 < nodes.size() && nodes[j + 1].x > xk) ++j;
        double value = 0.0;
        if (j + 1 < nodes.size()) {
            const auto& a = nodes[j + 1];  // x_a <= xk < x_b
            const auto& b = nodes[j];
            const double s = b.x - a.x;
            const double t = (xk - a.x) / s;
            const double ma = -std::sqrt(2.0 * std::max(a.q, 0.0));
            const double mb = -std::sqrt(2.0 * std::max(b.q, 0.0));
            const double t2 = t * t;
            const double t3 = t2 * t;
            value = (2 * t3 - 3 * t2 + 1) * a.phi + (t3 - 2 * t2 + t) * s * ma +
                    (-2 * t3 + 3 * t2) * b.phi + (t3 - t2) * s * mb;
        } else {
            const auto& last = nodes.back();
            value = top - (top - last.phi) * std::exp(mu * (xk - last.x));
        }
        left.push_back(std::clamp(value, theta, top));
    }
    for (long k = -n_half; k <= n_half; ++k) {
        const double xk = window * static_cast<double>(k) / static_cast<double>(n_half);
        sol.x.push_back(xk);
        if (k <= 0) {
            sol.phi.push_back(left[static_cast<std::size_t>(-k)]);
        } else {
            sol.phi.push_back(gamma + (theta - gamma) * std::exp(-speed * xk));
        }
    }
    return sol;
}

double FrontSolution::eval(double position) const {
    if (x.empty()) throw InvalidArgument("empty front profile");
    if (position >= x.back()) return gamma + (theta - gamma) * std::exp(-tail_rate * position);
    if (position <= x.front()) {
        // Continue the leftmost slope as an exponential approach to the top.
        const double gap = upper_state - phi.front();
        const double slope = (phi[1] - phi[0]) / (x[1] - x[0]);
        const double rate = gap > 0.0 ? -slope / gap : 0.0;
        return upper_state - gap * std::exp(rate * (position - x.front()));
    }
    const double step = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    auto i = static_cast<std::size_t>((position - x.front()) / step);
    i = std::min(i, x.size() - 2);
    const double w = (position - x[i]) / (x[i + 1] - x[i]);
    return phi[i] + w * (phi[i + 1] - phi[i]);
}

std::vector<std::pair<double, double>> speed_curve(const std::vector<double>& gammas,
                                                   const IgnitionNonlinearity& nl,
                                                   double rel_tol) {
    for (std::size_t i = 1; i < gammas.size(); ++i) {
        if (!(gammas[i] > gammas[i - 1])) {
            throw InvalidArgument("speed_curve needs strictly increasing gamma values");
        }
    }
    std::vector<std::future<double>> jobs;
    jobs.reserve(gammas.size());
    for (double g : gammas) {
        jobs.push_back(std::async(std::launch::async, [g, &nl, rel_tol] {
            return solve_speed(g, nl, rel_tol);
        }));
    }
    std::vector<std::pair<double, double>> table;
    table.reserve(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) table.emplace_back(gammas[i], jobs[i].get());
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].second > table[i - 1].second)) {
            throw NumericalError("front speeds are not strictly increasing in gamma");
        }
    }
    return table;
}

}  // namespace spreadlab
