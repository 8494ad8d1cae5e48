#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spreadlab/reaction.hpp"

namespace spreadlab {

/// Result of one shot in the phase plane p(phi) = -phi'(x).
struct ShootOutcome {
    enum class Tag { Undershoot, Overshoot };
    Tag tag;
    /// Where p vanished before reaching the upper state (undershoot only).
    std::optional<double> terminal_phi;
    /// Value of p at the upper state (overshoot only).
    std::optional<double> terminal_p;

    bool undershoot() const noexcept { return tag == Tag::Undershoot; }
};

/// Integrates the phase-plane form of phi'' + c phi' + f(phi) = 0 from
/// phi = theta, where p(theta) = c (theta - gamma) exactly, to the effective
/// upper state. `resolution` is the number of phi-steps on [theta, U] used as
/// the maximum step of the embedded 4(5) stepper.
ShootOutcome integrate_phase(double c, double gamma, const IgnitionNonlinearity& nl,
                             int resolution = 2000);

/// Unique front speed c_gamma by bracketing plus bisection on the shoot
/// classifier; stops once the relative bracket width is <= rel_tol.
double solve_speed(double gamma, const IgnitionNonlinearity& nl, double rel_tol = 1e-10,
                   int resolution = 2000);

/// Sampled front profile on [-window, window] with phi(0) = theta.
struct FrontSolution {
    double gamma = 0.0;
    double upper_state = 1.0;
    double theta = 0.5;
    double speed = 0.0;
    double tail_rate = 0.0;
    std::vector<double> x;
    std::vector<double> phi;

    /// Linear interpolation inside the window; analytic tail on the right,
    /// exponential approach to the upper state on the left.
    double eval(double position) const;
};

/// Left part by inverting x(phi) = -int_theta^phi dphi'/p(phi') (cubic
/// Hermite in x, using dphi/dx = -p), right part from the exact tail
/// gamma + (theta - gamma) e^{-c x}. The node spacing is window / round(window / h).
///
/// Throws NumericalError if the classifier does not flip within a relative
/// band `consistency_band` around `speed`.
FrontSolution profile(double speed, double gamma, const IgnitionNonlinearity& nl,
                      double window, double h, double consistency_band = 1e-4,
                      int resolution = 2000);

/// (gamma, c_gamma) for an increasing gamma grid, evaluated concurrently and
/// returned in input order. Throws NumericalError if the speeds are not
/// strictly increasing.
std::vector<std::pair<double, double>> speed_curve(const std::vector<double>& gammas,
                                                   const IgnitionNonlinearity& nl,
                                                   double rel_tol = 1e-10);

}  // namespace spreadlab
