#include "spreadlab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spreadlab/error.hpp"
#include "spreadlab/textio.hpp"

namespace spreadlab {

std::string_view to_string(ReactionKind kind) {
    switch (kind) {
        case ReactionKind::SmoothHump: return "smooth-hump";
        case ReactionKind::PiecewiseLinearTest: return "piecewise-linear-test";
    }
    return "unknown";
}

ReactionKind reaction_kind_from_string(std::string_view name) {
    if (name == "smooth-hump") return ReactionKind::SmoothHump;
    if (name == "piecewise-linear-test") return ReactionKind::PiecewiseLinearTest;
    throw InvalidArgument("unknown nonlinearity kind '" + std::string(name) + "'");
}

IgnitionNonlinearity::IgnitionNonlinearity(ReactionKind kind, double theta, double amplitude,
                                           double upper_state, double eta_under,
                                           double eta_over)
    : kind_(kind),
      theta_(theta),
      amplitude_(amplitude),
      upper_state_(upper_state),
      eta_under_(eta_under),
      eta_over_(eta_over) {
    if (!std::isfinite(theta) || !std::isfinite(upper_state) || !(theta > 0.0) ||
        !(theta < upper_state)) {
        throw InvalidArgument("theta must lie in (0, upper_state)");
    }
    if (!std::isfinite(amplitude) || !(amplitude > 0.0)) {
        throw InvalidArgument("amplitude must be positive");
    }
    if (!(eta_under >= 0.0) || !(eta_under < upper_state - theta)) {
        throw InvalidArgument("eta_under must lie in [0, upper_state - theta)");
    }
    if (!(eta_over >= 0.0) || !std::isfinite(eta_over)) {
        throw InvalidArgument("eta_over must be nonnegative");
    }
    if (eta_under > 0.0 && eta_over > 0.0) {
        throw InvalidArgument("at most one of eta_under, eta_over may be positive");
    }
}

IgnitionNonlinearity IgnitionNonlinearity::smooth_hump(double theta, double amplitude,
                                                       double upper_state) {
    return {ReactionKind::SmoothHump, theta, amplitude, upper_state};
}

IgnitionNonlinearity IgnitionNonlinearity::piecewise_linear_test(double theta) {
    return {ReactionKind::PiecewiseLinearTest, theta, 1.0, 1.0};
}

double IgnitionNonlinearity::eval(double u) const noexcept {
    const double top = effective_upper();
    if (!(u > theta_) || !(u < top)) return 0.0;
    if (kind_ == ReactionKind::PiecewiseLinearTest) return top - u;
    const double d = u - theta_;
    return amplitude_ * d * d * (top - u);
}

double IgnitionNonlinearity::derivative(double u) const noexcept {
    const double top = effective_upper();
    if (!(u > theta_) || !(u < top)) return 0.0;
    if (kind_ == ReactionKind::PiecewiseLinearTest) return -1.0;
    const double d = u - theta_;
    return amplitude_ * (2.0 * d * (top - u) - d * d);
}

IgnitionNonlinearity under_family(const IgnitionNonlinearity& nl, double eta) {
    if (!(eta >= 0.0) || !(eta < nl.upper_state() - nl.theta())) {
        throw InvalidArgument("under-family eta must lie in [0, upper_state - theta)");
    }
    return {nl.kind(), nl.theta(), nl.amplitude(), nl.upper_state(), eta, 0.0};
}

IgnitionNonlinearity over_family(const IgnitionNonlinearity& nl, double eta) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw InvalidArgument("over-family eta must be nonnegative");
    }
    return {nl.kind(), nl.theta(), nl.amplitude(), nl.upper_state(), 0.0, eta};
}

double lipschitz_bound(const IgnitionNonlinearity& nl) {
    constexpr int samples = 100000;
    const double lo = nl.theta();
    const double hi = nl.effective_upper();
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
        // Closed grid on [theta, U]; the derivative formula is evaluated
        // directly so that the endpoints (where eval() clips) are included.
        const double u = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        double slope = 0.0;
        if (nl.kind() == ReactionKind::PiecewiseLinearTest) {
            slope = 1.0;
        } else {
            const double d = u - lo;
            slope = std::abs(nl.amplitude() * (2.0 * d * (hi - u) - d * d));
        }
        sup = std::max(sup, slope);
    }
    return 1.1 * sup;
}

std::string serialize(const IgnitionNonlinearity& nl) {
    std::ostringstream out;
    out << "kind = " << to_string(nl.kind()) << '\n'
        << "theta = " << format_double(nl.theta()) << '\n'
        << "amplitude = " << format_double(nl.amplitude()) << '\n'
        << "upper_state = " << format_double(nl.upper_state()) << '\n'
        << "eta_under = " << format_double(nl.eta_under()) << '\n'
        << "eta_over = " << format_double(nl.eta_over()) << '\n';
    return out.str();
}

}  // namespace spreadlab
