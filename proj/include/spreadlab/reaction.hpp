#pragma once

#include <string>
#include <string_view>

namespace spreadlab {

enum class ReactionKind {
    SmoothHump,          ///< a (u - theta)^2 (U - u) on [theta, U]
    PiecewiseLinearTest  ///< (U - u) on (theta, U]; discontinuous at theta
};

std::string_view to_string(ReactionKind kind);
ReactionKind reaction_kind_from_string(std::string_view name);

/// Ignition-type reaction term f(u).
///
/// f vanishes identically on (-inf, theta] and on [U, +inf), where the
/// effective upper state U = upper_state - eta_under + eta_over, and is
/// strictly positive in between with f'(U-) < 0. The eta parameters index
/// the monotone under/over families used for speed bracketing; at most one
/// of them is nonzero.
class IgnitionNonlinearity {
public:
    /// Throws InvalidArgument unless 0 < theta < upper_state, amplitude > 0,
    /// 0 <= eta_under < upper_state - theta, eta_over >= 0 and not both
    /// eta parameters are positive.
    IgnitionNonlinearity(ReactionKind kind, double theta, double amplitude,
                         double upper_state = 1.0, double eta_under = 0.0,
                         double eta_over = 0.0);

    static IgnitionNonlinearity smooth_hump(double theta, double amplitude,
                                            double upper_state = 1.0);
    static IgnitionNonlinearity piecewise_linear_test(double theta);

    double operator()(double u) const noexcept { return eval(u); }
    double eval(double u) const noexcept;

    /// Analytic derivative on the open support (theta, U); zero outside.
    double derivative(double u) const noexcept;

    ReactionKind kind() const noexcept { return kind_; }
    double theta() const noexcept { return theta_; }
    double amplitude() const noexcept { return amplitude_; }
    double upper_state() const noexcept { return upper_state_; }
    double eta_under() const noexcept { return eta_under_; }
    double eta_over() const noexcept { return eta_over_; }
    double effective_upper() const noexcept { return upper_state_ - eta_under_ + eta_over_; }

    /// True when f is continuous on the whole line (the stepper requires it
    /// unless explicitly overridden).
    bool is_continuous() const noexcept { return kind_ == ReactionKind::SmoothHump; }

private:
    ReactionKind kind_;
    double theta_;
    double amplitude_;
    double upper_state_;
    double eta_under_;
    double eta_over_;
};

/// Member of the under-approximating family with upper root moved to
/// upper_state - eta. Pointwise nonincreasing in eta.
IgnitionNonlinearity under_family(const IgnitionNonlinearity& nl, double eta);

/// Member of the over-approximating family with upper root moved to
/// upper_state + eta. Pointwise nondecreasing in eta.
IgnitionNonlinearity over_family(const IgnitionNonlinearity& nl, double eta);

/// Upper bound on sup |f'| over the effective support: maximum of the
/// analytic derivative on 10^5 uniform samples, times 1.1.
double lipschitz_bound(const IgnitionNonlinearity& nl);

/// Decimal-text serialization used in run configs (`key = value` lines).
std::string serialize(const IgnitionNonlinearity& nl);

}  // namespace spreadlab
