#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "spreadlab/grid.hpp"
#include "spreadlab/profiles.hpp"
#include "spreadlab/reaction.hpp"

namespace spreadlab {

/// Time discretisations of u_t = u_xx + f(u). Both treat diffusion
/// implicitly (one constant-coefficient tridiagonal solve per step) and the
/// reaction explicitly at the pre-step state.
enum class Scheme {
    CrankNicolsonExplicitReaction,  ///< second order in diffusion; not order preserving
    BackwardEulerExplicitReaction   ///< first order; monotone for dt sup|f'| <= 1
};

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

/// Dirichlet values held at the two end nodes.
struct BoundaryValues {
    double left;
    double right;
};

/// Left end held at the invaded state 1, right end at the initial value
/// there.
BoundaryValues boundary_policy(const Field& initial);

/// Reusable stepper: the tridiagonal factorisation depends only on
/// (grid, dt, scheme) and is computed once.
class Stepper {
public:
    /// Pure diffusion when `nl` is empty. Throws InvalidArgument if dt <= 0,
    /// if dt * lipschitz_bound(nl) > 0.5, or if nl is discontinuous and
    /// `allow_discontinuous` is false.
    Stepper(const Grid& grid, double dt, std::optional<IgnitionNonlinearity> nl, Scheme scheme,
            BoundaryValues boundary, bool allow_discontinuous = false);

    /// Advances `field` by dt in place. Throws NumericalError on NaN/inf.
    void advance(Field& field);

    double dt() const noexcept { return dt_; }

private:
    Grid grid_;
    double dt_;
    std::optional<IgnitionNonlinearity> nl_;
    Scheme scheme_;
    BoundaryValues boundary_;
    double explicit_weight_;
    double lower_ = 0.0;
    std::vector<double> inv_pivot_;
    std::vector<double> upper_;
    std::vector<double> rhs_;
};

/// Single step with Dirichlet values taken from the field's end nodes.
Field step(const Field& field, double dt, const IgnitionNonlinearity& nl,
           Scheme scheme = Scheme::CrankNicolsonExplicitReaction);
/// Pure-diffusion variant.
Field step(const Field& field, double dt, Scheme scheme = Scheme::CrankNicolsonExplicitReaction);

/// Rightmost downward crossing of `theta`, linearly interpolated; empty when
/// the field has no node >= theta or its last node is >= theta.
std::optional<double> find_xi(const Field& field, double theta);

/// Sign alternations of (u - theta) across nodes, ignoring nodes within 1e-12
/// of theta.
int sign_changes(const Field& field, double theta);

struct Ray {
    double c;
    double x;
};

struct TraceSample {
    double t;
    std::optional<double> xi;
    int crossings;
    double min_value;
    double max_value;
};

struct RaySeries {
    Ray ray;
    std::vector<double> t;
    std::vector<double> u;
    /// First time the ray left the grid, if it did.
    std::optional<double> exit_time;
};

/// Field recorded at the first trace sample where xi(t) >= target.
struct XiCapture {
    double target;
    Field field;
};

struct RunOptions {
    Scheme scheme = Scheme::BackwardEulerExplicitReaction;
    double trace_dt = 0.5;
    std::vector<double> snapshot_times;
    /// Bound on the front speed used for the left causal margin.
    double c_max = 0.0;
    /// Rightmost position the caller will inspect; default: first breakpoint
    /// of u0 + c_max T + 50.
    std::optional<double> probe_right;
    std::vector<Ray> rays;
    std::vector<double> xi_targets;
    bool allow_discontinuous = false;
};

struct Trajectory {
    std::vector<Field> snapshots;
    double trace_dt = 0.0;
    std::vector<TraceSample> trace;
    std::vector<RaySeries> rays;
    std::vector<XiCapture> captures;
    double theta = 0.0;
    double final_time = 0.0;
    double probe_right = 0.0;
};

/// Checks the causal margins: left margin (first breakpoint - x_left) at
/// least c_max T + 20, right end at least probe_right + 12 sqrt(T). Throws
/// InvalidArgument naming the violated margin.
void check_margins(const PiecewiseLinear& u0, const Grid& grid, double T,
                   const RunOptions& options);

/// Samples u0, steps to T, and records snapshots, the theta-level trace every
/// trace_dt, ray series, and xi-triggered captures.
Trajectory run(const PiecewiseLinear& u0, const Grid& grid, double dt, double T,
               const IgnitionNonlinearity& nl, const RunOptions& options);

}  // namespace spreadlab
