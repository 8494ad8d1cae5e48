#include "spreadlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spreadlab/error.hpp"

namespace spreadlab {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::CrankNicolsonExplicitReaction: return "crank-nicolson-explicit-reaction";
        case Scheme::BackwardEulerExplicitReaction: return "backward-euler-explicit-reaction";
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "crank-nicolson-explicit-reaction" || name == "crank-nicolson") {
        return Scheme::CrankNicolsonExplicitReaction;
    }
    if (name == "backward-euler-explicit-reaction" || name == "backward-euler") {
        return Scheme::BackwardEulerExplicitReaction;
    }
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

BoundaryValues boundary_policy(const Field& initial) { return {1.0, initial.values.back()}; }

Stepper::Stepper(const Grid& grid, double dt, std::optional<IgnitionNonlinearity> nl,
                 Scheme scheme, BoundaryValues boundary, bool allow_discontinuous)
    : grid_(grid), dt_(dt), nl_(std::move(nl)), scheme_(scheme), boundary_(boundary) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
    if (nl_) {
        if (!nl_->is_continuous() && !allow_discontinuous) {
            throw InvalidArgument("discontinuous nonlinearity refused by the stepper");
        }
        const double bound = lipschitz_bound(*nl_);
        if (dt * bound > 0.5) {
            throw InvalidArgument("dt * sup|f'| = " + std::to_string(dt * bound) +
                                  " exceeds the explicit reaction bound 0.5 (dt <= " +
                                  std::to_string(0.5 / bound) + ")");
        }
    }
    const double r = dt / (grid.h() * grid.h());
    const double implicit_weight = scheme == Scheme::CrankNicolsonExplicitReaction ? 0.5 : 1.0;
    explicit_weight_ = (1.0 - implicit_weight) * r;
    const double a = implicit_weight * r;

    // Thomas factorisation of rows: [1], [-a, 1 + 2a, -a] ..., [1].
    const std::size_t n = grid.size();
    inv_pivot_.assign(n, 1.0);
    upper_.assign(n, 0.0);
    rhs_.assign(n, 0.0);
    upper_[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double pivot = (1.0 + 2.0 * a) - (-a) * upper_[i - 1];
        inv_pivot_[i] = 1.0 / pivot;
        upper_[i] = -a * inv_pivot_[i];
    }
    inv_pivot_[n - 1] = 1.0;
    upper_[n - 1] = 0.0;
    lower_ = a;
}

void Stepper::advance(Field& field) {
    auto& u = field.values;
    const std::size_t n = u.size();
    if (n != grid_.size()) throw InvalidArgument("field does not match the stepper grid");
    rhs_[0] = boundary_.left;
    rhs_[n - 1] = boundary_.right;
    bool finite = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double value = u[i];
        if (explicit_weight_ != 0.0) value += explicit_weight_ * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        if (nl_) value += dt_ * nl_->eval(u[i]);
        finite = finite && std::isfinite(value);
        rhs_[i] = value;
    }
    if (!finite) {
        throw NumericalError("non-finite value in the solution at t = " + std::to_string(field.time));
    }
    // Forward sweep (row 0 is the identity so d'_0 = rhs_0).
    for (std::size_t i = 1; i + 1 < n; ++i) {
        rhs_[i] = (rhs_[i] + lower_ * rhs_[i - 1]) * inv_pivot_[i];
    }
    u[n - 1] = rhs_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) u[i] = rhs_[i] - upper_[i] * u[i + 1];
    field.time += dt_;
}

Field step(const Field& field, double dt, const IgnitionNonlinearity& nl, Scheme scheme) {
    Field next = field;
    Stepper stepper(field.grid, dt, nl, scheme, {field.values.front(), field.values.back()});
    stepper.advance(next);
    return next;
}

Field step(const Field& field, double dt, Scheme scheme) {
    Field next = field;
    Stepper stepper(field.grid, dt, std::nullopt, scheme,
                    {field.values.front(), field.values.back()});
    stepper.advance(next);
    return next;
}

std::optional<double> find_xi(const Field& field, double theta) {
    const auto& u = field.values;
    const std::size_t n = u.size();
    if (n < 2 || u[n - 1] >= theta) return std::nullopt;
    for (std::size_t i = n - 1; i-- > 0;) {
        if (u[i] >= theta) {
            // u[i] >= theta > u[i + 1]
            const double w = (u[i] - theta) / (u[i] - u[i + 1]);
            return field.grid.x(i) + w * field.grid.h();
        }
    }
    return std::nullopt;
}

int sign_changes(const Field& field, double theta) {
    int count = 0;
    int last_sign = 0;
    for (double value : field.values) {
        const double d = value - theta;
        if (std::abs(d) <= 1e-12) continue;
        const int sign = d > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++count;
        last_sign = sign;
    }
    return count;
}

void check_margins(const PiecewiseLinear& u0, const Grid& grid, double T,
                   const RunOptions& options) {
    if (!(options.c_max > 0.0)) throw InvalidArgument("run options need c_max > 0");
    const double start = u0.breakpoints().front();
    const double left_needed = options.c_max * T + 20.0;
    if (start - grid.x_left() < left_needed) {
        throw InvalidArgument("left causal margin " + std::to_string(start - grid.x_left()) +
                              " is below c_max T + 20 = " + std::to_string(left_needed));
    }
    const double probe = options.probe_right.value_or(start + options.c_max * T + 50.0);
    const double right_needed = probe + 12.0 * std::sqrt(T);
    if (grid.x_right() < right_needed) {
        throw InvalidArgument("right end " + std::to_string(grid.x_right()) +
                              " is below probe_right + 12 sqrt(T) = " +
                              std::to_string(right_needed));
    }
}

Trajectory run(const PiecewiseLinear& u0, const Grid& grid, double dt, double T,
               const IgnitionNonlinearity& nl, const RunOptions& options) {
    if (!(T > 0.0)) throw InvalidArgument("final time must be positive");
    if (!(options.trace_dt >= dt)) throw InvalidArgument("trace_dt must be at least dt");
    check_margins(u0, grid, T, options);

    Field field = sample_to_grid(u0, grid);
    Stepper stepper(grid, dt, nl, options.scheme, boundary_policy(field),
                    options.allow_discontinuous);
    // The stepper holds the left end at 1 regardless of the sampled value.
    field.values.front() = 1.0;

    const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
    const auto trace_every = std::max(1L, std::lround(options.trace_dt / dt));

    std::vector<long> snapshot_steps;
    for (double ts : options.snapshot_times) {
        if (ts < 0.0 || ts > T + 1e-9) throw InvalidArgument("snapshot time outside [0, T]");
        snapshot_steps.push_back(std::lround(ts / dt));
    }
    std::sort(snapshot_steps.begin(), snapshot_steps.end());
    snapshot_steps.erase(std::unique(snapshot_steps.begin(), snapshot_steps.end()),
                         snapshot_steps.end());

    Trajectory traj;
    traj.trace_dt = static_cast<double>(trace_every) * dt;
    traj.theta = nl.theta();
    traj.probe_right =
        options.probe_right.value_or(u0.breakpoints().front() + options.c_max * T + 50.0);
    for (const auto& ray : options.rays) traj.rays.push_back({ray, {}, {}, std::nullopt});
    std::vector<double> targets = options.xi_targets;
    std::sort(targets.begin(), targets.end());
    std::size_t next_target = 0;

    const auto record_trace = [&](const Field& f) {
        const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
        const auto xi = find_xi(f, nl.theta());
        traj.trace.push_back({f.time, xi, sign_changes(f, nl.theta()), *lo, *hi});
        for (auto& series : traj.rays) {
            if (series.exit_time) continue;
            const double pos = series.ray.c * f.time + series.ray.x;
            if (pos < grid.x_left() || pos > grid.x_right()) {
                series.exit_time = f.time;
                continue;
            }
            series.t.push_back(f.time);
            series.u.push_back(f.interpolate(pos));
        }
        while (xi && next_target < targets.size() && *xi >= targets[next_target]) {
            traj.captures.push_back({targets[next_target], f});
            ++next_target;
        }
    };

    std::size_t next_snapshot = 0;
    const auto maybe_snapshot = [&](long k) {
        while (next_snapshot < snapshot_steps.size() && snapshot_steps[next_snapshot] == k) {
            traj.snapshots.push_back(field);
            ++next_snapshot;
        }
    };

    maybe_snapshot(0);
    record_trace(field);
    for (long k = 1; k <= steps; ++k) {
        stepper.advance(field);
        // Exact time stamps; accumulated dt drifts by rounding otherwise.
        field.time = static_cast<double>(k) * dt;
        maybe_snapshot(k);
        if (k % trace_every == 0 || k == steps) record_trace(field);
    }
    traj.final_time = field.time;
    return traj;
}

}  // namespace spreadlab
