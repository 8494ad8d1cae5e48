#pragma once

#include <string>
#include <vector>

#include "spreadlab/evolve.hpp"
#include "spreadlab/profiles.hpp"

namespace spreadlab {

/// Sampled interface path t -> xi(t) of the theta level set.
struct LevelSetTrace {
    std::vector<double> t;
    std::vector<double> xi;
    double theta = 0.5;

    std::size_t size() const noexcept { return t.size(); }
    /// Throws InvalidArgument unless times strictly increase and xi is finite.
    void validate() const;
};

/// Trace samples of a run where a crossing existed.
LevelSetTrace level_set_trace(const Trajectory& trajectory);

/// Rightmost downward crossing of theta, linearly interpolated between the
/// bracketing nodes. Throws InvalidArgument when there is none.
double locate_xi(const Field& field, double theta);

/// First time xi reaches x, interpolated inside the first crossing interval.
/// Returns the first sample time when xi already starts at or beyond x.
/// Throws InvalidArgument if x is never reached.
double tau_from_trace(const LevelSetTrace& trace, double x);

struct SpeedEstimate {
    double c_lower_hat = 0.0;
    double c_upper_hat = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
    std::string method = "window-min-max";
};

/// min / max of xi(t)/t over the late window [T (1 - window_fraction), T].
SpeedEstimate estimate_spreading_speeds(const LevelSetTrace& trace, double window_fraction);

struct RayProbeResult {
    double c = 0.0;
    double x = 0.0;
    std::vector<double> t;
    std::vector<double> u;
    double late_min = 0.0;
    double late_max = 0.0;
};

/// Late-window range of u(t, c t + x) from the series recorded during the
/// run. Throws InvalidArgument if the ray was not registered or left the grid
/// before the end of the run.
RayProbeResult ray_probe(const Trajectory& trajectory, double c, double x, double window_fraction);

/// Smallest M >= 0 with c_low t - M <= xi(t) <= c_high t + M on the trace.
double fit_containment(const LevelSetTrace& trace, double c_low, double c_high);

/// Largest jump |xi(t_{k+1}) - xi(t_k)| along the trace.
double max_trace_jump(const LevelSetTrace& trace);

/// One hitting-time ratio x/tau(x) against its limiting speed.
struct LemmaRatio {
    std::string family;  ///< x_even, z_even, x_odd, z_odd
    int n = 0;
    double position = 0.0;
    double tau = 0.0;
    double ratio = 0.0;
    double target = 0.0;
    double abs_dev = 0.0;
    double rel_dev = 0.0;
};

/// One plateau estimate u(tau(p), .) on an interval, evaluated on the
/// xi-triggered capture nearest after tau(p).
struct LemmaPlateau {
    std::string statement;
    int n = 0;
    double lo = 0.0;
    double hi = 0.0;
    double measured = 0.0;  ///< worst value over the interval
    double bound = 0.0;
    bool pass = false;
};

struct LemmaReport {
    std::vector<LemmaRatio> ratios;
    std::vector<LemmaPlateau> plateaus;
    /// Per family: relative deviation at the largest available index.
    bool final_within_eps = false;
    /// Per family: relative deviations nonincreasing over n >= 1.
    bool trending = false;
    /// Per statement: the plateau estimate at its largest checked n holds.
    bool plateaus_final = false;
    double eps = 0.0;
    double eta = 0.0;
};

/// Positions x_n and z_n reachable in the sequence; register them as
/// RunOptions::xi_targets so the plateau estimates have fields to inspect.
std::vector<double> lemma_targets(const PlateauSequence& seq);

/// Hitting-time ratios and plateau estimates for the oscillatory data.
/// `c_alpha`, `c_beta` are the front speeds for the two plateau levels.
LemmaReport lemma_speeds_check(const Trajectory& trajectory, const PlateauSequence& seq,
                               double c_alpha, double c_beta, double eps, double eta);

}  // namespace spreadlab
