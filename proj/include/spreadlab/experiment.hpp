#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spreadlab/config.hpp"
#include "spreadlab/evolve.hpp"
#include "spreadlab/heat.hpp"
#include "spreadlab/speedlab.hpp"
#include "spreadlab/textio.hpp"

namespace spreadlab {

/// One manifest row.
struct CriterionResult {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Grid covering the causal margins of `check_margins` for u0 over [0, T],
/// padded by 5 on both sides, unless the numerics block fixes the ends.
Grid domain_for(const PiecewiseLinear& u0, const NumericsBlock& numerics,
                std::optional<double> probe_right);

/// Max node error of a pure-diffusion run from u0 to T against heat_eval.
/// Dirichlet ends take the initial end values.
double pure_heat_error(const PiecewiseLinear& u0, const Grid& grid, double dt, double T,
                       Scheme scheme);

struct EtaRow {
    double eta;
    double under;
    double over;
};

struct PdeFrontRow {
    double gamma;
    double c_ode;
    double xi_T;
    double xi_over_T;
    double c_lower_hat;
    double c_upper_hat;
    double profile_sup;
};

struct FrontValidationStudy {
    std::vector<std::pair<double, double>> speeds;
    double eta_gamma = 0.0;
    double c_eta0 = 0.0;
    std::vector<EtaRow> etas;
    std::vector<PdeFrontRow> pde;
    std::vector<LevelSetTrace> traces;
};

/// ODE speed curve, eta families, and PDE runs from front-like data.
FrontValidationStudy front_validation(const RunConfig& config);

struct HeatStudy {
    double bump_area = 0.0;
    std::vector<std::pair<double, double>> mass;
    double decay_t = 0.0;
    double sup_t = 0.0;
    double sup_2t = 0.0;
    double sup_point_mass = 0.0;
    std::vector<double> sups;
    HeatProbe probe{1.0, 0.0, 1.0};
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double error_coarse = 0.0;
    double error_fine = 0.0;
};

/// Conservation and decay on a unit-area triangle bump, the windowed
/// alpha_min / alpha_max of the oscillatory data, and the stepper order test
/// on ramp data (numerics h, dt, T and scheme; then h/2, dt/2).
HeatStudy heat_diagnostics(const RunConfig& config);

struct PeriodicStudy {
    double mean = 0.0;
    double c_mean = 0.0;
    SpeedEstimate estimate;
    LevelSetTrace trace;
};

PeriodicStudy theorem_periodic(const RunConfig& config);

struct FarRightCheck {
    double t;
    double xi;
    double lo;
    double hi;
    double max_abs_diff;
};

struct OscillatoryStudy {
    PlateauSequence seq;
    double c_alpha = 0.0;
    double c_beta = 0.0;
    Trajectory trajectory;
    LevelSetTrace trace;
    SpeedEstimate estimate;
    LemmaReport lemma;
    std::vector<RayProbeResult> rays;
    RayProbeResult mid_ray;
    std::vector<FarRightCheck> far_right;
    bool crossings_nonincreasing = false;
    int max_crossings = 0;
    /// min over snapshot nodes of u - heat_eval.
    double comparison_min = 0.0;
    double comparison_tol = 0.0;
    /// Largest excursions below alpha and above 1 over all trace samples.
    double range_below = 0.0;
    double range_above = 0.0;
    /// Largest violation of the nodewise order lower <= u <= upper.
    double order_violation = 0.0;
    double containment_m = 0.0;
    std::vector<std::pair<double, double>> tau_table;
    bool tau_increasing = false;
    double max_jump = 0.0;
    double jump_bound = 0.0;
};

/// Main run plus the companion runs used for order preservation and the
/// comparison tolerance; companions run concurrently with the main run.
OscillatoryStudy theorem_oscillatory(const RunConfig& config);

struct ExperimentReport {
    ExperimentKind kind;
    std::vector<CriterionResult> criteria;
    std::vector<std::pair<std::string, CsvTable>> tables;
    std::vector<std::string> errors;

    bool all_pass() const;
};

/// Runs one experiment kind and evaluates its criteria. A failing
/// sub-operation is recorded in `errors` (and as a failed criterion) while
/// the remaining tables are kept.
ExperimentReport run_experiment(ExperimentKind kind, const RunConfig& config);

}  // namespace spreadlab
