#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spreadlab/error.hpp"
#include "spreadlab/evolve.hpp"
#include "spreadlab/profiles.hpp"
#include "spreadlab/reaction.hpp"

namespace spreadlab {

/// Carries every validation message found in a config, not just the first.
class ConfigError : public InvalidArgument {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

enum class ExperimentKind { FrontValidation, HeatDiagnostics, TheoremPeriodic, TheoremOscillatory };

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct NonlinearityBlock {
    ReactionKind kind = ReactionKind::SmoothHump;
    double theta = 0.5;
    double amplitude = 1.0;
    double upper_state = 1.0;

    IgnitionNonlinearity make() const;
};

struct InitialDataBlock {
    /// front-like | oscillatory | asym-periodic | file
    std::string data_class;
    double gamma = 0.0;
    double alpha = 0.0;
    double beta = 0.25;
    double ratio = 5.0;
    int plateaus = 6;
    std::vector<double> w0_x;
    std::vector<double> w0_v;
    double w0_period = 0.0;
    double splice_x = 10.0;
    std::string file;

    PiecewiseLinear build(double theta) const;
    /// Plateau list of the oscillatory class.
    PlateauSequence sequence() const;
};

struct NumericsBlock {
    double h = 0.1;
    double dt = 0.01;
    double T = 1.0;
    Scheme scheme = Scheme::BackwardEulerExplicitReaction;
    double c_max = 0.5;
    std::optional<double> x_left;
    std::optional<double> x_right;
};

struct FrontBlock {
    std::vector<double> gammas;
    std::vector<double> etas;
    std::vector<double> pde_gammas;
    double rel_tol = 1e-10;
    double window = 40.0;
    double profile_h = 0.05;
    int resolution = 2000;
};

struct DiagnosticsBlock {
    double trace_dt = 0.5;
    double window_fraction = 0.8;
    std::vector<double> rays_c;
    std::vector<double> rays_x;
    double eps = 0.25;
    double eta = 0.05;
    std::vector<double> snapshot_times;
    std::optional<double> probe_right;
    double far_band = 50.0;
    double order_check_T = 600.0;
    double heat_t = 10.0;
    double heat_x0 = 26.0;
    double heat_x1 = 624.0;
    std::vector<double> mass_times = {0.0, 1.0, 10.0, 100.0};
    double decay_t = 100.0;
};

struct OutputBlock {
    std::string dir;
};

struct RunConfig {
    std::optional<NonlinearityBlock> nonlinearity;
    std::optional<InitialDataBlock> initial_data;
    std::optional<NumericsBlock> numerics;
    std::optional<FrontBlock> front;
    std::optional<DiagnosticsBlock> diagnostics;
    std::optional<OutputBlock> output;
};

/// What a caller is about to do with the config; decides the required blocks.
enum class ConfigUse { Any, FrontSpeed, Simulate, Experiment };

/// Parses `[section]` / `key = value` text. Unknown sections and keys,
/// malformed numbers, missing required keys and blocks, and a reaction step
/// bound dt sup|f'| > 0.5 are all collected and thrown together as a
/// ConfigError.
RunConfig parse_config(std::string_view text, ConfigUse use = ConfigUse::Any,
                       std::optional<ExperimentKind> kind = std::nullopt);

/// Canonical text of the config; parse_config(config_to_text(c)) == c.
std::string config_to_text(const RunConfig& config);

/// Pulls the echoed config sections back out of a run manifest.
RunConfig config_from_manifest(std::string_view manifest_text);

}  // namespace spreadlab
