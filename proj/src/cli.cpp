#include "spreadlab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ostream>

#include "spreadlab/config.hpp"
#include "spreadlab/error.hpp"
#include "spreadlab/experiment.hpp"
#include "spreadlab/frontwave.hpp"
#include "spreadlab/heat.hpp"
#include "spreadlab/output.hpp"

namespace spreadlab {

namespace {

std::string join_command(const std::vector<std::string>& args) {
    std::string out = "spreadlab";
    for (const auto& a : args) out += " " + a;
    return out;
}

std::optional<std::string> config_output(const RunConfig& config) {
    if (config.output && !config.output->dir.empty()) return config.output->dir;
    return std::nullopt;
}

void print_criteria(const std::vector<CriterionResult>& criteria, std::ostream& out) {
    for (const auto& c : criteria) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << format_double(c.measured)
            << " expected=" << format_double(c.expected)
            << " tolerance=" << format_double(c.tolerance) << "\n";
    }
}

struct FrontSpeedArgs {
    std::string config;
    std::string kind = "smooth-hump";
    double theta = 0.5;
    double amplitude = 0.0;
    std::vector<double> gammas;
    double rel_tol = 1e-10;
    int resolution = 2000;
    std::string profile_path;
    double window = 40.0;
    double h = 0.05;
};

int front_speed(const FrontSpeedArgs& a, bool theta_given, bool amplitude_given,
                std::ostream& out) {
    NonlinearityBlock nb;
    FrontBlock fb;
    if (!a.config.empty()) {
        const auto cfg = parse_config(read_text_file(a.config), ConfigUse::FrontSpeed);
        nb = *cfg.nonlinearity;
        fb = *cfg.front;
    } else {
        if (!theta_given) throw ConfigError({"--theta is required without --config"});
        nb.kind = reaction_kind_from_string(a.kind);
        if (nb.kind == ReactionKind::SmoothHump && !amplitude_given) {
            throw ConfigError({"--amplitude is required for the smooth-hump kind"});
        }
        nb.theta = a.theta;
        nb.amplitude = a.amplitude;
        fb.rel_tol = a.rel_tol;
        fb.resolution = a.resolution;
        fb.window = a.window;
        fb.profile_h = a.h;
    }
    if (!a.gammas.empty()) fb.gammas = a.gammas;
    if (fb.gammas.empty()) throw ConfigError({"no gamma given"});
    const auto nl = nb.make();
    CsvTable table{{"gamma", "c"}, {}};
    std::vector<double> speeds;
    for (double gamma : fb.gammas) {
        speeds.push_back(solve_speed(gamma, nl, fb.rel_tol, fb.resolution));
        table.rows.push_back({gamma, speeds.back()});
    }
    out << table.to_string();
    if (!a.profile_path.empty()) {
        const auto phi = profile(speeds.front(), fb.gammas.front(), nl, fb.window, fb.profile_h,
                                 1e-4, fb.resolution);
        CsvTable p{{"x", "phi"}, {}};
        for (std::size_t i = 0; i < phi.x.size(); ++i) p.rows.push_back({phi.x[i], phi.phi[i]});
        write_text_file(a.profile_path, p.to_string());
    }
    return kExitOk;
}

int simulate(const std::string& config_path, const std::string& output, const std::string& command,
             std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = parse_config(read_text_file(config_path), ConfigUse::Simulate);
    const auto nl = cfg.nonlinearity->make();
    const auto u0 = cfg.initial_data->build(nl.theta());
    const auto& numerics = *cfg.numerics;
    const auto diag = cfg.diagnostics.value_or(DiagnosticsBlock{});
    const double probe =
        diag.probe_right.value_or(u0.breakpoints().front() + numerics.c_max * numerics.T + 50.0);
    const Grid grid = domain_for(u0, numerics, probe);
    RunOptions options;
    options.scheme = numerics.scheme;
    options.trace_dt = diag.trace_dt;
    options.c_max = numerics.c_max;
    options.probe_right = probe;
    options.snapshot_times = diag.snapshot_times;
    if (options.snapshot_times.empty()) options.snapshot_times = {0.0, numerics.T};
    for (std::size_t i = 0; i < diag.rays_c.size(); ++i) {
        const double x = diag.rays_x.empty() ? 0.0
                         : diag.rays_x.size() == 1 ? diag.rays_x.front()
                                                   : diag.rays_x[i];
        options.rays.push_back({diag.rays_c[i], x});
    }
    const auto traj = run(u0, grid, numerics.dt, numerics.T, nl, options);

    std::vector<std::pair<std::string, CsvTable>> tables;
    CsvTable index{{"snapshot", "t"}, {}};
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const auto& snap = traj.snapshots[k];
        CsvTable t{{"x", "u"}, {}};
        for (std::size_t i = 0; i < snap.values.size(); ++i) {
            t.rows.push_back({snap.grid.x(i), snap.values[i]});
        }
        tables.emplace_back("snapshot_" + std::to_string(k) + ".csv", std::move(t));
        index.rows.push_back({static_cast<double>(k), snap.time});
    }
    tables.emplace_back("snapshots.csv", index);
    CsvTable trace{{"t", "xi"}, {}};
    for (const auto& s : traj.trace) {
        if (s.xi) trace.rows.push_back({s.t, *s.xi});
    }
    tables.emplace_back("trace.csv", trace);
    CsvTable rays{{"c", "x", "t", "u"}, {}};
    for (const auto& r : traj.rays) {
        for (std::size_t i = 0; i < r.t.size(); ++i) rays.rows.push_back({r.ray.c, r.ray.x, r.t[i], r.u[i]});
    }
    tables.emplace_back("rays.csv", rays);

    RunManifest manifest;
    manifest.config = cfg;
    manifest.command = command;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto dir = resolve_output_dir(output, config_output(cfg), "simulate");
    write_outputs(dir, tables, manifest);
    out << "wrote " << traj.snapshots.size() << " snapshots to " << dir.string() << "\n";
    return kExitOk;
}

int heat_eval_command(const std::string& pl_path, double t, double x0, double x1, double dx,
                      const std::string& output, std::ostream& out) {
    if (!(x0 < x1)) throw ConfigError({"--x0 must be below --x1"});
    if (!(dx > 0.0)) throw ConfigError({"--dx must be positive"});
    const auto pl = parse_piecewise_linear(read_text_file(pl_path));
    const auto n = static_cast<std::size_t>(std::ceil((x1 - x0) / dx - 1e-9)) + 1;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = std::min(x1, x0 + dx * static_cast<double>(i));
    const auto v = heat_eval(pl, t, xs);
    CsvTable table{{"x", "v"}, {}};
    for (std::size_t i = 0; i < n; ++i) table.rows.push_back({xs[i], v[i]});
    if (output.empty()) {
        out << table.to_string();
    } else {
        write_text_file(output, table.to_string());
    }
    return kExitOk;
}

int experiment(const std::string& kind_name, const std::string& config_path,
               const std::string& output, const std::string& command, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto kind = experiment_kind_from_string(kind_name);
    const auto cfg = parse_config(read_text_file(config_path), ConfigUse::Experiment, kind);
    const auto report = run_experiment(kind, cfg);
    RunManifest manifest;
    manifest.config = cfg;
    manifest.command = command;
    manifest.criteria = report.criteria;
    manifest.errors = report.errors;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto dir = resolve_output_dir(output, config_output(cfg), kind_name);
    write_outputs(dir, report.tables, manifest);
    print_criteria(report.criteria, out);
    for (const auto& e : report.errors) out << "ERROR " << e << "\n";
    out << "run directory: " << dir.string() << "\n";
    return report.all_pass() ? kExitOk : kExitFailure;
}

int report(const std::string& run_dir, std::ostream& out) {
    const auto manifest = parse_manifest(read_text_file(std::filesystem::path(run_dir) / "manifest.txt"));
    out << manifest.command << "\n";
    out << "tool_version " << manifest.tool_version << ", wall clock "
        << format_double(manifest.wall_clock_seconds) << " s\n";
    print_criteria(manifest.criteria, out);
    for (const auto& e : manifest.errors) out << "ERROR " << e << "\n";
    std::size_t passed = 0;
    for (const auto& c : manifest.criteria) passed += c.pass ? 1 : 0;
    out << passed << "/" << manifest.criteria.size() << " criteria pass\n";
    return manifest.all_pass() ? kExitOk : kExitFailure;
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::string& explicit_dir,
                                         const std::optional<std::string>& config_dir,
                                         const std::string& fallback_name) {
    std::filesystem::path dir;
    if (!explicit_dir.empty()) {
        dir = explicit_dir;
    } else if (config_dir) {
        dir = *config_dir;
    } else {
        dir = std::filesystem::path("runs") / fallback_name;
    }
    if (dir.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv); root && *root) {
            dir = std::filesystem::path(root) / dir;
        }
    }
    return dir;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ignition-front speeds, heat-flow diagnostics and spreading experiments",
                 "spreadlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    FrontSpeedArgs fs;
    auto* front_cmd = app.add_subcommand("front-speed", "Print (gamma, c) rows as CSV");
    front_cmd->add_option("--config", fs.config, "Config file with [nonlinearity] and [front]");
    front_cmd->add_option("--kind", fs.kind, "smooth-hump | piecewise-linear-test");
    auto* theta_opt = front_cmd->add_option("--theta", fs.theta, "Ignition threshold");
    auto* amp_opt = front_cmd->add_option("--amplitude", fs.amplitude, "Reaction amplitude a");
    front_cmd->add_option("--gamma", fs.gammas, "Lower state(s)")->delimiter(',');
    front_cmd->add_option("--rel-tol", fs.rel_tol, "Relative bracket tolerance");
    front_cmd->add_option("--resolution", fs.resolution, "Phase-plane steps on [theta, 1]");
    front_cmd->add_option("--profile", fs.profile_path, "Write the first front profile (x, phi)");
    front_cmd->add_option("--window", fs.window, "Profile half-width");
    front_cmd->add_option("--spacing", fs.h, "Profile node spacing");

    std::string sim_config;
    std::string sim_output;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the PDE and write snapshots and trace");
    sim_cmd->add_option("--config", sim_config, "Run config")->required();
    sim_cmd->add_option("--output", sim_output, "Run directory");

    std::string pl_path;
    std::string heat_output;
    double heat_t = 0.0;
    double x0 = 0.0;
    double x1 = 0.0;
    double dx = 0.1;
    auto* heat_cmd = app.add_subcommand("heat-eval", "Exact heat flow of piecewise-linear data");
    heat_cmd->add_option("--pl", pl_path, "Piecewise-linear function file")->required();
    heat_cmd->add_option("--t", heat_t, "Time")->required();
    heat_cmd->add_option("--x0", x0, "Left end of the sample range")->required();
    heat_cmd->add_option("--x1", x1, "Right end of the sample range")->required();
    heat_cmd->add_option("--dx", dx, "Sample spacing");
    heat_cmd->add_option("--output", heat_output, "CSV file (stdout if omitted)");

    std::string exp_kind;
    std::string exp_config;
    std::string exp_output;
    auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment and write its run directory");
    exp_cmd->add_option("kind", exp_kind,
                        "front-validation | heat-diagnostics | theorem-periodic | theorem-oscillatory")
        ->required();
    exp_cmd->add_option("--config", exp_config, "Experiment config")->required();
    exp_cmd->add_option("--output", exp_output, "Run directory");

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "Summarize a run directory's manifest");
    report_cmd->add_option("run_dir", report_dir, "Run directory")->required();

    std::vector<const char*> argv{"spreadlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        if (e.get_exit_code() != 0) err << app.help();
        return kExitUsage;
    }

    const std::string command = join_command(args);
    try {
        if (*front_cmd) {
            return front_speed(fs, theta_opt->count() > 0, amp_opt->count() > 0, out);
        }
        if (*sim_cmd) return simulate(sim_config, sim_output, command, out);
        if (*heat_cmd) return heat_eval_command(pl_path, heat_t, x0, x1, dx, heat_output, out);
        if (*exp_cmd) return experiment(exp_kind, exp_config, exp_output, command, out);
        if (*report_cmd) return report(report_dir, out);
    } catch (const ConfigError& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kExitFailure;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace spreadlab
