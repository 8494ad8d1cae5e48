#include "spreadlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "spreadlab/error.hpp"
#include "spreadlab/frontwave.hpp"

namespace spreadlab {

namespace {

DiagnosticsBlock diagnostics_or_default(const RunConfig& config) {
    return config.diagnostics.value_or(DiagnosticsBlock{});
}

FrontBlock front_or_default(const RunConfig& config) {
    return config.front.value_or(FrontBlock{});
}

double default_probe(const PiecewiseLinear& u0, const NumericsBlock& numerics) {
    return u0.breakpoints().front() + numerics.c_max * numerics.T + 50.0;
}

CsvTable trace_table(const LevelSetTrace& trace) {
    CsvTable table{{"t", "xi", "xi_over_t"}, {}};
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double ratio = trace.t[i] > 0.0 ? trace.xi[i] / trace.t[i] : 0.0;
        table.rows.push_back({trace.t[i], trace.xi[i], ratio});
    }
    return table;
}

CriterionResult at_most(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, 0.0, measured <= bound};
}

CriterionResult at_least(std::string name, double measured, double bound) {
    return {std::move(name), measured, bound, 0.0, measured >= bound};
}

CriterionResult near(std::string name, double measured, double expected, double tolerance) {
    return {std::move(name), measured, expected, tolerance,
            std::abs(measured - expected) <= tolerance};
}

std::string tag(double value) {
    std::string s = format_double(value);
    if (s.size() > 8) {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "%g", value);
        s = buffer;
    }
    return s;
}

}  // namespace

bool ExperimentReport::all_pass() const {
    if (!errors.empty()) return false;
    return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

Grid domain_for(const PiecewiseLinear& u0, const NumericsBlock& numerics,
                std::optional<double> probe_right) {
    const double start = u0.breakpoints().front();
    const double probe = probe_right.value_or(default_probe(u0, numerics));
    const double x_left = numerics.x_left.value_or(start - (numerics.c_max * numerics.T + 20.0) - 5.0);
    const double x_right = numerics.x_right.value_or(probe + 12.0 * std::sqrt(numerics.T) + 5.0);
    return Grid::covering(x_left, x_right, numerics.h);
}

double pure_heat_error(const PiecewiseLinear& u0, const Grid& grid, double dt, double T,
                       Scheme scheme) {
    Field field = sample_to_grid(u0, grid);
    Stepper stepper(grid, dt, std::nullopt, scheme, {field.values.front(), field.values.back()});
    const long steps = std::lround(T / dt);
    for (long k = 0; k < steps; ++k) stepper.advance(field);
    std::vector<double> xs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid.x(i);
    const auto exact = heat_eval(u0, static_cast<double>(steps) * dt, xs);
    double err = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::abs(field.values[i] - exact[i]));
    return err;
}

FrontValidationStudy front_validation(const RunConfig& config) {
    const auto nl = config.nonlinearity.value().make();
    const auto front = front_or_default(config);
    const auto diag = diagnostics_or_default(config);
    const auto numerics = config.numerics.value();
    FrontValidationStudy study;
    study.speeds = speed_curve(front.gammas, nl, front.rel_tol);

    study.eta_gamma = front.gammas.front();
    study.c_eta0 = solve_speed(study.eta_gamma, nl, front.rel_tol, front.resolution);
    std::vector<std::future<EtaRow>> eta_jobs;
    for (double eta : front.etas) {
        eta_jobs.push_back(std::async(std::launch::async, [&, eta] {
            return EtaRow{eta,
                          solve_speed(study.eta_gamma, under_family(nl, eta), front.rel_tol,
                                      front.resolution),
                          solve_speed(study.eta_gamma, over_family(nl, eta), front.rel_tol,
                                      front.resolution)};
        }));
    }
    for (auto& job : eta_jobs) study.etas.push_back(job.get());

    struct PdeJob {
        PdeFrontRow row;
        LevelSetTrace trace;
    };
    std::vector<std::future<PdeJob>> pde_jobs;
    for (double gamma : front.pde_gammas) {
        pde_jobs.push_back(std::async(std::launch::async, [&, gamma] {
            const auto u0 = build_front_like(gamma, nl.theta());
            const double probe = default_probe(u0, numerics);
            const Grid grid = domain_for(u0, numerics, probe);
            RunOptions options;
            options.scheme = numerics.scheme;
            options.trace_dt = diag.trace_dt;
            options.c_max = numerics.c_max;
            options.probe_right = probe;
            options.snapshot_times = {numerics.T};
            const auto traj = run(u0, grid, numerics.dt, numerics.T, nl, options);
            PdeJob job;
            job.trace = level_set_trace(traj);
            const auto est = estimate_spreading_speeds(job.trace, diag.window_fraction);
            const double c = solve_speed(gamma, nl, front.rel_tol, front.resolution);
            const Field& last = traj.snapshots.back();
            const double xi = locate_xi(last, nl.theta());
            const auto phi = profile(c, gamma, nl, front.window, front.profile_h, 1e-4,
                                     front.resolution);
            double sup = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double x = grid.x(i);
                if (std::abs(x - xi) > front.window) continue;
                sup = std::max(sup, std::abs(last.values[i] - phi.eval(x - xi)));
            }
            job.row = {gamma, c, xi, xi / last.time, est.c_lower_hat, est.c_upper_hat, sup};
            return job;
        }));
    }
    for (auto& job : pde_jobs) {
        auto done = job.get();
        study.pde.push_back(done.row);
        study.traces.push_back(std::move(done.trace));
    }
    return study;
}

HeatStudy heat_diagnostics(const RunConfig& config) {
    const auto diag = diagnostics_or_default(config);
    const auto& id = config.initial_data.value();
    const auto numerics = config.numerics.value();
    const double theta = config.nonlinearity ? config.nonlinearity->theta : 0.5;
    HeatStudy study;

    const PiecewiseLinear bump({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    study.bump_area = bump.integral(-1.0, 1.0);
    for (double t : diag.mass_times) study.mass.emplace_back(t, mass_conservation(bump, t));
    study.sups = sup_decay(bump, diag.mass_times);
    study.decay_t = diag.decay_t;
    const std::vector<double> decay = {diag.decay_t, 2.0 * diag.decay_t};
    const auto sups = sup_decay(bump, decay);
    study.sup_t = sups[0];
    study.sup_2t = sups[1];
    study.sup_point_mass = study.bump_area / std::sqrt(4.0 * std::numbers::pi * diag.decay_t);

    const auto seq = id.sequence();
    study.alpha = seq.alpha;
    study.beta = seq.beta;
    study.probe = {diag.heat_t, diag.heat_x0, diag.heat_x1};
    const auto [lo, hi] = alpha_min_max(build_oscillatory(seq, theta), study.probe);
    study.alpha_min = lo;
    study.alpha_max = hi;

    const auto ramp = build_front_like(0.0, theta);
    const double reach = 12.0 * std::sqrt(numerics.T) + 20.0;
    study.error_coarse = pure_heat_error(ramp, Grid::covering(-reach, 2.0 + reach, numerics.h),
                                         numerics.dt, numerics.T, numerics.scheme);
    study.error_fine =
        pure_heat_error(ramp, Grid::covering(-reach, 2.0 + reach, numerics.h / 2.0),
                        numerics.dt / 2.0, numerics.T, numerics.scheme);
    return study;
}

PeriodicStudy theorem_periodic(const RunConfig& config) {
    const auto nl = config.nonlinearity.value().make();
    const auto& id = config.initial_data.value();
    const auto numerics = config.numerics.value();
    const auto diag = diagnostics_or_default(config);
    const auto front = front_or_default(config);
    PeriodicStudy study;
    const PiecewiseLinear w0(id.w0_x, id.w0_v, id.w0_period);
    study.mean = mean_periodic(w0);
    study.c_mean = solve_speed(study.mean, nl, front.rel_tol, front.resolution);
    const auto u0 = build_asym_periodic(w0, id.splice_x, nl.theta());
    const double probe = diag.probe_right.value_or(default_probe(u0, numerics));
    RunOptions options;
    options.scheme = numerics.scheme;
    options.trace_dt = diag.trace_dt;
    options.c_max = numerics.c_max;
    options.probe_right = probe;
    const auto traj = run(u0, domain_for(u0, numerics, probe), numerics.dt, numerics.T, nl, options);
    study.trace = level_set_trace(traj);
    study.estimate = estimate_spreading_speeds(study.trace, diag.window_fraction);
    return study;
}

OscillatoryStudy theorem_oscillatory(const RunConfig& config) {
    const auto nl = config.nonlinearity.value().make();
    const auto& id = config.initial_data.value();
    const auto numerics = config.numerics.value();
    const auto diag = diagnostics_or_default(config);
    const auto front = front_or_default(config);
    OscillatoryStudy study;
    study.seq = id.sequence();
    const auto& seq = study.seq;
    const auto u0 = build_oscillatory(seq, nl.theta());
    study.c_alpha = solve_speed(seq.alpha, nl, front.rel_tol, front.resolution);
    study.c_beta = solve_speed(seq.beta, nl, front.rel_tol, front.resolution);
    const double c_mid = 0.5 * (study.c_alpha + study.c_beta);

    const double probe = diag.probe_right.value_or(default_probe(u0, numerics));
    const Grid grid = domain_for(u0, numerics, probe);

    // Comparison tolerance from the pure-heat error of the same scheme.
    auto calibration = std::async(std::launch::async, [&] {
        double err = 0.0;
        for (double t : {1.0, 10.0, 50.0, 200.0}) {
            if (t > numerics.T) break;
            NumericsBlock short_run = numerics;
            short_run.T = t;
            short_run.x_left.reset();
            short_run.x_right.reset();
            err = std::max(err, pure_heat_error(u0, domain_for(u0, short_run, std::nullopt),
                                                numerics.dt, t, numerics.scheme));
        }
        return 10.0 * err;
    });

    // Nested data front_like(alpha) <= u0 <= front_like(beta) on a shorter horizon.
    struct OrderResult {
        double violation;
        double comparison_min;
    };
    auto order = std::async(std::launch::async, [&] {
        NumericsBlock short_run = numerics;
        short_run.T = std::min(diag.order_check_T, numerics.T);
        short_run.x_left.reset();
        short_run.x_right.reset();
        const Grid g = domain_for(u0, short_run, std::nullopt);
        RunOptions options;
        options.scheme = numerics.scheme;
        options.trace_dt = diag.trace_dt;
        options.c_max = numerics.c_max;
        const double T = short_run.T;
        options.snapshot_times = {T / 3.0, 2.0 * T / 3.0, T};
        const auto lower_data = build_front_like(seq.alpha, nl.theta());
        const auto upper_data = build_front_like(seq.beta, nl.theta());
        auto lower = std::async(std::launch::async,
                                [&] { return run(lower_data, g, numerics.dt, T, nl, options); });
        auto upper = std::async(std::launch::async,
                                [&] { return run(upper_data, g, numerics.dt, T, nl, options); });
        const auto mid = run(u0, g, numerics.dt, T, nl, options);
        const auto lo = lower.get();
        const auto hi = upper.get();
        OrderResult result{0.0, HUGE_VAL};
        std::vector<double> xs(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) xs[i] = g.x(i);
        for (std::size_t s = 0; s < mid.snapshots.size(); ++s) {
            const auto& m = mid.snapshots[s].values;
            const auto& a = lo.snapshots[s].values;
            const auto& b = hi.snapshots[s].values;
            for (std::size_t i = 0; i < m.size(); ++i) {
                result.violation = std::max({result.violation, a[i] - m[i], m[i] - b[i]});
            }
            const auto v = heat_eval(u0, mid.snapshots[s].time, xs);
            for (std::size_t i = 0; i < m.size(); ++i) {
                result.comparison_min = std::min(result.comparison_min, m[i] - v[i]);
            }
        }
        return result;
    });

    RunOptions options;
    options.scheme = numerics.scheme;
    options.trace_dt = diag.trace_dt;
    options.c_max = numerics.c_max;
    options.probe_right = probe;
    options.snapshot_times = diag.snapshot_times;
    if (options.snapshot_times.empty()) {
        options.snapshot_times = {numerics.T / 3.0, 2.0 * numerics.T / 3.0, numerics.T};
    }
    for (std::size_t i = 0; i < diag.rays_c.size(); ++i) {
        const double x = diag.rays_x.empty() ? 0.0
                         : diag.rays_x.size() == 1 ? diag.rays_x.front()
                                                   : diag.rays_x[i];
        options.rays.push_back({diag.rays_c[i], x});
    }
    options.rays.push_back({c_mid, 0.0});
    for (double p : lemma_targets(seq)) {
        if (p < probe) options.xi_targets.push_back(p);
    }

    study.trajectory = run(u0, grid, numerics.dt, numerics.T, nl, options);
    const auto& traj = study.trajectory;
    study.trace = level_set_trace(traj);
    study.estimate = estimate_spreading_speeds(study.trace, diag.window_fraction);
    study.lemma = lemma_speeds_check(traj, seq, study.c_alpha, study.c_beta, diag.eps, diag.eta);
    for (const auto& ray : options.rays) {
        study.rays.push_back(ray_probe(traj, ray.c, ray.x, diag.window_fraction));
    }
    study.mid_ray = study.rays.back();

    std::vector<double> xs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid.x(i);
    study.comparison_min = HUGE_VAL;
    for (const auto& snap : traj.snapshots) {
        const auto v = heat_eval(u0, snap.time, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            study.comparison_min = std::min(study.comparison_min, snap.values[i] - v[i]);
        }
        const double xi = locate_xi(snap, nl.theta());
        FarRightCheck check{snap.time, xi, xi + diag.far_band, probe, 0.0};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] < check.lo || xs[i] > check.hi) continue;
            check.max_abs_diff = std::max(check.max_abs_diff, std::abs(snap.values[i] - v[i]));
        }
        study.far_right.push_back(check);
    }

    study.crossings_nonincreasing = true;
    for (std::size_t i = 0; i < traj.trace.size(); ++i) {
        const auto& s = traj.trace[i];
        study.max_crossings = std::max(study.max_crossings, s.crossings);
        if (i > 0 && s.crossings > traj.trace[i - 1].crossings) study.crossings_nonincreasing = false;
        study.range_below = std::max(study.range_below, seq.alpha - s.min_value);
        study.range_above = std::max(study.range_above, s.max_value - 1.0);
    }

    study.containment_m = fit_containment(study.trace, study.c_alpha, study.c_beta);
    const double reach = *std::max_element(study.trace.xi.begin(), study.trace.xi.end());
    study.tau_increasing = true;
    for (double x = study.trace.xi.front(); x <= reach; x += 5.0) {
        const double tau = tau_from_trace(study.trace, x);
        if (!study.tau_table.empty() && !(tau > study.tau_table.back().second)) {
            study.tau_increasing = false;
        }
        study.tau_table.emplace_back(x, tau);
    }
    study.max_jump = max_trace_jump(study.trace);
    study.jump_bound = numerics.c_max * traj.trace_dt + numerics.h;

    study.comparison_tol = calibration.get();
    const auto ordered = order.get();
    study.order_violation = ordered.violation;
    study.comparison_min = std::min(study.comparison_min, ordered.comparison_min);
    return study;
}

namespace {

void front_validation_report(const RunConfig& config, ExperimentReport& report) {
    const auto study = front_validation(config);
    CsvTable speeds{{"gamma", "c"}, {}};
    double min_step = HUGE_VAL;
    for (std::size_t i = 0; i < study.speeds.size(); ++i) {
        speeds.rows.push_back({study.speeds[i].first, study.speeds[i].second});
        if (i > 0) min_step = std::min(min_step, study.speeds[i].second - study.speeds[i - 1].second);
    }
    report.tables.emplace_back("speeds.csv", speeds);
    report.criteria.push_back({"speed_curve_increasing", min_step, 0.0, 0.0, min_step > 0.0});

    CsvTable etas{{"eta", "c_under", "c_over"}, {}};
    for (const auto& row : study.etas) etas.rows.push_back({row.eta, row.under, row.over});
    report.tables.emplace_back("eta_speeds.csv", etas);
    if (study.etas.size() >= 2) {
        // Rows are listed with eta decreasing toward 0.
        auto rows = study.etas;
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.eta > b.eta; });
        double worst_under = HUGE_VAL;
        double worst_over = HUGE_VAL;
        double worst_shrink = HUGE_VAL;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double du = study.c_eta0 - rows[i].under;
            const double dover = rows[i].over - study.c_eta0;
            worst_under = std::min(worst_under, du);
            worst_over = std::min(worst_over, dover);
            if (i + 1 < rows.size()) {
                worst_under = std::min(worst_under, rows[i + 1].under - rows[i].under);
                worst_over = std::min(worst_over, rows[i].over - rows[i + 1].over);
            }
            if (i + 1 < rows.size()) {
                for (auto pick : {&EtaRow::under, &EtaRow::over}) {
                    const double d0 = std::abs(rows[i].*pick - study.c_eta0);
                    const double d1 = std::abs(rows[i + 1].*pick - study.c_eta0);
                    worst_shrink = std::min(worst_shrink, d1 > 0.0 ? d0 / d1 : HUGE_VAL);
                }
            }
        }
        report.criteria.push_back(at_least("under_family_ordered", worst_under, 0.0));
        report.criteria.push_back(at_least("over_family_ordered", worst_over, 0.0));
        report.criteria.push_back(at_least("eta_differences_shrink", worst_shrink, 1.5));
    }

    CsvTable pde{{"gamma", "c_ode", "xi_T", "xi_over_T", "c_lower_hat", "c_upper_hat", "profile_sup"},
                 {}};
    CsvTable traces{{"gamma", "t", "xi", "xi_over_t"}, {}};
    for (std::size_t k = 0; k < study.pde.size(); ++k) {
        const auto& r = study.pde[k];
        pde.rows.push_back({r.gamma, r.c_ode, r.xi_T, r.xi_over_T, r.c_lower_hat, r.c_upper_hat,
                            r.profile_sup});
        const std::string g = tag(r.gamma);
        report.criteria.push_back(
            near("pde_speed_gamma_" + g, r.xi_over_T, r.c_ode, 0.02 * r.c_ode));
        report.criteria.push_back(at_most("pde_profile_gamma_" + g, r.profile_sup, 0.02));
        const auto& tr = study.traces[k];
        for (std::size_t i = 0; i < tr.size(); ++i) {
            traces.rows.push_back({r.gamma, tr.t[i], tr.xi[i], tr.t[i] > 0 ? tr.xi[i] / tr.t[i] : 0.0});
        }
    }
    report.tables.emplace_back("pde_fronts.csv", pde);
    report.tables.emplace_back("trace.csv", traces);
}

void heat_report(const RunConfig& config, ExperimentReport& report) {
    const auto s = heat_diagnostics(config);
    CsvTable mass{{"t", "mass", "area"}, {}};
    for (const auto& [t, m] : s.mass) {
        mass.rows.push_back({t, m, s.bump_area});
        report.criteria.push_back(near("mass_t_" + tag(t), m, s.bump_area, 1e-8));
    }
    report.tables.emplace_back("mass.csv", mass);

    CsvTable decay{{"t", "sup"}, {}};
    const auto& times = config.diagnostics.value().mass_times;
    bool monotone = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
        decay.rows.push_back({times[i], s.sups[i]});
        if (i > 0 && times[i] > times[i - 1] && s.sups[i] > s.sups[i - 1]) monotone = false;
    }
    decay.rows.push_back({s.decay_t, s.sup_t});
    decay.rows.push_back({2.0 * s.decay_t, s.sup_2t});
    report.tables.emplace_back("sup_decay.csv", decay);
    report.criteria.push_back({"sup_nonincreasing", monotone ? 1.0 : 0.0, 1.0, 0.0, monotone});
    report.criteria.push_back(near("sup_vs_point_mass", s.sup_t / s.sup_point_mass, 1.0, 0.1));
    report.criteria.push_back(
        near("sup_doubling_ratio", s.sup_t / s.sup_2t, std::numbers::sqrt2, 0.05 * std::numbers::sqrt2));

    CsvTable window{{"t", "x0", "x1", "alpha_min", "alpha_max", "alpha", "beta"}, {}};
    window.rows.push_back(
        {s.probe.t, s.probe.x0, s.probe.x1, s.alpha_min, s.alpha_max, s.alpha, s.beta});
    report.tables.emplace_back("alpha_window.csv", window);
    report.criteria.push_back(near("alpha_min", s.alpha_min, s.alpha, 0.01));
    report.criteria.push_back(near("alpha_max", s.alpha_max, s.beta, 0.01));

    const auto& n = config.numerics.value();
    CsvTable order{{"h", "dt", "max_error"}, {}};
    order.rows.push_back({n.h, n.dt, s.error_coarse});
    order.rows.push_back({n.h / 2.0, n.dt / 2.0, s.error_fine});
    report.tables.emplace_back("stepper_order.csv", order);
    report.criteria.push_back(at_least("stepper_error_reduction", s.error_coarse / s.error_fine, 3.5));
}

void periodic_report(const RunConfig& config, ExperimentReport& report) {
    const auto s = theorem_periodic(config);
    report.tables.emplace_back("trace.csv", trace_table(s.trace));
    CsvTable speeds{{"mean", "c_mean", "c_lower_hat", "c_upper_hat", "window_start", "window_end"}, {}};
    speeds.rows.push_back({s.mean, s.c_mean, s.estimate.c_lower_hat, s.estimate.c_upper_hat,
                           s.estimate.window_start, s.estimate.window_end});
    report.tables.emplace_back("speeds.csv", speeds);
    report.criteria.push_back(near("c_lower_hat", s.estimate.c_lower_hat, s.c_mean, 0.03 * s.c_mean));
    report.criteria.push_back(near("c_upper_hat", s.estimate.c_upper_hat, s.c_mean, 0.03 * s.c_mean));
    report.criteria.push_back(
        at_most("speed_gap", s.estimate.c_upper_hat - s.estimate.c_lower_hat, 0.02 * s.c_mean));
}

void oscillatory_report(const RunConfig& config, ExperimentReport& report) {
    const auto s = theorem_oscillatory(config);
    report.tables.emplace_back("trace.csv", trace_table(s.trace));

    CsvTable rays{{"c", "x", "t", "u"}, {}};
    CsvTable ray_summary{{"c", "x", "late_min", "late_max"}, {}};
    for (const auto& r : s.rays) {
        for (std::size_t i = 0; i < r.t.size(); ++i) rays.rows.push_back({r.c, r.x, r.t[i], r.u[i]});
        ray_summary.rows.push_back({r.c, r.x, r.late_min, r.late_max});
    }
    report.tables.emplace_back("rays.csv", rays);
    report.tables.emplace_back("ray_summary.csv", ray_summary);

    CsvTable lemma{{"family", "n", "position", "tau", "ratio", "target", "abs_dev", "rel_dev"}, {}};
    for (const auto& r : s.lemma.ratios) {
        lemma.rows.push_back({r.family, static_cast<double>(r.n), r.position, r.tau, r.ratio,
                              r.target, r.abs_dev, r.rel_dev});
    }
    report.tables.emplace_back("lemma_speeds.csv", lemma);
    CsvTable plateaus{{"statement", "n", "lo", "hi", "measured", "bound", "pass"}, {}};
    for (const auto& p : s.lemma.plateaus) {
        plateaus.rows.push_back({p.statement, static_cast<double>(p.n), p.lo, p.hi, p.measured,
                                 p.bound, p.pass ? 1.0 : 0.0});
    }
    report.tables.emplace_back("lemma_plateaus.csv", plateaus);

    CsvTable far{{"t", "xi", "lo", "hi", "max_abs_diff"}, {}};
    double far_worst = 0.0;
    for (const auto& f : s.far_right) {
        far.rows.push_back({f.t, f.xi, f.lo, f.hi, f.max_abs_diff});
        far_worst = std::max(far_worst, f.max_abs_diff);
    }
    report.tables.emplace_back("far_right.csv", far);

    CsvTable tau{{"x", "tau"}, {}};
    for (const auto& [x, t] : s.tau_table) tau.rows.push_back({x, t});
    report.tables.emplace_back("tau.csv", tau);

    CsvTable speeds{{"c_alpha", "c_beta", "c_lower_hat", "c_upper_hat", "window_start", "window_end",
                     "containment_M"},
                    {}};
    speeds.rows.push_back({s.c_alpha, s.c_beta, s.estimate.c_lower_hat, s.estimate.c_upper_hat,
                           s.estimate.window_start, s.estimate.window_end, s.containment_m});
    report.tables.emplace_back("speeds.csv", speeds);

    const auto& est = s.estimate;
    report.criteria.push_back(at_most("c_lower_hat_over_c_alpha", est.c_lower_hat / s.c_alpha, 1.15));
    report.criteria.push_back(at_least("c_upper_hat_over_c_beta", est.c_upper_hat / s.c_beta, 0.85));
    report.criteria.push_back(at_least("speed_separation_fraction",
                                       (est.c_upper_hat - est.c_lower_hat) / (s.c_beta - s.c_alpha),
                                       0.5));
    report.criteria.push_back(at_most("far_right_heat_agreement", far_worst, 1e-3));
    report.criteria.push_back({"sign_changes_nonincreasing", static_cast<double>(s.max_crossings),
                               1.0, 0.0, s.crossings_nonincreasing});
    double final_dev = 0.0;
    for (const auto& r : s.lemma.ratios) {
        bool last = true;
        for (const auto& q : s.lemma.ratios) {
            if (q.family == r.family && q.n > r.n) last = false;
        }
        if (last) final_dev = std::max(final_dev, r.rel_dev);
    }
    report.criteria.push_back(at_most("lemma_final_rel_dev", final_dev, s.lemma.eps));
    report.criteria.push_back(
        {"lemma_trending", s.lemma.trending ? 1.0 : 0.0, 1.0, 0.0, s.lemma.trending});
    report.criteria.push_back({"lemma_plateaus_final", s.lemma.plateaus_final ? 1.0 : 0.0, 1.0,
                               0.0, s.lemma.plateaus_final});
    report.criteria.push_back(at_most("mid_ray_min", s.mid_ray.late_min, s.seq.alpha + 0.05));
    report.criteria.push_back(at_least("mid_ray_max", s.mid_ray.late_max, 0.95));
    for (const auto& r : s.rays) {
        if (r.c > s.c_beta + 0.02) {
            report.criteria.push_back(
                at_most("fast_ray_c_" + tag(r.c), r.late_max, s.seq.beta + 0.03));
        }
    }
    report.criteria.push_back(at_least("comparison_min", s.comparison_min, -s.comparison_tol));
    report.criteria.push_back(at_most("order_violation", s.order_violation, kRangeGuard));
    report.criteria.push_back(
        at_most("range_violation", std::max(s.range_below, s.range_above), kRangeGuard));
    report.criteria.push_back(at_most("containment_M", s.containment_m, 20.0));
    report.criteria.push_back(
        {"tau_increasing", s.tau_increasing ? 1.0 : 0.0, 1.0, 0.0, s.tau_increasing});
    report.criteria.push_back(at_most("trace_max_jump", s.max_jump, s.jump_bound));
}

}  // namespace

ExperimentReport run_experiment(ExperimentKind kind, const RunConfig& config) {
    ExperimentReport report{kind, {}, {}, {}};
    try {
        switch (kind) {
            case ExperimentKind::FrontValidation: front_validation_report(config, report); break;
            case ExperimentKind::HeatDiagnostics: heat_report(config, report); break;
            case ExperimentKind::TheoremPeriodic: periodic_report(config, report); break;
            case ExperimentKind::TheoremOscillatory: oscillatory_report(config, report); break;
        }
    } catch (const std::exception& ex) {
        report.errors.push_back(ex.what());
        report.criteria.push_back({"completed", 0.0, 1.0, 0.0, false});
    }
    return report;
}

}  // namespace spreadlab
