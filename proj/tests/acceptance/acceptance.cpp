// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 5        run the listed criteria only
//
// Exit status is 0 only when every requested criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "spreadlab/config.hpp"
#include "spreadlab/evolve.hpp"
#include "spreadlab/experiment.hpp"
#include "spreadlab/frontwave.hpp"
#include "spreadlab/heat.hpp"
#include "spreadlab/profiles.hpp"
#include "spreadlab/speedlab.hpp"
#include "spreadlab/textio.hpp"

using namespace spreadlab;

namespace {

// Thresholds, fixed here rather than read from any config.
constexpr double kClosedFormRelTol = 1e-6;
constexpr double kEtaShrinkFactor = 1.5;
constexpr double kOrderFactor = 3.5;
constexpr double kPdeSpeedRelTol = 0.02;
constexpr double kProfileSupTol = 0.02;
constexpr double kMassTol = 1e-8;
constexpr double kPointMassRelTol = 0.10;
constexpr double kAlphaTol = 0.01;
constexpr double kPeriodicRelTol = 0.03;
constexpr double kPeriodicGapRel = 0.02;
constexpr double kLowerSpeedFactor = 1.15;
constexpr double kUpperSpeedFactor = 0.85;
constexpr double kSeparationFraction = 0.5;
constexpr double kFarRightTol = 1e-3;
constexpr double kLemmaEps = 0.25;
constexpr double kRayEta = 0.05;
constexpr double kRangeTol = 1e-8;
constexpr double kOrderTol = 1e-8;
constexpr double kContainmentMax = 20.0;

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Verdict::check(bool ok, const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
        detail += " [x]";
        pass = false;
    }
}

RunConfig load(const char* name, ExperimentKind kind) {
    const auto path = std::filesystem::path(SPREADLAB_CONFIG_DIR) / name;
    return parse_config(read_text_file(path), ConfigUse::Experiment, kind);
}

double closed_form_speed(double theta, double gamma) {
    const double r = (theta - gamma) / (1.0 - theta);
    return 1.0 / std::sqrt(r * (1.0 + r));
}

// Exact heat flow of the ramp 1 -> 0 on [0, 2]: (m - y)_+ evolves into
// G(m - x) = (m - x) Phi((m - x)/s) + s phi((m - x)/s), s = sqrt(2t).
double ramp_oracle(double t, double x) {
    const double s = std::sqrt(2.0 * t);
    const auto g = [s](double m) {
        const double z = m / s;
        return m * 0.5 * std::erfc(-z / std::numbers::sqrt2) +
               s * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    };
    return 0.5 * (g(2.0 - x) - g(-x));
}

double ramp_max_error(double h, double dt, double T) {
    const double reach = 30.0;
    const auto grid = Grid::covering(-reach, 2.0 + reach, h);
    Field field = sample_to_grid(PiecewiseLinear({0.0, 2.0}, {1.0, 0.0}), grid);
    Stepper stepper(grid, dt, std::nullopt, Scheme::CrankNicolsonExplicitReaction, {1.0, 0.0});
    for (long k = 0, steps = std::lround(T / dt); k < steps; ++k) stepper.advance(field);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(field.values[i] - ramp_oracle(T, grid.x(i))));
    }
    return worst;
}

Verdict criterion_1() {
    Verdict v;
    const auto pl = IgnitionNonlinearity::piecewise_linear_test(0.5);
    for (double gamma : {0.0, 0.1, 0.25, 0.4}) {
        const double oracle = closed_form_speed(0.5, gamma);
        const double rel = std::abs(solve_speed(gamma, pl) - oracle) / oracle;
        v.check(rel <= kClosedFormRelTol, "gamma=%g rel=%.2e", gamma, rel);
    }
    return v;
}

Verdict criterion_2() {
    Verdict v;
    const auto nl = IgnitionNonlinearity::smooth_hump(0.5, 4.0);
    const auto curve = speed_curve({0.0, 0.1, 0.2, 0.3, 0.4}, nl);
    bool increasing = true;
    for (std::size_t i = 1; i < curve.size(); ++i) increasing &= curve[i].second > curve[i - 1].second;
    v.check(increasing, "c_gamma increasing (c_0=%.6f c_0.4=%.6f)", curve.front().second,
            curve.back().second);

    const double c0 = curve.front().second;
    const std::vector<double> etas{0.2, 0.1, 0.05, 0.025};
    std::vector<double> under, over;
    for (double eta : etas) {
        under.push_back(solve_speed(0.0, under_family(nl, eta)));
        over.push_back(solve_speed(0.0, over_family(nl, eta)));
    }
    bool ordered = true;
    double worst_shrink = HUGE_VAL;
    for (std::size_t k = 0; k < etas.size(); ++k) {
        ordered &= under[k] < c0 && over[k] > c0;
        if (k == 0) continue;
        // Smaller eta: under rises, over falls.
        ordered &= under[k] >= under[k - 1] && over[k] <= over[k - 1];
        worst_shrink = std::min({worst_shrink, (c0 - under[k - 1]) / (c0 - under[k]),
                                 (over[k - 1] - c0) / (over[k] - c0)});
    }
    v.check(ordered, "families monotone in eta and bracket c_0");
    v.check(worst_shrink >= kEtaShrinkFactor, "min shrink %.3f >= %.1f", worst_shrink,
            kEtaShrinkFactor);
    return v;
}

Verdict criterion_3() {
    Verdict v;
    const double coarse = ramp_max_error(0.2, 0.05, 1.0);
    const double fine = ramp_max_error(0.1, 0.025, 1.0);
    v.check(coarse / fine >= kOrderFactor, "CN error %.3e -> %.3e, factor %.3f", coarse, fine,
            coarse / fine);
    return v;
}

Verdict criterion_4() {
    Verdict v;
    const auto cfg = load("front_validation.cfg", ExperimentKind::FrontValidation);
    const auto& n = *cfg.numerics;
    v.check(n.h == 0.1 && n.T == 300.0 && n.scheme == Scheme::BackwardEulerExplicitReaction,
            "h=%g T=%g %s", n.h, n.T, std::string(to_string(n.scheme)).c_str());
    const auto study = front_validation(cfg);
    const auto nl = cfg.nonlinearity->make();
    for (double gamma : {0.0, 0.2}) {
        const auto row = std::find_if(study.pde.begin(), study.pde.end(),
                                      [&](const PdeFrontRow& r) { return r.gamma == gamma; });
        if (row == study.pde.end()) {
            v.check(false, "gamma=%g not simulated", gamma);
            continue;
        }
        const double c = solve_speed(gamma, nl);
        const double rel = std::abs(row->xi_T / n.T - c) / c;
        v.check(rel <= kPdeSpeedRelTol, "gamma=%g xi/T=%.5f c=%.5f rel=%.4f", gamma,
                row->xi_T / n.T, c, rel);
        v.check(row->profile_sup <= kProfileSupTol, "profile sup %.2e", row->profile_sup);
    }
    return v;
}

Verdict criterion_5() {
    Verdict v;
    // Unit-area triangle; the trapezoid area is exact for linear pieces.
    const PiecewiseLinear bump({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    const double area = 0.5 * 2.0 * 1.0;
    double worst_mass = 0.0;
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        worst_mass = std::max(worst_mass, std::abs(mass_conservation(bump, t) - area));
    }
    v.check(worst_mass <= kMassTol, "mass error %.2e", worst_mass);
    const double t = 100.0;
    const double sup = sup_decay(bump, std::vector<double>{t}).front();
    const double point_mass = area / std::sqrt(4.0 * std::numbers::pi * t);
    const double rel = std::abs(sup - point_mass) / point_mass;
    v.check(rel <= kPointMassRelTol, "sup(100)/point mass = %.5f", sup / point_mass);

    const auto cfg = load("heat_diagnostics.cfg", ExperimentKind::HeatDiagnostics);
    const auto& id = *cfg.initial_data;
    v.check(id.alpha == 0.0 && id.beta == 0.25 && id.ratio == 5.0 && id.plateaus == 6,
            "oscillatory data alpha=%g beta=%g ratio=%g plateaus=%d", id.alpha, id.beta, id.ratio,
            id.plateaus);
    const auto& d = *cfg.diagnostics;
    const auto u0 = build_oscillatory(id.sequence(), 0.5);
    const auto [lo, hi] = alpha_min_max(u0, {d.heat_t, d.heat_x0, d.heat_x1});
    v.check(std::abs(lo - 0.0) <= kAlphaTol && std::abs(hi - 0.25) <= kAlphaTol,
            "alpha_min=%.5f alpha_max=%.5f", lo, hi);
    return v;
}

Verdict criterion_6() {
    Verdict v;
    const auto cfg = load("theorem_periodic.cfg", ExperimentKind::TheoremPeriodic);
    const auto& id = *cfg.initial_data;
    const PiecewiseLinear w0(id.w0_x, id.w0_v, id.w0_period);
    // Exact mean of the sawtooth from its own trapezoids.
    double mean = 0.0;
    for (std::size_t i = 1; i < id.w0_x.size(); ++i) {
        mean += 0.5 * (id.w0_v[i] + id.w0_v[i - 1]) * (id.w0_x[i] - id.w0_x[i - 1]);
    }
    mean /= id.w0_period;
    v.check(std::abs(mean - 0.2) < 1e-12 && id.w0_period == 4.0, "period %g mean %.3f",
            id.w0_period, mean);
    const auto study = theorem_periodic(cfg);
    const double c = solve_speed(0.2, cfg.nonlinearity->make());
    const auto& e = study.estimate;
    const double lo_rel = std::abs(e.c_lower_hat - c) / c;
    const double hi_rel = std::abs(e.c_upper_hat - c) / c;
    v.check(lo_rel <= kPeriodicRelTol && hi_rel <= kPeriodicRelTol,
            "c=%.5f lower=%.5f upper=%.5f", c, e.c_lower_hat, e.c_upper_hat);
    v.check(e.c_upper_hat - e.c_lower_hat <= kPeriodicGapRel * c, "gap %.2e",
            e.c_upper_hat - e.c_lower_hat);
    return v;
}

std::shared_ptr<const OscillatoryStudy> oscillatory_study() {
    static std::shared_ptr<const OscillatoryStudy> cached;
    if (!cached) {
        const auto cfg = load("theorem_oscillatory.cfg", ExperimentKind::TheoremOscillatory);
        cached = std::make_shared<const OscillatoryStudy>(theorem_oscillatory(cfg));
    }
    return cached;
}

Verdict criterion_7() {
    Verdict v;
    const auto cfg = load("theorem_oscillatory.cfg", ExperimentKind::TheoremOscillatory);
    const auto& n = *cfg.numerics;
    const auto& id = *cfg.initial_data;
    v.check(n.h == 0.2 && n.scheme == Scheme::BackwardEulerExplicitReaction && id.ratio == 5.0 &&
                id.plateaus == 6,
            "h=%g ratio=%g plateaus=%d", n.h, id.ratio, id.plateaus);
    const auto s = oscillatory_study();
    const auto nl = cfg.nonlinearity->make();
    const double c_alpha = solve_speed(id.alpha, nl);
    const double c_beta = solve_speed(id.beta, nl);

    // The last alpha plateau is [x_{K-2}, x_{K-1}] for an even plateau count.
    const auto& x = s->seq.x;
    const double midpoint = std::sqrt(x[x.size() - 2] * x[x.size() - 1]);
    const double reach = *std::max_element(s->trace.xi.begin(), s->trace.xi.end());
    v.check(reach >= midpoint, "xi(T)=%.1f reaches %.1f", reach, midpoint);

    // (a)
    const auto& e = s->estimate;
    v.check(e.c_lower_hat <= kLowerSpeedFactor * c_alpha, "(a) lower/c_alpha=%.4f",
            e.c_lower_hat / c_alpha);
    v.check(e.c_upper_hat >= kUpperSpeedFactor * c_beta, "upper/c_beta=%.4f",
            e.c_upper_hat / c_beta);
    v.check(e.c_upper_hat - e.c_lower_hat >= kSeparationFraction * (c_beta - c_alpha),
            "separation %.3f of c_beta-c_alpha",
            (e.c_upper_hat - e.c_lower_hat) / (c_beta - c_alpha));

    // (b)
    double far = 0.0;
    for (const auto& f : s->far_right) far = std::max(far, f.max_abs_diff);
    v.check(s->far_right.size() >= 3 && far <= kFarRightTol, "(b) %zu snapshots, far-right %.2e",
            s->far_right.size(), far);

    // (c)
    bool crossings_ok = true;
    const auto& tr = s->trajectory.trace;
    for (std::size_t i = 1; i < tr.size(); ++i) crossings_ok &= tr[i].crossings <= tr[i - 1].crossings;
    v.check(crossings_ok, "(c) sign changes nonincreasing over %zu samples", tr.size());

    // (d) relative deviations per family: last index within eps, and
    // nonincreasing across n >= 1.
    std::map<std::string, std::vector<const LemmaRatio*>> families;
    for (const auto& r : s->lemma.ratios) families[r.family].push_back(&r);
    double worst_final = 0.0;
    std::string rising;
    for (const auto& [name, rows] : families) {
        worst_final = std::max(worst_final, rows.back()->rel_dev);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i - 1]->n >= 1 && rows[i]->rel_dev > rows[i - 1]->rel_dev) {
                char buf[96];
                std::snprintf(buf, sizeof buf, " %s n=%d->%d %.4f->%.4f", name.c_str(),
                              rows[i - 1]->n, rows[i]->n, rows[i - 1]->rel_dev, rows[i]->rel_dev);
                rising += buf;
            }
        }
    }
    v.check(families.size() == 4 && worst_final <= kLemmaEps, "(d) worst final rel dev %.4f",
            worst_final);
    v.check(rising.empty(), "trend toward targets%s", rising.empty() ? " holds" : rising.c_str());

    // (e)
    const auto& mid = s->mid_ray;
    v.check(std::abs(mid.c - 0.5 * (c_alpha + c_beta)) < 1e-9 &&
                mid.late_min <= id.alpha + kRayEta && mid.late_max >= 1.0 - kRayEta,
            "(e) mid ray min=%.4f max=%.4f", mid.late_min, mid.late_max);
    return v;
}

Verdict criterion_8() {
    Verdict v;
    const auto s = oscillatory_study();
    v.check(s->comparison_min >= -s->comparison_tol, "comparison min %.2e (tol %.2e)",
            s->comparison_min, s->comparison_tol);
    v.check(s->order_violation <= kOrderTol, "order violation %.2e", s->order_violation);
    double below = 0.0, above = 0.0;
    for (const auto& t : s->trajectory.trace) {
        below = std::max(below, s->seq.alpha - t.min_value);
        above = std::max(above, t.max_value - 1.0);
    }
    v.check(below <= kRangeTol && above <= kRangeTol, "range excursions %.1e / %.1e", below, above);
    // Fitted containment constant.
    double m = 0.0;
    for (std::size_t i = 0; i < s->trace.size(); ++i) {
        const double t = s->trace.t[i], xi = s->trace.xi[i];
        m = std::max({m, s->c_alpha * t - xi, xi - s->c_beta * t});
    }
    v.check(m <= kContainmentMax, "containment M=%.3f", m);
    bool tau_ok = s->tau_table.size() >= 2;
    for (std::size_t i = 1; i < s->tau_table.size(); ++i) {
        tau_ok &= s->tau_table[i].second > s->tau_table[i - 1].second;
    }
    v.check(tau_ok, "tau strictly increasing over %zu positions", s->tau_table.size());
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria{criterion_1, criterion_2, criterion_3,
                                                         criterion_4, criterion_5, criterion_6,
                                                         criterion_7, criterion_8};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [criterion 1-8 ...]\n", argv[0]);
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty()) {
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
    }
    bool all = true;
    for (int k : selected) {
        Verdict v;
        try {
            v = criteria[k - 1]();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("error: ") + e.what();
        }
        std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", k, v.detail.c_str());
        std::fflush(stdout);
        all &= v.pass;
    }
    return all ? 0 : 1;
}
