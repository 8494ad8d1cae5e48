#include "spreadlab/speedlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spreadlab/error.hpp"

namespace spreadlab {

void LevelSetTrace::validate() const {
    if (t.size() != xi.size()) throw InvalidArgument("trace columns differ in length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(xi[i])) throw InvalidArgument("trace has a non-finite xi");
        if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("trace times must increase");
    }
}

LevelSetTrace level_set_trace(const Trajectory& trajectory) {
    LevelSetTrace trace;
    trace.theta = trajectory.theta;
    for (const auto& sample : trajectory.trace) {
        if (!sample.xi) continue;
        trace.t.push_back(sample.t);
        trace.xi.push_back(*sample.xi);
    }
    return trace;
}

double locate_xi(const Field& field, double theta) {
    const auto xi = find_xi(field, theta);
    if (!xi) throw InvalidArgument("field has no downward crossing of theta");
    return *xi;
}

double tau_from_trace(const LevelSetTrace& trace, double x) {
    if (trace.size() == 0) throw InvalidArgument("empty trace");
    if (trace.xi.front() >= x) return trace.t.front();
    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace.xi[i] >= x) {
            const double w = (x - trace.xi[i - 1]) / (trace.xi[i] - trace.xi[i - 1]);
            return trace.t[i - 1] + w * (trace.t[i] - trace.t[i - 1]);
        }
    }
    throw InvalidArgument("position " + std::to_string(x) + " is never reached by the trace");
}

SpeedEstimate estimate_spreading_speeds(const LevelSetTrace& trace, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
        throw InvalidArgument("window_fraction must lie in (0, 1)");
    }
    if (trace.size() == 0) throw InvalidArgument("empty trace");
    SpeedEstimate est;
    est.window_end = trace.t.back();
    est.window_start = est.window_end * (1.0 - window_fraction);
    bool any = false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.t[i] < est.window_start || !(trace.t[i] > 0.0)) continue;
        const double ratio = trace.xi[i] / trace.t[i];
        if (!any) {
            est.c_lower_hat = est.c_upper_hat = ratio;
            any = true;
        } else {
            est.c_lower_hat = std::min(est.c_lower_hat, ratio);
            est.c_upper_hat = std::max(est.c_upper_hat, ratio);
        }
    }
    if (!any) throw InvalidArgument("speed-estimate window contains no samples");
    return est;
}

RayProbeResult ray_probe(const Trajectory& trajectory, double c, double x, double window_fraction) {
    if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
        throw InvalidArgument("window_fraction must lie in (0, 1)");
    }
    const RaySeries* series = nullptr;
    for (const auto& s : trajectory.rays) {
        if (std::abs(s.ray.c - c) <= 1e-12 && std::abs(s.ray.x - x) <= 1e-12) series = &s;
    }
    if (!series) throw InvalidArgument("ray was not recorded during the run");
    if (series->exit_time) {
        throw InvalidArgument("ray exits the domain at t = " + std::to_string(*series->exit_time));
    }
    const double start = trajectory.final_time * (1.0 - window_fraction);
    RayProbeResult result;
    result.c = c;
    result.x = x;
    for (std::size_t i = 0; i < series->t.size(); ++i) {
        if (series->t[i] < start) continue;
        result.t.push_back(series->t[i]);
        result.u.push_back(series->u[i]);
    }
    if (result.u.empty()) throw InvalidArgument("ray window contains no samples");
    const auto [lo, hi] = std::minmax_element(result.u.begin(), result.u.end());
    result.late_min = *lo;
    result.late_max = *hi;
    return result;
}

double fit_containment(const LevelSetTrace& trace, double c_low, double c_high) {
    double m = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        m = std::max({m, c_low * trace.t[i] - trace.xi[i], trace.xi[i] - c_high * trace.t[i]});
    }
    return m;
}

double max_trace_jump(const LevelSetTrace& trace) {
    double jump = 0.0;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        jump = std::max(jump, std::abs(trace.xi[i] - trace.xi[i - 1]));
    }
    return jump;
}

std::vector<double> lemma_targets(const PlateauSequence& seq) {
    std::vector<double> out;
    for (std::size_t k = 0; k < seq.x.size(); ++k) {
        out.push_back(seq.x[k]);
        if (k + 1 < seq.x.size()) out.push_back(seq.z(k));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

const Field* capture_for(const Trajectory& trajectory, double target) {
    for (const auto& cap : trajectory.captures) {
        if (std::abs(cap.target - target) <= 1e-9 * std::max(1.0, std::abs(target))) {
            return &cap.field;
        }
    }
    return nullptr;
}

enum class Bound { AtLeast, AtMost, Near };

}  // namespace

LemmaReport lemma_speeds_check(const Trajectory& trajectory, const PlateauSequence& seq,
                               double c_alpha, double c_beta, double eps, double eta) {
    seq.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("lemma eps must lie in (0, 1)");
    if (!(eta > 0.0)) throw InvalidArgument("lemma eta must be positive");
    const auto trace = level_set_trace(trajectory);
    if (trace.size() == 0) throw InvalidArgument("trajectory has no level-set trace");
    const double reach = *std::max_element(trace.xi.begin(), trace.xi.end());

    LemmaReport report;
    report.eps = eps;
    report.eta = eta;
    const auto& x = seq.x;
    const std::size_t K = x.size();

    const auto add_ratio = [&](const std::string& family, int n, double pos, double target) {
        if (pos > reach) return;
        const double tau = tau_from_trace(trace, pos);
        if (!(tau > 0.0)) return;
        const double ratio = pos / tau;
        report.ratios.push_back({family, n, pos, tau, ratio, target, std::abs(ratio - target),
                                 std::abs(ratio - target) / target});
    };
    for (std::size_t n = 0; 2 * n < K; ++n) {
        const int ni = static_cast<int>(n);
        add_ratio("x_even", ni, x[2 * n], c_beta);
        if (2 * n + 1 < K) {
            add_ratio("z_even", ni, seq.z(2 * n), c_alpha);
            add_ratio("x_odd", ni, x[2 * n + 1], c_alpha);
        }
        if (2 * n + 2 < K) add_ratio("z_odd", ni, seq.z(2 * n + 1), c_beta);
    }
    if (report.ratios.empty()) throw InvalidArgument("no hitting time of the sequence is reachable");

    // Final-index and trend verdicts per family.
    report.final_within_eps = true;
    report.trending = true;
    std::map<std::string, std::vector<const LemmaRatio*>> families;
    for (const auto& r : report.ratios) families[r.family].push_back(&r);
    for (const auto& [name, rows] : families) {
        if (rows.back()->rel_dev > eps) report.final_within_eps = false;
        double previous = HUGE_VAL;
        for (const auto* r : rows) {
            if (r->n < 1) continue;
            if (r->rel_dev > previous) report.trending = false;
            previous = r->rel_dev;
        }
    }

    // Plateau estimates on the captured fields.
    const auto check = [&](const std::string& statement, int n, double at, double lo, double hi,
                           Bound kind, double level) {
        const Field* field = capture_for(trajectory, at);
        if (!field) return;
        lo = std::max(lo, field->grid.x_left());
        hi = std::min(hi, trajectory.probe_right);
        if (!(hi > lo)) return;
        double worst = kind == Bound::AtLeast ? HUGE_VAL : -HUGE_VAL;
        bool any = false;
        for (std::size_t i = 0; i < field->grid.size(); ++i) {
            const double xi = field->grid.x(i);
            if (xi < lo || xi > hi) continue;
            const double u = field->values[i];
            any = true;
            switch (kind) {
                case Bound::AtLeast: worst = std::min(worst, u); break;
                case Bound::AtMost: worst = std::max(worst, u); break;
                case Bound::Near: worst = std::max(worst, std::abs(u - level)); break;
            }
        }
        if (!any) return;
        double bound = 0.0;
        bool pass = false;
        switch (kind) {
            case Bound::AtLeast: bound = 1.0 - eta; pass = worst >= bound; break;
            case Bound::AtMost: bound = level + eta; pass = worst <= bound; break;
            case Bound::Near: bound = eta; pass = worst <= bound; break;
        }
        report.plateaus.push_back({statement, n, lo, hi, worst, bound, pass});
    };
    const double far_left = -HUGE_VAL;
    const double a = seq.alpha;
    const double b = seq.beta;
    for (std::size_t n = 0; 2 * n < K; ++n) {
        const int ni = static_cast<int>(n);
        const double xe = x[2 * n];
        check("u(tau(x_2n)) >= 1-eta left of x_2n(1-eps)", ni, xe, far_left, xe * (1 - eps),
              Bound::AtLeast, 1.0);
        if (2 * n + 1 >= K) continue;
        const double xo = x[2 * n + 1];
        const double ze = seq.z(2 * n);
        check("u(tau(x_2n)) <= alpha+eta on [x_2n(1+eps), x_2n+1(1-eps)]", ni, xe, xe * (1 + eps),
              xo * (1 - eps), Bound::AtMost, a);
        check("u(tau(z_2n)) >= 1-eta left of z_2n(1-eps)", ni, ze, far_left, ze * (1 - eps),
              Bound::AtLeast, 1.0);
        check("u(tau(z_2n)) <= alpha+eta on [z_2n(1+eps), x_2n+1(1-eps)]", ni, ze, ze * (1 + eps),
              xo * (1 - eps), Bound::AtMost, a);
        check("u(tau(x_2n+1)) >= 1-eta left of x_2n+1(1-eps)", ni, xo, far_left, xo * (1 - eps),
              Bound::AtLeast, 1.0);
        if (2 * n + 2 >= K) continue;
        const double xn = x[2 * n + 2];
        const double zo = seq.z(2 * n + 1);
        check("|u(tau(x_2n+1)) - beta| <= eta on [x_2n+1(1+eps), x_2n+2(1-eps)]", ni, xo,
              xo * (1 + eps), xn * (1 - eps), Bound::Near, b);
        check("u(tau(z_2n+1)) >= 1-eta left of z_2n+1(1-eps)", ni, zo, far_left, zo * (1 - eps),
              Bound::AtLeast, 1.0);
        check("|u(tau(z_2n+1)) - beta| <= eta on [z_2n+1(1+eps), x_2n+2(1-eps)]", ni, zo,
              zo * (1 + eps), xn * (1 - eps), Bound::Near, b);
    }
    report.plateaus_final = !report.plateaus.empty();
    for (const auto& p : report.plateaus) {
        bool last = true;
        for (const auto& q : report.plateaus) {
            if (q.statement == p.statement && q.n > p.n) last = false;
        }
        if (last && !p.pass) report.plateaus_final = false;
    }
    return report;
}

}  // namespace spreadlab
