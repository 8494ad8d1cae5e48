#include "spreadlab/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "spreadlab/textio.hpp"

namespace spreadlab {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid config:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

std::string list_text(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

// Collects problems while filling one block from its section.
class SectionReader {
public:
    SectionReader(const IniSection& section, std::vector<std::string>& errors)
        : section_(section), errors_(errors) {}

    void number(const std::string& key, double& out) {
        handlers_[key] = [this, &out, key](const IniEntry& e) {
            if (auto v = parse_double(e.value)) {
                out = *v;
            } else {
                fail(e, "'" + key + "' is not a finite number: '" + e.value + "'");
            }
        };
    }
    void number(const std::string& key, std::optional<double>& out) {
        handlers_[key] = [this, &out, key](const IniEntry& e) {
            if (auto v = parse_double(e.value)) {
                out = *v;
            } else {
                fail(e, "'" + key + "' is not a finite number: '" + e.value + "'");
            }
        };
    }
    void integer(const std::string& key, int& out) {
        handlers_[key] = [this, &out, key](const IniEntry& e) {
            const auto v = parse_double(e.value);
            if (!v || *v != std::floor(*v) || std::abs(*v) > 1e9) {
                fail(e, "'" + key + "' is not an integer: '" + e.value + "'");
            } else {
                out = static_cast<int>(*v);
            }
        };
    }
    void list(const std::string& key, std::vector<double>& out) {
        handlers_[key] = [this, &out, key](const IniEntry& e) {
            out.clear();
            std::string_view rest = e.value;
            while (true) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                if (auto v = parse_double(item)) {
                    out.push_back(*v);
                } else {
                    fail(e, "'" + key + "' has a non-numeric entry '" + std::string(item) + "'");
                    return;
                }
                if (comma == std::string_view::npos) break;
                rest = rest.substr(comma + 1);
            }
        };
    }
    void text(const std::string& key, std::string& out) {
        handlers_[key] = [&out](const IniEntry& e) { out = e.value; };
    }
    void custom(const std::string& key, std::function<void(const IniEntry&)> handler) {
        handlers_[key] = std::move(handler);
    }
    void require(const std::string& key) { required_.insert(key); }

    bool has(const std::string& key) const { return section_.find(key) != nullptr; }

    void run() {
        std::set<std::string> seen;
        for (const auto& e : section_.entries) {
            const auto it = handlers_.find(e.key);
            if (it == handlers_.end()) {
                fail(e, "unknown key '" + e.key + "' in [" + section_.name + "]");
                continue;
            }
            if (!seen.insert(e.key).second) {
                fail(e, "duplicate key '" + e.key + "' in [" + section_.name + "]");
                continue;
            }
            it->second(e);
        }
        for (const auto& key : required_) {
            if (!seen.count(key)) {
                errors_.push_back("[" + section_.name + "] is missing required key '" + key + "'");
            }
        }
    }

    void fail(const IniEntry& e, const std::string& message) {
        errors_.push_back("line " + std::to_string(e.line) + ": " + message);
    }

private:
    const IniSection& section_;
    std::vector<std::string>& errors_;
    std::map<std::string, std::function<void(const IniEntry&)>> handlers_;
    std::set<std::string> required_;
};

NonlinearityBlock read_nonlinearity(const IniSection& s, std::vector<std::string>& errors) {
    NonlinearityBlock b;
    SectionReader r(s, errors);
    r.custom("kind", [&](const IniEntry& e) {
        try {
            b.kind = reaction_kind_from_string(e.value);
        } catch (const InvalidArgument& ex) {
            r.fail(e, ex.what());
        }
    });
    r.number("theta", b.theta);
    r.number("amplitude", b.amplitude);
    r.number("upper_state", b.upper_state);
    r.require("theta");
    const auto* kind = s.find("kind");
    if (!kind || kind->value != "piecewise-linear-test") r.require("amplitude");
    r.run();
    try {
        (void)b.make();
    } catch (const InvalidArgument& ex) {
        errors.push_back("[nonlinearity] " + std::string(ex.what()));
    }
    return b;
}

InitialDataBlock read_initial_data(const IniSection& s, std::vector<std::string>& errors) {
    InitialDataBlock b;
    SectionReader r(s, errors);
    r.custom("class", [&](const IniEntry& e) {
        static const std::set<std::string> known = {"front-like", "oscillatory", "asym-periodic",
                                                    "file"};
        if (!known.count(e.value)) {
            r.fail(e, "unknown initial-data class '" + e.value + "'");
        }
        b.data_class = e.value;
    });
    r.number("gamma", b.gamma);
    r.number("alpha", b.alpha);
    r.number("beta", b.beta);
    r.number("ratio", b.ratio);
    r.integer("plateaus", b.plateaus);
    r.list("w0_x", b.w0_x);
    r.list("w0_v", b.w0_v);
    r.number("w0_period", b.w0_period);
    r.number("splice_x", b.splice_x);
    r.text("file", b.file);
    r.require("class");
    if (const auto* c = s.find("class")) {
        if (c->value == "asym-periodic") {
            r.require("w0_x");
            r.require("w0_v");
            r.require("w0_period");
        } else if (c->value == "file") {
            r.require("file");
        }
    }
    r.run();
    return b;
}

NumericsBlock read_numerics(const IniSection& s, std::vector<std::string>& errors) {
    NumericsBlock b;
    SectionReader r(s, errors);
    r.number("h", b.h);
    r.number("dt", b.dt);
    r.number("T", b.T);
    r.custom("scheme", [&](const IniEntry& e) {
        try {
            b.scheme = scheme_from_string(e.value);
        } catch (const InvalidArgument& ex) {
            r.fail(e, ex.what());
        }
    });
    r.number("c_max", b.c_max);
    r.number("x_left", b.x_left);
    r.number("x_right", b.x_right);
    r.require("h");
    r.require("dt");
    r.require("T");
    r.run();
    if (!(b.h > 0.0)) errors.push_back("[numerics] h must be positive");
    if (!(b.dt > 0.0)) errors.push_back("[numerics] dt must be positive");
    if (!(b.T > 0.0)) errors.push_back("[numerics] T must be positive");
    if (!(b.c_max > 0.0)) errors.push_back("[numerics] c_max must be positive");
    if (b.x_left && b.x_right && !(*b.x_left < *b.x_right)) {
        errors.push_back("[numerics] x_left must be below x_right");
    }
    return b;
}

FrontBlock read_front(const IniSection& s, std::vector<std::string>& errors) {
    FrontBlock b;
    SectionReader r(s, errors);
    r.list("gammas", b.gammas);
    r.custom("gamma", [&](const IniEntry& e) {
        if (auto v = parse_double(e.value)) {
            b.gammas = {*v};
        } else {
            r.fail(e, "'gamma' is not a finite number: '" + e.value + "'");
        }
    });
    r.list("etas", b.etas);
    r.list("pde_gammas", b.pde_gammas);
    r.number("rel_tol", b.rel_tol);
    r.number("window", b.window);
    r.number("profile_h", b.profile_h);
    r.integer("resolution", b.resolution);
    r.run();
    if (r.has("gamma") && r.has("gammas")) {
        errors.push_back("[front] give either 'gamma' or 'gammas', not both");
    }
    if (!(b.rel_tol > 0.0 && b.rel_tol < 1.0)) errors.push_back("[front] rel_tol must lie in (0, 1)");
    if (!(b.window > 0.0)) errors.push_back("[front] window must be positive");
    if (!(b.profile_h > 0.0)) errors.push_back("[front] profile_h must be positive");
    if (b.resolution < 16) errors.push_back("[front] resolution must be at least 16");
    return b;
}

DiagnosticsBlock read_diagnostics(const IniSection& s, std::vector<std::string>& errors) {
    DiagnosticsBlock b;
    SectionReader r(s, errors);
    r.number("trace_dt", b.trace_dt);
    r.number("window_fraction", b.window_fraction);
    r.list("rays_c", b.rays_c);
    r.list("rays_x", b.rays_x);
    r.number("eps", b.eps);
    r.number("eta", b.eta);
    r.list("snapshot_times", b.snapshot_times);
    r.number("probe_right", b.probe_right);
    r.number("far_band", b.far_band);
    r.number("order_check_T", b.order_check_T);
    r.number("heat_t", b.heat_t);
    r.number("heat_x0", b.heat_x0);
    r.number("heat_x1", b.heat_x1);
    r.list("mass_times", b.mass_times);
    r.number("decay_t", b.decay_t);
    r.run();
    if (!(b.trace_dt > 0.0)) errors.push_back("[diagnostics] trace_dt must be positive");
    if (!(b.window_fraction > 0.0 && b.window_fraction < 1.0)) {
        errors.push_back("[diagnostics] window_fraction must lie in (0, 1)");
    }
    if (b.rays_x.size() != b.rays_c.size() && b.rays_x.size() > 1) {
        errors.push_back("[diagnostics] rays_x must have one entry or as many as rays_c");
    }
    if (!(b.eps > 0.0 && b.eps < 1.0)) errors.push_back("[diagnostics] eps must lie in (0, 1)");
    if (!(b.eta > 0.0)) errors.push_back("[diagnostics] eta must be positive");
    if (!(b.heat_x0 < b.heat_x1)) errors.push_back("[diagnostics] heat_x0 must be below heat_x1");
    return b;
}

void require_block(bool present, const char* name, const std::string& why,
                   std::vector<std::string>& errors) {
    if (!present) errors.push_back("missing [" + std::string(name) + "] block required by " + why);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : InvalidArgument(join_errors(errors)), errors_(std::move(errors)) {}

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::FrontValidation: return "front-validation";
        case ExperimentKind::HeatDiagnostics: return "heat-diagnostics";
        case ExperimentKind::TheoremPeriodic: return "theorem-periodic";
        case ExperimentKind::TheoremOscillatory: return "theorem-oscillatory";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (auto kind : {ExperimentKind::FrontValidation, ExperimentKind::HeatDiagnostics,
                      ExperimentKind::TheoremPeriodic, ExperimentKind::TheoremOscillatory}) {
        if (name == to_string(kind)) return kind;
    }
    throw InvalidArgument("unknown experiment kind '" + std::string(name) + "'");
}

IgnitionNonlinearity NonlinearityBlock::make() const {
    if (kind == ReactionKind::PiecewiseLinearTest) {
        return IgnitionNonlinearity(kind, theta, 1.0, upper_state);
    }
    return IgnitionNonlinearity(kind, theta, amplitude, upper_state);
}

PlateauSequence InitialDataBlock::sequence() const {
    if (data_class != "oscillatory") throw InvalidArgument("initial data is not oscillatory");
    PlateauSequence seq{build_sequence_geometric(ratio, plateaus), alpha, beta};
    seq.validate();
    return seq;
}

PiecewiseLinear InitialDataBlock::build(double theta) const {
    if (data_class == "front-like") return build_front_like(gamma, theta);
    if (data_class == "oscillatory") return build_oscillatory(sequence(), theta);
    if (data_class == "asym-periodic") {
        const PiecewiseLinear w0(w0_x, w0_v, w0_period);
        return build_asym_periodic(w0, splice_x, theta);
    }
    if (data_class == "file") return parse_piecewise_linear(read_text_file(file));
    throw InvalidArgument("unknown initial-data class '" + data_class + "'");
}

RunConfig parse_config(std::string_view text, ConfigUse use, std::optional<ExperimentKind> kind) {
    std::vector<std::string> errors;
    const auto doc = parse_ini(text, errors);
    RunConfig cfg;
    std::set<std::string> seen;
    for (const auto& section : doc.sections) {
        if (section.name.empty()) {
            for (const auto& e : section.entries) {
                errors.push_back("line " + std::to_string(e.line) + ": key '" + e.key +
                                 "' outside any section");
            }
            continue;
        }
        if (!seen.insert(section.name).second) {
            errors.push_back("duplicate section [" + section.name + "]");
            continue;
        }
        if (section.name == "nonlinearity") {
            cfg.nonlinearity = read_nonlinearity(section, errors);
        } else if (section.name == "initial_data") {
            cfg.initial_data = read_initial_data(section, errors);
        } else if (section.name == "numerics") {
            cfg.numerics = read_numerics(section, errors);
        } else if (section.name == "front") {
            cfg.front = read_front(section, errors);
        } else if (section.name == "diagnostics") {
            cfg.diagnostics = read_diagnostics(section, errors);
        } else if (section.name == "output") {
            OutputBlock b;
            SectionReader r(section, errors);
            r.text("dir", b.dir);
            r.run();
            cfg.output = b;
        } else {
            errors.push_back("unknown section [" + section.name + "]");
        }
    }

    if (cfg.nonlinearity && cfg.numerics) {
        try {
            const double bound = lipschitz_bound(cfg.nonlinearity->make());
            if (cfg.numerics->dt * bound > 0.5) {
                errors.push_back("[numerics] dt = " + format_double(cfg.numerics->dt) +
                                 " violates dt * sup|f'| <= 0.5 (sup|f'| <= " +
                                 format_double(bound) + ", so dt <= " +
                                 format_double(0.5 / bound) + ")");
            }
        } catch (const InvalidArgument&) {
            // already reported by the nonlinearity block
        }
    }

    const auto need = [&](bool present, const char* name, const std::string& why) {
        require_block(present, name, why, errors);
    };
    switch (use) {
        case ConfigUse::Any: break;
        case ConfigUse::FrontSpeed:
            need(cfg.nonlinearity.has_value(), "nonlinearity", "front-speed");
            need(cfg.front.has_value(), "front", "front-speed");
            if (cfg.front && cfg.front->gammas.empty()) {
                errors.push_back("[front] needs 'gamma' or 'gammas'");
            }
            break;
        case ConfigUse::Simulate:
            need(cfg.nonlinearity.has_value(), "nonlinearity", "simulate");
            need(cfg.initial_data.has_value(), "initial_data", "simulate");
            need(cfg.numerics.has_value(), "numerics", "simulate");
            break;
        case ConfigUse::Experiment: {
            if (!kind) throw InvalidArgument("experiment use needs an experiment kind");
            const std::string why = "experiment " + std::string(to_string(*kind));
            switch (*kind) {
                case ExperimentKind::FrontValidation:
                    need(cfg.nonlinearity.has_value(), "nonlinearity", why);
                    need(cfg.front.has_value(), "front", why);
                    need(cfg.numerics.has_value(), "numerics", why);
                    if (cfg.front && cfg.front->gammas.size() < 2) {
                        errors.push_back("[front] gammas needs at least two entries for " + why);
                    }
                    break;
                case ExperimentKind::HeatDiagnostics:
                    need(cfg.initial_data.has_value(), "initial_data", why);
                    need(cfg.numerics.has_value(), "numerics", why);
                    need(cfg.diagnostics.has_value(), "diagnostics", why);
                    if (cfg.initial_data && cfg.initial_data->data_class != "oscillatory") {
                        errors.push_back("[initial_data] " + why + " needs class = oscillatory");
                    }
                    break;
                case ExperimentKind::TheoremPeriodic:
                case ExperimentKind::TheoremOscillatory: {
                    need(cfg.nonlinearity.has_value(), "nonlinearity", why);
                    need(cfg.initial_data.has_value(), "initial_data", why);
                    need(cfg.numerics.has_value(), "numerics", why);
                    need(cfg.diagnostics.has_value(), "diagnostics", why);
                    const char* wanted = *kind == ExperimentKind::TheoremPeriodic ? "asym-periodic"
                                                                                  : "oscillatory";
                    if (cfg.initial_data && cfg.initial_data->data_class != wanted) {
                        errors.push_back("[initial_data] " + why + " needs class = " + wanted);
                    }
                    break;
                }
            }
            break;
        }
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

std::string config_to_text(const RunConfig& c) {
    std::ostringstream out;
    const auto kv = [&](const char* key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    const auto num = [&](const char* key, double value) { kv(key, format_double(value)); };
    if (c.nonlinearity) {
        const auto& b = *c.nonlinearity;
        out << "[nonlinearity]\n";
        kv("kind", std::string(to_string(b.kind)));
        num("theta", b.theta);
        num("amplitude", b.amplitude);
        num("upper_state", b.upper_state);
    }
    if (c.initial_data) {
        const auto& b = *c.initial_data;
        out << "[initial_data]\n";
        kv("class", b.data_class);
        num("gamma", b.gamma);
        num("alpha", b.alpha);
        num("beta", b.beta);
        num("ratio", b.ratio);
        kv("plateaus", std::to_string(b.plateaus));
        if (!b.w0_x.empty()) kv("w0_x", list_text(b.w0_x));
        if (!b.w0_v.empty()) kv("w0_v", list_text(b.w0_v));
        num("w0_period", b.w0_period);
        num("splice_x", b.splice_x);
        if (!b.file.empty()) kv("file", b.file);
    }
    if (c.numerics) {
        const auto& b = *c.numerics;
        out << "[numerics]\n";
        num("h", b.h);
        num("dt", b.dt);
        num("T", b.T);
        kv("scheme", std::string(to_string(b.scheme)));
        num("c_max", b.c_max);
        if (b.x_left) num("x_left", *b.x_left);
        if (b.x_right) num("x_right", *b.x_right);
    }
    if (c.front) {
        const auto& b = *c.front;
        out << "[front]\n";
        if (!b.gammas.empty()) kv("gammas", list_text(b.gammas));
        if (!b.etas.empty()) kv("etas", list_text(b.etas));
        if (!b.pde_gammas.empty()) kv("pde_gammas", list_text(b.pde_gammas));
        num("rel_tol", b.rel_tol);
        num("window", b.window);
        num("profile_h", b.profile_h);
        kv("resolution", std::to_string(b.resolution));
    }
    if (c.diagnostics) {
        const auto& b = *c.diagnostics;
        out << "[diagnostics]\n";
        num("trace_dt", b.trace_dt);
        num("window_fraction", b.window_fraction);
        if (!b.rays_c.empty()) kv("rays_c", list_text(b.rays_c));
        if (!b.rays_x.empty()) kv("rays_x", list_text(b.rays_x));
        num("eps", b.eps);
        num("eta", b.eta);
        if (!b.snapshot_times.empty()) kv("snapshot_times", list_text(b.snapshot_times));
        if (b.probe_right) num("probe_right", *b.probe_right);
        num("far_band", b.far_band);
        num("order_check_T", b.order_check_T);
        num("heat_t", b.heat_t);
        num("heat_x0", b.heat_x0);
        num("heat_x1", b.heat_x1);
        if (!b.mass_times.empty()) kv("mass_times", list_text(b.mass_times));
        num("decay_t", b.decay_t);
    }
    if (c.output) {
        out << "[output]\n";
        kv("dir", c.output->dir);
    }
    return out.str();
}

RunConfig config_from_manifest(std::string_view manifest_text) {
    static const std::set<std::string> config_sections = {
        "nonlinearity", "initial_data", "numerics", "front", "diagnostics", "output"};
    std::vector<std::string> errors;
    const auto doc = parse_ini(manifest_text, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    std::string text;
    for (const auto& section : doc.sections) {
        if (!config_sections.count(section.name)) continue;
        text += "[" + section.name + "]\n";
        for (const auto& e : section.entries) text += e.key + " = " + e.value + "\n";
    }
    return parse_config(text);
}

}  // namespace spreadlab
