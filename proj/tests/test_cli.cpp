#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spreadlab/cli.hpp"
#include "spreadlab/config.hpp"
#include "spreadlab/error.hpp"
#include "spreadlab/frontwave.hpp"
#include "spreadlab/output.hpp"
#include "spreadlab/textio.hpp"

using namespace spreadlab;
namespace fs = std::filesystem;

namespace {

const char* kFrontConfig = R"(# front speeds only
[nonlinearity]
kind = smooth-hump
theta = 0.5
amplitude = 4

[front]
gammas = 0, 0.2
)";

const char* kSimulateConfig = R"([nonlinearity]
kind = smooth-hump
theta = 0.5
amplitude = 4

[initial_data]
class = front-like
gamma = 0

[numerics]
h = 0.2
dt = 0.1
T = 20
c_max = 0.5

[diagnostics]
trace_dt = 1
rays_c = 0
rays_x = 0
snapshot_times = 0, 10, 20
)";

const char* kSmallOscillatory = R"([nonlinearity]
kind = smooth-hump
theta = 0.5
amplitude = 4

[initial_data]
class = oscillatory
alpha = 0
beta = 0.25
ratio = 5
plateaus = 4

[numerics]
h = 0.2
dt = 0.1
T = 300
c_max = 0.4

[diagnostics]
trace_dt = 0.5
window_fraction = 0.5
order_check_T = 100
)";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spreadlab_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    write_text_file(p, text);
    return p;
}

std::vector<std::string> collect_errors(const std::string& text, ConfigUse use,
                                        std::optional<ExperimentKind> kind = std::nullopt) {
    try {
        parse_config(text, use, kind);
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
    for (const auto& e : errors) {
        if (e.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST(Config, MinimalFrontSpeedConfig) {
    const auto cfg = parse_config(kFrontConfig, ConfigUse::FrontSpeed);
    ASSERT_TRUE(cfg.nonlinearity && cfg.front);
    EXPECT_EQ(cfg.nonlinearity->theta, 0.5);
    EXPECT_EQ(cfg.nonlinearity->amplitude, 4.0);
    EXPECT_EQ(cfg.front->gammas, (std::vector<double>{0.0, 0.2}));
    EXPECT_FALSE(cfg.numerics.has_value());
}

TEST(Config, ReactionStepBoundIsReported) {
    std::string text = kSimulateConfig;
    text.replace(text.find("dt = 0.1"), 8, "dt = 5");
    const auto errors = collect_errors(text, ConfigUse::Simulate);
    ASSERT_FALSE(errors.empty());
    EXPECT_TRUE(mentions(errors, "0.5"));
    EXPECT_TRUE(mentions(errors, "dt"));
}

TEST(Config, UnknownKeyIsNamed) {
    std::string text = kFrontConfig;
    text.replace(text.find("theta"), 5, "thetta");
    const auto errors = collect_errors(text, ConfigUse::FrontSpeed);
    EXPECT_TRUE(mentions(errors, "thetta"));
    EXPECT_TRUE(mentions(errors, "theta"));
}

TEST(Config, AllErrorsAreCollected) {
    const std::string text = R"([nonlinearity]
kind = smooth-hump
theta = abc
amplitude = 4
colour = red
[front]
gammas = 0
[bogus]
x = 1
)";
    const auto errors = collect_errors(text, ConfigUse::FrontSpeed);
    EXPECT_GE(errors.size(), 3u);
    EXPECT_TRUE(mentions(errors, "abc"));
    EXPECT_TRUE(mentions(errors, "colour"));
    EXPECT_TRUE(mentions(errors, "bogus"));
}

TEST(Config, RequiredBlocksPerUse) {
    EXPECT_TRUE(mentions(collect_errors(kFrontConfig, ConfigUse::Simulate), "initial_data"));
    EXPECT_TRUE(mentions(collect_errors(kFrontConfig, ConfigUse::Simulate), "numerics"));
    EXPECT_FALSE(
        collect_errors(kSimulateConfig, ConfigUse::Experiment, ExperimentKind::TheoremPeriodic)
            .empty());
    EXPECT_TRUE(collect_errors(kSmallOscillatory, ConfigUse::Experiment,
                               ExperimentKind::TheoremOscillatory)
                    .empty());
}

TEST(Config, DuplicatesAreRejected) {
    std::string dup_key = kFrontConfig;
    dup_key += "gammas = 0.1\n";
    EXPECT_TRUE(mentions(collect_errors(dup_key, ConfigUse::FrontSpeed), "gammas"));
    std::string dup_section = kFrontConfig;
    dup_section += "[front]\nwindow = 30\n";
    EXPECT_TRUE(mentions(collect_errors(dup_section, ConfigUse::FrontSpeed), "front"));
    const std::string both = std::string(kFrontConfig) + "gamma = 0.1\n";
    EXPECT_FALSE(collect_errors(both, ConfigUse::FrontSpeed).empty());
}

TEST(Config, CanonicalTextRoundTrips) {
    for (const char* text : {kFrontConfig, kSimulateConfig, kSmallOscillatory}) {
        const auto cfg = parse_config(text);
        const auto canonical = config_to_text(cfg);
        EXPECT_EQ(config_to_text(parse_config(canonical)), canonical);
    }
    RunConfig cfg = parse_config(kSimulateConfig);
    cfg.numerics->dt = 0.1 + 1e-16 * 3;
    const auto again = parse_config(config_to_text(cfg));
    EXPECT_EQ(again.numerics->dt, cfg.numerics->dt);
}

TEST(Config, ExperimentKindNames) {
    for (auto k : {ExperimentKind::FrontValidation, ExperimentKind::HeatDiagnostics,
                   ExperimentKind::TheoremPeriodic, ExperimentKind::TheoremOscillatory}) {
        EXPECT_EQ(experiment_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(experiment_kind_from_string("theorem-9"), InvalidArgument);
}

TEST(Manifest, RoundTrip) {
    RunManifest m;
    m.config = parse_config(kSimulateConfig);
    m.command = "spreadlab simulate --config a # b";
    m.wall_clock_seconds = 1.0 / 3.0;
    m.criteria = {{"first", 0.1, 0.2, 1e-3, true}, {"second", -1.5, 0.0, 0.25, false}};
    m.errors = {"something broke"};
    const auto text = m.to_text();
    const auto back = parse_manifest(text);
    EXPECT_EQ(back.wall_clock_seconds, m.wall_clock_seconds);
    EXPECT_EQ(back.tool_version, std::string(kToolVersion));
    ASSERT_EQ(back.criteria.size(), 2u);
    EXPECT_EQ(back.criteria[1].name, "second");
    EXPECT_EQ(back.criteria[1].measured, -1.5);
    EXPECT_FALSE(back.criteria[1].pass);
    EXPECT_EQ(back.errors, m.errors);
    EXPECT_FALSE(back.all_pass());
    EXPECT_EQ(config_to_text(back.config), config_to_text(m.config));
    EXPECT_EQ(back.to_text(), text);
}

TEST(Manifest, RejectsMalformed) {
    EXPECT_THROW(parse_manifest("[numerics]\nh = 0.1\n"), InvalidArgument);
    EXPECT_THROW(parse_manifest("[run]\nwall_clock_seconds = 1\n[criterion.a]\nmeasured = 1\n"),
                 InvalidArgument);
}

TEST(TextIo, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 2.220446049250313e-16, -123456.789012345678, 1e300}) {
        EXPECT_EQ(*parse_double(format_double(v)), v);
    }
    EXPECT_FALSE(parse_double("1.0x").has_value());
    EXPECT_FALSE(parse_double("inf").has_value());
    const CsvTable empty{{"a", "b"}, {}};
    EXPECT_EQ(empty.to_string(), "a,b\n");
    const CsvTable mixed{{"name", "v"}, {{std::string("x_even"), 0.5}}};
    EXPECT_EQ(mixed.to_string(), "name,v\nx_even,0.5\n");
}

TEST(TextIo, UnwritablePathRaisesIoError) {
    EXPECT_THROW(write_text_file("/proc/definitely/not/here.csv", "x"), IoError);
    EXPECT_THROW(read_text_file("/nonexistent/spreadlab.cfg"), IoError);
}

TEST(OutputDir, ResolutionOrder) {
    ::unsetenv(kOutputRootEnv);
    EXPECT_EQ(resolve_output_dir("given", std::string("cfg"), "kind"), fs::path("given"));
    EXPECT_EQ(resolve_output_dir("", std::string("cfg"), "kind"), fs::path("cfg"));
    EXPECT_EQ(resolve_output_dir("", std::nullopt, "kind"), fs::path("runs") / "kind");
    ::setenv(kOutputRootEnv, "/tmp/root", 1);
    EXPECT_EQ(resolve_output_dir("", std::nullopt, "kind"), fs::path("/tmp/root/runs/kind"));
    EXPECT_EQ(resolve_output_dir("/abs/dir", std::nullopt, "kind"), fs::path("/abs/dir"));
    ::unsetenv(kOutputRootEnv);
}

TEST(Dispatch, FrontSpeedPrintsRows) {
    const auto r = call({"front-speed", "--kind", "smooth-hump", "--theta", "0.5", "--amplitude",
                         "4", "--gamma", "0,0.2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream lines(r.out);
    std::string header, row0, row1;
    std::getline(lines, header);
    std::getline(lines, row0);
    std::getline(lines, row1);
    EXPECT_EQ(header, "gamma,c");
    const auto nl = IgnitionNonlinearity::smooth_hump(0.5, 4.0);
    EXPECT_EQ(row0, "0," + format_double(solve_speed(0.0, nl)));
    EXPECT_EQ(row1.rfind(format_double(0.2) + ",", 0), 0u);
}

TEST(Dispatch, FrontSpeedFromConfigAndProfile) {
    TempDir tmp;
    const auto cfg = write_file(tmp.path, "front.cfg", kFrontConfig);
    const auto prof = tmp.path / "profile.csv";
    const auto r = call({"front-speed", "--config", cfg.string(), "--profile", prof.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
    EXPECT_EQ(read_text_file(prof).rfind("x,phi\n", 0), 0u);
}

TEST(Dispatch, UsageErrors) {
    const auto bad = call({"frobnicate"});
    EXPECT_EQ(bad.code, kExitUsage);
    EXPECT_NE(bad.err.find("front-speed"), std::string::npos);
    EXPECT_EQ(call({}).code, kExitUsage);
    EXPECT_EQ(call({"front-speed", "--theta", "0.5"}).code, kExitUsage);
    EXPECT_EQ(call({"experiment", "heat-diagnostics"}).code, kExitUsage);
    EXPECT_EQ(call({"front-speed", "--theta", "0.5", "--amplitude", "4", "--gamma", "0.7"}).code,
              kExitUsage);
}

TEST(Dispatch, ConfigErrorsExitWithUsage) {
    TempDir tmp;
    std::string text = kFrontConfig;
    text.replace(text.find("theta"), 5, "thetta");
    const auto cfg = write_file(tmp.path, "bad.cfg", text);
    const auto r = call({"front-speed", "--config", cfg.string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("thetta"), std::string::npos);
    EXPECT_EQ(call({"simulate", "--config", (tmp.path / "missing.cfg").string()}).code,
              kExitUsage);
}

TEST(Dispatch, HeatDiagnosticsExperimentIsReproducible) {
    TempDir tmp;
    const fs::path config = fs::path(SPREADLAB_CONFIG_DIR) / "heat_diagnostics.cfg";
    const auto first = tmp.path / "a";
    const auto second = tmp.path / "b";
    const auto r1 = call({"experiment", "heat-diagnostics", "--config", config.string(), "--output",
                          first.string()});
    ASSERT_EQ(r1.code, kExitOk) << r1.out << r1.err;
    EXPECT_EQ(r1.out.find("FAIL"), std::string::npos);
    const auto r2 = call({"experiment", "heat-diagnostics", "--config", config.string(), "--output",
                          second.string()});
    ASSERT_EQ(r2.code, kExitOk);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(first)) {
        const auto name = entry.path().filename();
        ASSERT_TRUE(fs::exists(second / name)) << name;
        ++files;
        if (name == "manifest.txt") {
            auto a = parse_manifest(read_text_file(entry.path()));
            auto b = parse_manifest(read_text_file(second / name));
            a.wall_clock_seconds = b.wall_clock_seconds = 0.0;
            a.command = b.command = "";
            EXPECT_EQ(a.to_text(), b.to_text());
        } else {
            EXPECT_EQ(read_text_file(entry.path()), read_text_file(second / name)) << name;
        }
    }
    EXPECT_GE(files, 2u);
    const auto rep = call({"report", first.string()});
    EXPECT_EQ(rep.code, kExitOk);
    EXPECT_NE(rep.out.find("criteria pass"), std::string::npos);
    EXPECT_EQ(call({"report", (tmp.path / "nowhere").string()}).code, kExitUsage);
}

TEST(Dispatch, OutputRootFromEnvironment) {
    TempDir tmp;
    const fs::path config = fs::path(SPREADLAB_CONFIG_DIR) / "heat_diagnostics.cfg";
    ::setenv(kOutputRootEnv, tmp.path.c_str(), 1);
    const auto r = call({"experiment", "heat-diagnostics", "--config", config.string()});
    ::unsetenv(kOutputRootEnv);
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(fs::exists(tmp.path / "heat-diagnostics" / "manifest.txt"));
}

TEST(Dispatch, HeatEvalWritesSamples) {
    TempDir tmp;
    const auto pl = write_file(tmp.path, "ramp.pl", serialize(PiecewiseLinear({-1.0, 1.0}, {1.0, 0.0})));
    const auto r = call({"heat-eval", "--pl", pl.string(), "--t", "1", "--x0", "-1", "--x1", "1",
                         "--dx", "0.5"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
    EXPECT_EQ(r.out.rfind("x,v\n", 0), 0u);
    const auto csv = tmp.path / "v.csv";
    EXPECT_EQ(call({"heat-eval", "--pl", pl.string(), "--t", "1", "--x0", "0", "--x1", "1",
                    "--output", csv.string()})
                  .code,
              kExitOk);
    EXPECT_TRUE(fs::exists(csv));
    EXPECT_EQ(call({"heat-eval", "--pl", pl.string(), "--t", "1", "--x0", "1", "--x1", "0"}).code,
              kExitUsage);
}

TEST(Dispatch, SimulateWritesSnapshotsTraceAndRays) {
    TempDir tmp;
    const auto cfg = write_file(tmp.path, "sim.cfg", kSimulateConfig);
    const auto dir = tmp.path / "run";
    const auto r = call({"simulate", "--config", cfg.string(), "--output", dir.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* name : {"snapshot_0.csv", "snapshot_1.csv", "snapshot_2.csv", "snapshots.csv",
                             "trace.csv", "rays.csv", "manifest.txt"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
    EXPECT_EQ(read_text_file(dir / "snapshots.csv"), "snapshot,t\n0,0\n1,10\n2,20\n");
    const auto manifest = parse_manifest(read_text_file(dir / "manifest.txt"));
    EXPECT_TRUE(manifest.criteria.empty());
    EXPECT_EQ(manifest.config.numerics->T, 20.0);
}

TEST(Dispatch, SmallOscillatoryExperimentEmitsTables) {
    TempDir tmp;
    const auto cfg = write_file(tmp.path, "osc.cfg", kSmallOscillatory);
    const auto dir = tmp.path / "osc";
    const auto r = call({"experiment", "theorem-oscillatory", "--config", cfg.string(), "--output",
                         dir.string()});
    EXPECT_TRUE(r.code == kExitOk || r.code == kExitFailure) << r.err;
    EXPECT_EQ(r.out.find("ERROR"), std::string::npos) << r.out;
    for (const char* name : {"lemma_speeds.csv", "speeds.csv", "trace.csv", "manifest.txt"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
    EXPECT_EQ(read_text_file(dir / "lemma_speeds.csv").rfind("family,", 0), 0u);
    const auto manifest = parse_manifest(read_text_file(dir / "manifest.txt"));
    EXPECT_FALSE(manifest.criteria.empty());
    EXPECT_TRUE(manifest.errors.empty());
}
