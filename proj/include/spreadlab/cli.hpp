#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spreadlab {

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default root for run directories.
inline constexpr const char* kOutputRootEnv = "SPREADLAB_OUTPUT_ROOT";

/// Explicit directory if given, else the config's output dir, else
/// `runs/<fallback_name>`; relative paths are placed under the output root
/// from the environment when it is set.
std::filesystem::path resolve_output_dir(const std::string& explicit_dir,
                                         const std::optional<std::string>& config_dir,
                                         const std::string& fallback_name);

/// Runs one subcommand: front-speed, simulate, heat-eval, experiment, report.
/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spreadlab
