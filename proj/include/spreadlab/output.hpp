#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spreadlab/config.hpp"
#include "spreadlab/experiment.hpp"
#include "spreadlab/textio.hpp"

namespace spreadlab {

inline constexpr std::string_view kToolVersion = "0.3.0";

struct RunManifest {
    RunConfig config;
    std::string command;
    std::string tool_version{kToolVersion};
    double wall_clock_seconds = 0.0;
    std::vector<CriterionResult> criteria;
    std::vector<std::string> errors;

    bool all_pass() const;
    /// Config echo, then [run], then one [criterion.<name>] section per row.
    std::string to_text() const;
};

/// Inverse of RunManifest::to_text.
RunManifest parse_manifest(std::string_view text);

/// Creates `dir`, writes each table as CSV and the manifest as
/// `manifest.txt`. Existing files are overwritten.
void write_outputs(const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, CsvTable>>& tables,
                   const RunManifest& manifest);

}  // namespace spreadlab
